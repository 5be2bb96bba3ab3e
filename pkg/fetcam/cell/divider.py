from dataclasses import dataclass, field

from loguru import logger

from fetcam.cell_types import CellEncodingError, TernaryBit
from fetcam.configuration.configuration_types import ConfigurationError
from fetcam.device.fefet import FeFetParams, read_resistance
from fetcam.device_types import PolarizationState

# Required separation for the "much less than" relation R_P << R_OFF.
MARGIN_FACTOR = 10.0
MARGIN_TOLERANCE = 1e-9


@dataclass(frozen=True)
class DividerParams:
    """
    Electrical levels of one device family's search path.

    v_search is the search-line level of the 2FeFET designs; the remaining
    fields describe the 1.5T1Fe voltage divider.
    """
    vdd: float
    v_sel: float
    v_b: float
    v_search: float
    r_n: float
    r_p: float
    tml_vth: float

    def __post_init__(self) -> None:
        if self.vdd <= 0 or self.r_n <= 0 or self.r_p <= 0:
            raise ConfigurationError("Divider supply and resistances must be positive")


@dataclass(frozen=True)
class ResistanceSet:
    """FeFET resistances of the three states at the search bias."""
    r_on: float
    r_m: float
    r_off: float

    @staticmethod
    def from_device(dev: FeFetParams) -> "ResistanceSet":
        return ResistanceSet(r_on=read_resistance(dev, PolarizationState.LVT),
                             r_m=read_resistance(dev, PolarizationState.MVT),
                             r_off=read_resistance(dev, PolarizationState.HVT))

    def of(self, state: PolarizationState) -> float:
        return {
            PolarizationState.LVT: self.r_on,
            PolarizationState.MVT: self.r_m,
            PolarizationState.HVT: self.r_off,
        }[state]


@dataclass(frozen=True)
class OrderReport:
    """The outcome of a resistance-order check; violations are named constraints."""
    violations: list[str] = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return not self.violations

    @property
    def first_violation(self) -> str:
        return self.violations[0] if self.violations else ""


@dataclass(frozen=True)
class DividerMatch:
    """The steady state of a 1.5T1Fe divider for one searched cell."""
    tml_conducting: bool
    v_sl_bar: float
    static_current: float


def _require_search_bit(search_bit: TernaryBit) -> None:
    if search_bit is TernaryBit.DONT_CARE:
        raise CellEncodingError("Search queries carry only 0 and 1")


def active_divider_resistance(search_bit: TernaryBit, div: DividerParams) -> float:
    """TN completes the divider when searching 0, TP when searching 1."""
    _require_search_bit(search_bit)
    return div.r_n if search_bit is TernaryBit.ZERO else div.r_p


def divider_voltage(search_bit: TernaryBit, r_fe: float, div: DividerParams) -> float:
    """
    Estimate the SL_bar node voltage.
    :param search_bit: The searched symbol.
    :param r_fe: The FeFET resistance.
    :param div: The divider parameters.
    :return: vdd·R_N/(R_FE + R_N) when searching 0, vdd·R_FE/(R_FE + R_P) when searching 1.
    """
    _require_search_bit(search_bit)
    if r_fe <= 0:
        raise ConfigurationError(f"FeFET resistance must be positive, got {r_fe}")

    if search_bit is TernaryBit.ZERO:
        return div.vdd * div.r_n / (r_fe + div.r_n)
    return div.vdd * r_fe / (r_fe + div.r_p)


def resistance_order_report(resistances: ResistanceSet, div: DividerParams) -> OrderReport:
    """
    Check R_ON < R_N < R_M < R_P << R_OFF and the TML sensing margins.
    :param resistances: The FeFET state resistances.
    :param div: The divider parameters.
    :return: The report, listing violations in check order.
    """
    violations = []
    chain = [("R_ON", resistances.r_on), ("R_N", div.r_n), ("R_M", resistances.r_m), ("R_P", div.r_p),
             ("R_OFF", resistances.r_off)]
    for (low_name, low), (high_name, high) in zip(chain, chain[1:]):
        if not low < high:
            violations.append(f"{low_name} < {high_name}")

    if div.r_p > resistances.r_off / MARGIN_FACTOR * (1 + MARGIN_TOLERANCE):
        violations.append("R_P << R_OFF")

    # Every mismatch must turn TML on and every match must leave it off.
    for state, stored in ((PolarizationState.HVT, TernaryBit.ZERO), (PolarizationState.LVT, TernaryBit.ONE),
                          (PolarizationState.MVT, TernaryBit.DONT_CARE)):
        for search_bit in (TernaryBit.ZERO, TernaryBit.ONE):
            voltage = divider_voltage(search_bit, resistances.of(state), div)
            should_conduct = stored is not TernaryBit.DONT_CARE and stored is not search_bit
            if should_conduct and not voltage > div.tml_vth:
                violations.append(f"V_SL_bar({state.name}, search {search_bit.symbol}) > V_th(TML)")
            if not should_conduct and not voltage < div.tml_vth:
                violations.append(f"V_SL_bar({state.name}, search {search_bit.symbol}) < V_th(TML)")

    return OrderReport(violations)


def check_resistance_order(dev: FeFetParams, div: DividerParams) -> OrderReport:
    """Check the divider constraints against a device's search-bias resistances."""
    resistances = ResistanceSet.from_device(dev)
    logger.debug(f"{dev.device_kind.name} resistances: R_ON = {resistances.r_on:.4g}, R_M = {resistances.r_m:.4g}, "
                 f"R_OFF = {resistances.r_off:.4g}, R_N = {div.r_n:.4g}, R_P = {div.r_p:.4g} Ohm")
    return resistance_order_report(resistances, div)


def evaluate_divider(r_fe: float, search_bit: TernaryBit, div: DividerParams) -> DividerMatch:
    """
    Resolve the divider and the TML gating decision for one FeFET resistance.
    :param r_fe: The FeFET resistance.
    :param search_bit: The searched symbol.
    :param div: The divider parameters.
    :return: The TML decision, the SL_bar voltage and the divider current.
    """
    v_sl_bar = divider_voltage(search_bit, r_fe, div)
    static_current = div.vdd / (r_fe + active_divider_resistance(search_bit, div))
    return DividerMatch(tml_conducting=v_sl_bar > div.tml_vth, v_sl_bar=v_sl_bar, static_current=static_current)


def evaluate_match_1p5(stored: PolarizationState, search_bit: TernaryBit, dev: FeFetParams,
                       div: DividerParams) -> DividerMatch:
    """
    Evaluate one searched 1.5T1Fe cell.
    :param stored: The FeFET state.
    :param search_bit: The searched symbol.
    :param dev: The device parameters.
    :param div: The divider parameters, which must pass check_resistance_order.
    :return: The divider match.
    """
    report = check_resistance_order(dev, div)
    if not report.ok:
        raise ConfigurationError(f"Divider constraint violated: {report.first_violation}")

    return evaluate_divider(read_resistance(dev, stored), search_bit, div)


def weakest_conducting_voltage(dev: FeFetParams, div: DividerParams) -> float:
    """
    Get the lowest SL_bar voltage among the mismatch cases.

    Store 1/search 0 and store 0/search 1 are the two ways a cell turns TML
    on; the lower of their gate voltages bounds the discharge speed.
    """
    resistances = ResistanceSet.from_device(dev)
    return min(divider_voltage(TernaryBit.ZERO, resistances.r_on, div),
               divider_voltage(TernaryBit.ONE, resistances.r_off, div))
