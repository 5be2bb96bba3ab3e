from dataclasses import dataclass, field

from fetcam.cell import initialize_cell
from fetcam.cell.divider import check_resistance_order
from fetcam.cell_types import CellDesign, TernaryBit, ternary_match
from fetcam.configuration.configuration_manager import ConfigurationManager
from fetcam.configuration.configuration_types import ConfigurationError
from fetcam.device.fefet import FeFetParams, read_resistance, threshold_voltage
from fetcam.device_types import DeviceKind, GateKind, MosfetKind, PolarizationState
from fetcam.performance.timing import pull_resistance

# Minimum R_OFF / R_ON at the search bias.
MIN_ON_OFF_RATIO = 1e4


@dataclass(frozen=True)
class Check:
    name: str
    passed: bool
    detail: str = ""

    def line(self) -> str:
        status = "PASS" if self.passed else "FAIL"
        return f"{status}  {self.name}" + (f": {self.detail}" if self.detail else "")


@dataclass
class ValidationReport:
    checks: list[Check] = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return all(check.passed for check in self.checks)

    @property
    def failures(self) -> list[Check]:
        return [check for check in self.checks if not check.passed]

    def lines(self) -> list[str]:
        return [check.line() for check in self.checks]


def memory_window_check(dev: FeFetParams) -> Check:
    """
    Check that the read voltage separates the LVT and HVT states of the read gate.
    :param dev: The device parameters.
    :return: The check.
    """
    gate = dev.read_gate
    lvt = threshold_voltage(dev, PolarizationState.LVT, gate)
    hvt = threshold_voltage(dev, PolarizationState.HVT, gate)
    passed = lvt < dev.v_read < hvt
    detail = f"MW = {hvt - lvt:.2f} V"
    if not passed:
        detail += f", read voltage {dev.v_read:.2f} V outside ({lvt:.2f} V, {hvt:.2f} V)"
    return Check(name=f"{dev.device_kind.label} memory window", passed=passed, detail=detail)


def on_off_check(dev: FeFetParams) -> Check:
    """
    Check the ON/OFF ratio, both as configured and as measured at the search bias.
    :param dev: The device parameters.
    :return: The check.
    """
    measured = read_resistance(dev, PolarizationState.HVT) / read_resistance(dev, PolarizationState.LVT)
    floor = MIN_ON_OFF_RATIO * (1.0 - 1e-9)
    passed = measured >= floor and dev.on_off_ratio >= floor
    detail = f"R_OFF/R_ON = {measured:.3g}, on_off_ratio = {dev.on_off_ratio:.3g}"
    if not passed:
        detail += f", need >= {MIN_ON_OFF_RATIO:g}"
    return Check(name=f"{dev.device_kind.label} on/off ratio", passed=passed, detail=detail)


def truth_table_check(design: CellDesign, manager: ConfigurationManager) -> Check:
    """
    Compare the cell mismatch decision with the ternary match over all six stored and searched pairs.
    :param design: The cell design.
    :param manager: The configuration.
    :return: The check.
    """
    cell = initialize_cell(design, manager.device_params(design.device_kind),
                           manager.divider_params(design.device_kind))
    wrong = []
    for stored in TernaryBit:
        for search_bit in (TernaryBit.ZERO, TernaryBit.ONE):
            if cell.mismatch(cell.encode(stored), search_bit) == ternary_match(stored, search_bit):
                wrong.append(f"{stored.symbol}/{search_bit.symbol}")

    detail = "6/6 cases" if not wrong else f"wrong for stored/search {', '.join(wrong)}"
    return Check(name=f"{design.label} truth table", passed=not wrong, detail=detail)


def validate(manager: ConfigurationManager) -> ValidationReport:
    """
    Run the design-validity checks of a configuration.

    Per device family: the read voltage against the memory window, the ON/OFF
    ratio, the back-gate slope degradation and the divider constraints. Per
    design: the truth-table self-test and, for 1.5T1Fe designs, that TML turns
    on for every mismatch.
    :param manager: The configuration.
    :return: The report, one entry per check.
    """
    report = ValidationReport()
    tml = manager.mosfets()[MosfetKind.TML]

    for kind in DeviceKind:
        dev = manager.device_params(kind)
        div = manager.divider_params(kind)
        report.checks.append(memory_window_check(dev))
        report.checks.append(on_off_check(dev))
        report.checks.append(Check(name=f"{kind.label} back-gate slope degradation",
                                   passed=dev.subthreshold_slope(GateKind.BACK_GATE) >
                                   dev.subthreshold_slope(GateKind.FRONT_GATE),
                                   detail=f"SS = {dev.ss_front:g} / {dev.ss_back:g} mV/dec"))

        order = check_resistance_order(dev, div)
        if order.ok:
            report.checks.append(Check(name=f"{kind.label} resistance order", passed=True,
                                       detail="R_ON < R_N < R_M < R_P << R_OFF"))
        for violation in order.violations:
            report.checks.append(Check(name=f"{kind.label} resistance order", passed=False, detail=violation))

        for design in CellDesign:
            if design.device_kind is not kind:
                continue
            if design.is_paired and not order.ok:
                report.checks.append(Check(name=f"{design.label} truth table", passed=False,
                                           detail="skipped: divider constraints violated"))
                continue

            report.checks.append(truth_table_check(design, manager))
            if design.is_paired:
                try:
                    r_pull = pull_resistance(design, dev, div, tml)
                    report.checks.append(Check(name=f"{design.label} TML turn-on", passed=True,
                                               detail=f"r_pull = {r_pull:.4g} Ohm"))
                except ConfigurationError as err:
                    report.checks.append(Check(name=f"{design.label} TML turn-on", passed=False, detail=str(err)))

    return report
