import math
from dataclasses import dataclass

from fetcam.cell.divider import DividerParams, weakest_conducting_voltage
from fetcam.cell_types import CellDesign
from fetcam.configuration.configuration_types import ConfigurationError
from fetcam.device.fefet import Bias, FeFetParams, effective_resistance
from fetcam.device.mosfet import MosfetParams, mosfet_resistance
from fetcam.device_types import PolarizationState


@dataclass(frozen=True)
class TimingParams:
    """
    Match-line parasitics, sensing and pulse timing.

    Capacitances are in farads, energies in joules and times in seconds.
    c_ml_per_cell is the drain load of one 2FeFET device or of one TML (shared
    by two 1.5T1Fe cells); c_sl_per_cell is the search-line load switched per
    cell and driven line.
    """
    c_ml_per_cell: dict[CellDesign, float]
    c_sl_per_cell: dict[CellDesign, float]
    c_wire_per_cell: float
    c_sa_input: float
    sa_energy: float
    sa_threshold: float
    sense_fraction: float
    slack_fraction: float
    write_pulse: float
    search_pulse: float
    trace_step: float

    def __post_init__(self) -> None:
        for design in CellDesign:
            if self.c_ml_per_cell.get(design, 0.0) <= 0:
                raise ConfigurationError(f"timing.c_ml_per_cell for {design.label} must be positive")
            if self.c_sl_per_cell.get(design, -1.0) < 0:
                raise ConfigurationError(f"timing.c_sl_per_cell for {design.label} must be non-negative")

        for name in ("c_wire_per_cell", "c_sa_input", "sa_energy", "sa_threshold", "write_pulse", "search_pulse",
                     "trace_step"):
            if getattr(self, name) <= 0:
                raise ConfigurationError(f"timing.{name} must be positive")
        if not 0 < self.sense_fraction < 1:
            raise ConfigurationError(f"timing.sense_fraction must lie in (0, 1), got {self.sense_fraction}")
        if self.slack_fraction < 0:
            raise ConfigurationError("timing.slack_fraction must be non-negative")


def check_sense_threshold(t: TimingParams, vdd: float) -> None:
    """Require the SA threshold to sit where the latency model stops the ML decay."""
    expected = t.sense_fraction * vdd
    if not math.isclose(t.sa_threshold, expected, rel_tol=1e-9):
        raise ConfigurationError(f"timing.sa_threshold ({t.sa_threshold} V) must equal timing.sense_fraction x "
                                 f"divider.vdd ({expected:.6g} V)")


@dataclass(frozen=True)
class SearchLatency:
    one_step: float
    full: float


def ml_capacitance(design: CellDesign, word_len: int, t: TimingParams) -> float:
    """
    Get the total match-line load of a word.
    :param design: The cell design.
    :param word_len: The number of cells on the match line.
    :param t: The timing parameters.
    :return: The SA input load plus the per-cell device and wire loads, in farads.
    """
    if word_len < 1:
        raise ConfigurationError(f"Word length must be at least 1, got {word_len}")

    c_device = t.c_ml_per_cell[design]
    if design.is_paired:
        # One TML per cell pair.
        return t.c_sa_input + word_len / 2 * (c_device + 2 * t.c_wire_per_cell)
    return t.c_sa_input + word_len * (2 * c_device + t.c_wire_per_cell)


def discharge_latency(c_ml: float, r_pull: float, t: TimingParams) -> float:
    """Time for a first-order RC discharge to fall to the sense fraction of the precharge level."""
    if c_ml <= 0 or r_pull <= 0:
        raise ConfigurationError(f"Discharge needs a positive load and resistance, got {c_ml} F / {r_pull} Ohm")
    return r_pull * c_ml * math.log(1.0 / t.sense_fraction)


def pull_resistance(design: CellDesign, dev: FeFetParams, div: DividerParams, tml: MosfetParams) -> float:
    """
    Get the resistance of a single conducting pull-down path.

    A 2FeFET cell pulls down through its activated LVT FeFET. A 1.5T1Fe cell
    pulls down through TML, whose ON resistance is scaled by its gate drive at
    the weakest conducting divider voltage.
    :param design: The cell design.
    :param dev: The device parameters.
    :param div: The divider parameters.
    :param tml: The ML pull-down transistor.
    :return: The pull-down resistance in ohms.
    """
    if not design.is_paired:
        bias = Bias(v_gs=div.v_search, v_ds=dev.v_ds_read)
        return effective_resistance(dev, PolarizationState.LVT, bias, dev.read_gate)

    v_gate = weakest_conducting_voltage(dev, div)
    if v_gate <= tml.vth:
        raise ConfigurationError(f"TML never turns on: weakest divider voltage {v_gate:.4f} V <= {tml.vth} V")

    return mosfet_resistance(tml, v_gate) * (div.vdd - tml.vth) / (v_gate - tml.vth)


def search_latency(design: CellDesign, word_len: int, dev: FeFetParams, div: DividerParams, tml: MosfetParams,
                   t: TimingParams) -> SearchLatency:
    """
    Get the worst-case (one mismatching cell) search latency of a word.
    :return: The one-step latency and the full latency, which for 1.5T1Fe
    designs covers both steps plus the inter-step slack.
    """
    one_step = discharge_latency(ml_capacitance(design, word_len, t), pull_resistance(design, dev, div, tml), t)
    if not design.is_paired:
        return SearchLatency(one_step=one_step, full=one_step)

    return SearchLatency(one_step=one_step, full=(2.0 + t.slack_fraction) * one_step)
