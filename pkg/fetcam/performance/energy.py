import math
from dataclasses import dataclass
from typing import Iterable

import numpy as np

from fetcam.cell import initialize_cell
from fetcam.cell.divider import DividerParams, evaluate_divider
from fetcam.cell.two_fefet_cell import FeFetPair
from fetcam.cell_types import CellDesign, CellEncodingError, TernaryBit
from fetcam.configuration.configuration_types import ConfigurationError
from fetcam.device.fefet import FeFetParams, drain_current, read_resistance
from fetcam.device.mosfet import MosfetParams
from fetcam.device_types import PolarizationState
from fetcam.performance.constants import CellConstants
from fetcam.performance.timing import SearchLatency, TimingParams, ml_capacitance, search_latency

SEARCH_BITS = (TernaryBit.ZERO, TernaryBit.ONE)


@dataclass(frozen=True)
class EnergyBreakdown:
    """
    Search energy of one row, in joules.

    divider_static holds the divider current of 1.5T1Fe cells and the OFF-path
    leakage of 2FeFET cells.
    """
    precharge: float = 0.0
    sense_amp: float = 0.0
    divider_static: float = 0.0
    signal_switching: float = 0.0

    @property
    def total(self) -> float:
        return math.fsum((self.precharge, self.sense_amp, self.divider_static, self.signal_switching))

    def scaled(self, factor: float) -> "EnergyBreakdown":
        return EnergyBreakdown(precharge=self.precharge * factor, sense_amp=self.sense_amp * factor,
                               divider_static=self.divider_static * factor,
                               signal_switching=self.signal_switching * factor)

    @staticmethod
    def combine(breakdowns: Iterable["EnergyBreakdown"]) -> "EnergyBreakdown":
        """Sum breakdowns component-wise; the result does not depend on their order."""
        parts = list(breakdowns)
        return EnergyBreakdown(precharge=math.fsum(part.precharge for part in parts),
                               sense_amp=math.fsum(part.sense_amp for part in parts),
                               divider_static=math.fsum(part.divider_static for part in parts),
                               signal_switching=math.fsum(part.signal_switching for part in parts))


def search_voltage_table(design: CellDesign, dev: FeFetParams, div: DividerParams) -> dict[TernaryBit, dict[str, float]]:
    """The line voltages driven per cell for each searched symbol."""
    cell = initialize_cell(design, dev, div)
    return {bit: cell.search_voltages(bit) for bit in SEARCH_BITS}


def write_voltage_table(design: CellDesign, dev: FeFetParams, div: DividerParams) -> dict[TernaryBit, dict[str, float]]:
    """The line voltages driven per cell for each written symbol."""
    cell = initialize_cell(design, dev, div)
    return {bit: cell.write_voltages(bit) for bit in TernaryBit}


class SearchEnergyModel:
    """
    Per-row search energy for one design and word length.

    Static power and switched line voltages are tabulated per (stored symbol,
    searched symbol) so that a row is costed with a pair of table lookups.
    """

    def __init__(self, design: CellDesign, word_len: int, dev: FeFetParams, div: DividerParams, tml: MosfetParams,
                 t: TimingParams):
        self.design = design
        self.word_len = word_len
        self.vdd = div.vdd
        self.timing = t
        self.c_ml = ml_capacitance(design, word_len, t)
        self.latency: SearchLatency = search_latency(design, word_len, dev, div, tml, t)

        # Rows are stored symbols, columns are searched symbols.
        self.static_power = np.zeros((len(TernaryBit), len(SEARCH_BITS)))
        for stored in TernaryBit:
            for search_bit in SEARCH_BITS:
                self.static_power[stored.value, search_bit.value] = self._static_power(stored, search_bit, dev, div)

        table = search_voltage_table(design, dev, div)
        self.switched_v2 = np.array([math.fsum(v * v for v in table[bit].values()) for bit in SEARCH_BITS])

    def _static_power(self, stored: TernaryBit, search_bit: TernaryBit, dev: FeFetParams,
                      div: DividerParams) -> float:
        cell = initialize_cell(self.design, dev, div)
        states = cell.encode(stored)
        if self.design.is_paired:
            match = evaluate_divider(read_resistance(dev, states[0]), search_bit, div)
            return div.vdd * match.static_current

        # Only a non-conducting activated FeFET leaks; a conducting one discharges the ML.
        activated = FeFetPair(*states).activated(search_bit)
        if activated is PolarizationState.LVT:
            return 0.0
        return div.vdd * drain_current(dev, activated, div.v_search, div.vdd, dev.read_gate)

    def step_columns(self, executed_steps: int) -> slice:
        """Columns whose cells are searched within the executed steps."""
        if not self.design.is_paired or executed_steps >= 2:
            return slice(None)
        return slice(0, None, 2)

    def row_energy(self, stored_row: np.ndarray, query: np.ndarray, executed_steps: int) -> EnergyBreakdown:
        """
        Cost one searched row.
        :param stored_row: The stored symbol codes of the row.
        :param query: The searched symbol codes.
        :param executed_steps: The number of search steps the row executed.
        :return: The energy breakdown.
        """
        if executed_steps not in (1, 2) or (executed_steps == 2 and not self.design.is_paired):
            raise ConfigurationError(f"{self.design.label} cannot execute {executed_steps} search steps")
        if np.any(query == TernaryBit.DONT_CARE.value):
            raise CellEncodingError("Search queries carry only 0 and 1")

        columns = self.step_columns(executed_steps)
        stored = stored_row[columns]
        searched = query[columns]

        window = self.latency.one_step
        static = math.fsum(self.static_power[stored, searched].tolist()) * window
        signal = self.timing.c_sl_per_cell[self.design] * math.fsum(self.switched_v2[searched].tolist())
        return EnergyBreakdown(precharge=self.c_ml * self.vdd ** 2, sense_amp=self.timing.sa_energy,
                               divider_static=static, signal_switching=signal)


def search_energy(design: CellDesign, stored_row: np.ndarray, query: np.ndarray, executed_steps: int,
                  t: TimingParams, dev: FeFetParams, div: DividerParams, tml: MosfetParams) -> EnergyBreakdown:
    """Cost one searched row without keeping the tabulated model around."""
    model = SearchEnergyModel(design, len(stored_row), dev, div, tml, t)
    return model.row_energy(stored_row, query, executed_steps)


def average_search_energy(e_one_step: float, e_two_step: float, step1_miss_rate: float) -> float:
    """
    Weight the one-step and two-step energies by the step-1 miss rate.
    :param e_one_step: The energy of a search terminated after step 1.
    :param e_two_step: The energy of a search executing both steps.
    :param step1_miss_rate: The fraction of searches terminated after step 1.
    :return: The expected energy.
    """
    if not 0.0 <= step1_miss_rate <= 1.0:
        raise ConfigurationError(f"Step-1 miss rate must lie in [0, 1], got {step1_miss_rate}")
    return step1_miss_rate * e_one_step + (1.0 - step1_miss_rate) * e_two_step


def write_energy(design: CellDesign, words: np.ndarray, cc: CellConstants, dev: FeFetParams) -> float:
    """
    Get the energy of programming a set of words.

    A 2FeFET cell switches both of its FeFETs. A 1.5T1Fe cell switches one,
    and a don't-care write at Vm costs the Vw write energy scaled by (Vm/Vw)^2.
    :param design: The cell design.
    :param words: The stored symbol codes.
    :param cc: The cell constants.
    :param dev: The device parameters.
    :return: The write energy in joules.
    """
    per_fefet = cc.fe_write_energy[design.device_kind]
    cells = int(np.size(words))
    if not design.is_paired:
        return 2.0 * per_fefet * cells

    dont_cares = int(np.count_nonzero(np.asarray(words) == TernaryBit.DONT_CARE.value))
    mid_scale = (dev.write_mid_level / dev.write_pos_threshold) ** 2
    return per_fefet * ((cells - dont_cares) + dont_cares * mid_scale)


def write_energy_per_cell(design: CellDesign, cc: CellConstants) -> float:
    """The per-cell write energy of the reporting convention: half the cells Zero, half One."""
    per_fefet = cc.fe_write_energy[design.device_kind]
    return per_fefet if design.is_paired else 2.0 * per_fefet
