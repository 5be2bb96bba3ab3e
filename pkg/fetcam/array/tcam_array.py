import itertools
from dataclasses import dataclass, field
from typing import Optional

import numpy as np
from loguru import logger

from fetcam.array_types import ArrayShapeError, TerminationGranularity
from fetcam.cell import initialize_cell
from fetcam.cell.cell import Cell
from fetcam.cell.divider import DividerParams
from fetcam.cell_types import CellDesign, CellEncodingError, TernaryBit
from fetcam.configuration.configuration_types import ConfigurationError
from fetcam.device.fefet import FeFetParams, polarize
from fetcam.device.mosfet import MosfetParams
from fetcam.device_types import PolarizationState
from fetcam.performance.constants import CellConstants
from fetcam.performance.energy import EnergyBreakdown, SearchEnergyModel, write_energy, write_voltage_table
from fetcam.performance.timing import TimingParams, check_sense_threshold


@dataclass(frozen=True)
class ArrayConfig:
    """
    An M x N array of one cell design with its electrical parameters.

    For 1.5T1Fe designs even columns hold cell 1 of each pair (searched in
    step 1) and odd columns hold cell 2 (searched in step 2).
    """
    rows: int
    cols: int
    design: CellDesign
    dev: FeFetParams
    div: DividerParams
    tml: MosfetParams
    timing: TimingParams
    constants: CellConstants
    driver_shared: bool = False
    step1_miss_rate: float = 0.9
    early_termination: bool = True
    termination_granularity: TerminationGranularity = TerminationGranularity.ROW

    def __post_init__(self) -> None:
        if self.rows < 1 or self.cols < 1:
            raise ArrayShapeError(f"Arrays need at least one row and column, got {self.rows} x {self.cols}")
        if self.design.is_paired and self.cols % 2:
            raise ArrayShapeError(f"{self.design.label} pairs its cells, so the column count must be even "
                                  f"(got {self.cols})")
        if not 0.0 <= self.step1_miss_rate <= 1.0:
            raise ConfigurationError(f"array.step1_miss_rate must lie in [0, 1], got {self.step1_miss_rate}")
        if self.dev.device_kind is not self.design.device_kind:
            raise ConfigurationError(f"{self.design.label} needs a {self.design.device_kind.name} device")
        check_sense_threshold(self.timing, self.div.vdd)

    @property
    def fefets_per_cell(self) -> int:
        return 1 if self.design.is_paired else 2

    def cell(self) -> Cell:
        return initialize_cell(self.design, self.dev, self.div)

    def energy_model(self) -> SearchEnergyModel:
        return SearchEnergyModel(self.design, self.cols, self.dev, self.div, self.tml, self.timing)


@dataclass
class ArrayState:
    """
    The programmed contents of an array.

    stored holds TernaryBit codes (M x N); polarization holds the
    PolarizationState codes of every FeFET (M x N x FeFETs per cell).
    """
    stored: np.ndarray
    polarization: np.ndarray
    ml_voltages: np.ndarray

    @property
    def rows(self) -> int:
        return int(self.stored.shape[0])

    @property
    def cols(self) -> int:
        return int(self.stored.shape[1])


@dataclass(frozen=True)
class ProgramResult:
    state: ArrayState
    write_steps: int
    write_energy: float
    write_latency: float


@dataclass(frozen=True)
class RowOutcome:
    """
    The search result of one row.

    terminated_at_step is the step in which the mismatch was detected, or None
    for a match.
    """
    row: int
    matched: bool
    terminated_at_step: Optional[int]
    executed_steps: int
    pull_downs: tuple[int, ...]
    latency: float
    energy: EnergyBreakdown

    @property
    def pull_down_count(self) -> int:
        return sum(self.pull_downs)


@dataclass(frozen=True)
class SearchOutcome:
    match_mask: np.ndarray
    per_row: list[RowOutcome]
    sel_b_active: bool
    total_latency: float
    total_energy: EnergyBreakdown = field(default_factory=EnergyBreakdown)

    @property
    def matched_rows(self) -> list[int]:
        return [int(row) for row in np.flatnonzero(self.match_mask)]

    @property
    def global_termination(self) -> bool:
        """Every row missed in step 1, so SeL_b never switched."""
        return not self.sel_b_active

    @property
    def pull_down_counts(self) -> list[int]:
        return [outcome.pull_down_count for outcome in self.per_row]


@dataclass(frozen=True)
class WellDriverReport:
    p_well_count: int
    hv_driver_count: int
    shared: bool


def _as_codes(symbols: object, name: str) -> np.ndarray:
    codes = np.asarray(symbols)
    if codes.dtype == object:
        codes = np.vectorize(lambda bit: bit.value, otypes=[np.int8])(codes)
    codes = codes.astype(np.int8)
    if np.any((codes < 0) | (codes > TernaryBit.DONT_CARE.value)):
        raise CellEncodingError(f"{name} holds codes outside 0, 1, X")
    return codes


def _state_index(polarization: np.ndarray) -> np.ndarray:
    # Combine the FeFET states of a cell into one index, first FeFET most significant.
    index = np.zeros(polarization.shape[:-1], dtype=np.int64)
    for slot in range(polarization.shape[-1]):
        index = index * len(PolarizationState) + polarization[..., slot]
    return index


def conduction_table(cell: Cell, fefets_per_cell: int) -> np.ndarray:
    """
    Tabulate the mismatch decision of every FeFET state combination.
    :param cell: The cell.
    :param fefets_per_cell: The number of FeFETs in the cell.
    :return: A (combinations x 2) boolean table indexed by state index and searched symbol.
    """
    combinations = list(itertools.product(PolarizationState, repeat=fefets_per_cell))
    table = np.zeros((len(combinations), 2), dtype=bool)
    for index, states in enumerate(combinations):
        for search_bit in (TernaryBit.ZERO, TernaryBit.ONE):
            try:
                table[index, search_bit.value] = cell.mismatch(states, search_bit)
            except CellEncodingError:
                # Unwritable combinations never appear in a programmed state.
                table[index, search_bit.value] = False
    return table


def program(config: ArrayConfig, words: object) -> ProgramResult:
    """
    Program every word into the array.

    Every FeFET starts erased (HVT). One write pass is issued per write level
    and polarizes exactly the FeFETs whose gate line carries that level in the
    write voltage table; the resulting states are checked against the cell encoding.
    :param config: The array configuration.
    :param words: The M x N stored symbols (TernaryBit codes or members).
    :return: The state, the number of write passes, the write energy and latency.
    """
    stored = _as_codes(words, "Words")
    if stored.shape != (config.rows, config.cols):
        raise ArrayShapeError(f"Words have shape {stored.shape}, array is {config.rows} x {config.cols}")

    cell = config.cell()
    slots = config.fefets_per_cell
    table = write_voltage_table(config.design, config.dev, config.div)
    gate_voltages = {bit: tuple(table[bit][line] for line in cell.gate_lines) for bit in TernaryBit}
    polarization = np.full((config.rows, config.cols, slots), PolarizationState.HVT.value, dtype=np.int8)

    levels = cell.write_levels
    for level in levels:
        for slot in range(slots):
            targets = np.zeros(stored.shape, dtype=bool)
            for bit in TernaryBit:
                if gate_voltages[bit][slot] == level:
                    targets |= stored == bit.value

            layer = polarization[:, :, slot]
            updated = layer.copy()
            for state in PolarizationState:
                updated[targets & (layer == state.value)] = polarize(config.dev, state, level).value
            polarization[:, :, slot] = updated

        logger.debug(f"{config.design.label}: write pass at {level} V")

    for bit in TernaryBit:
        expected = np.array([state.value for state in cell.encode(bit)], dtype=np.int8)
        cells = stored == bit.value
        if np.any(polarization[cells] != expected):
            raise CellEncodingError(f"Write levels of {config.design.label} do not realize the {bit.symbol} encoding")

    state = ArrayState(stored=stored, polarization=polarization,
                       ml_voltages=np.full(config.rows, config.div.vdd))
    return ProgramResult(state=state, write_steps=len(levels),
                         write_energy=write_energy(config.design, stored, config.constants, config.dev),
                         write_latency=len(levels) * config.timing.write_pulse)


def search(config: ArrayConfig, state: ArrayState, query: object,
           model: Optional[SearchEnergyModel] = None) -> SearchOutcome:
    """
    Search the array for a query.

    2FeFET arrays resolve in one NOR step. 1.5T1Fe arrays precharge once,
    search the cell-1 columns in step 1 and the cell-2 columns in step 2;
    with early termination, rows that missed in step 1 skip step 2.
    :param config: The array configuration.
    :param state: The programmed state.
    :param query: The N searched symbols, 0 and 1 only.
    :param model: A prepared energy model for the configuration.
    :return: The search outcome.
    """
    bits = _as_codes(query, "Query").reshape(-1)
    if bits.shape[0] != config.cols:
        raise ArrayShapeError(f"Query has {bits.shape[0]} bits, array has {config.cols} columns")
    if np.any(bits == TernaryBit.DONT_CARE.value):
        raise CellEncodingError("Search queries carry only 0 and 1")
    if state.stored.shape != (config.rows, config.cols):
        raise ArrayShapeError(f"State is {state.rows} x {state.cols}, array is {config.rows} x {config.cols}")

    model = model or config.energy_model()
    table = conduction_table(config.cell(), config.fefets_per_cell)
    pulls = table[_state_index(state.polarization), bits[np.newaxis, :]]

    if not config.design.is_paired:
        miss_step1 = pulls.any(axis=1)
        miss_step2 = np.zeros(config.rows, dtype=bool)
        executed = np.ones(config.rows, dtype=np.int8)
    else:
        miss_step1 = pulls[:, 0::2].any(axis=1)
        miss_step2 = pulls[:, 1::2].any(axis=1)
        executed = np.full(config.rows, 2, dtype=np.int8)
        if config.early_termination:
            if config.termination_granularity is TerminationGranularity.ROW:
                executed[miss_step1] = 1
            elif miss_step1.all():
                executed[:] = 1

    match_mask = ~(miss_step1 | miss_step2)
    sel_b_active = bool(np.any(executed == 2))
    logger.debug(f"{config.design.label}: {int(miss_step1.sum())} step-1 misses, "
                 f"{int(miss_step2.sum())} step-2 misses, SeL_b {'active' if sel_b_active else 'suppressed'}")

    per_row = []
    for row in range(config.rows):
        steps = int(executed[row])
        if miss_step1[row]:
            terminated: Optional[int] = 1
        elif miss_step2[row]:
            terminated = 2
        else:
            terminated = None
        latency = model.latency.one_step if steps == 1 else model.latency.full
        if config.design.is_paired:
            pull_downs = (int(pulls[row, 0::2].sum()), int(pulls[row, 1::2].sum()))
        else:
            pull_downs = (int(pulls[row].sum()),)
        per_row.append(RowOutcome(row=row, matched=bool(match_mask[row]), terminated_at_step=terminated,
                                  executed_steps=steps, pull_downs=pull_downs, latency=latency,
                                  energy=model.row_energy(state.stored[row], bits, steps)))

    total_latency = model.latency.full if sel_b_active else model.latency.one_step
    return SearchOutcome(match_mask=match_mask, per_row=per_row, sel_b_active=sel_b_active,
                         total_latency=total_latency,
                         total_energy=EnergyBreakdown.combine(outcome.energy for outcome in per_row))


def worst_case_latency_scenario(config: ArrayConfig) -> tuple[ArrayState, np.ndarray]:
    """
    Build the one-cell mismatch benchmark.

    Every row stores Zero except for a One in the last column and the query is
    all Zero, so each row discharges through exactly one pull-down path; for
    1.5T1Fe designs that path lies in step 2.
    """
    words = np.full((config.rows, config.cols), TernaryBit.ZERO.value, dtype=np.int8)
    words[:, -1] = TernaryBit.ONE.value
    query = np.full(config.cols, TernaryBit.ZERO.value, dtype=np.int8)
    return program(config, words).state, query


def wells_and_drivers(config: ArrayConfig) -> WellDriverReport:
    """
    Count isolated P-wells and high-voltage drivers.

    1.5T1DG-Fe isolates two back-gate wells per row and drives 2M SeL lines and
    N bit lines; 2DG-FeFET isolates two wells per column and drives BL/BL-bar
    plus SL/SL-bar per column. Single-gate designs need no isolated wells.
    :param config: The array configuration.
    :return: The well and driver counts.
    """
    rows, cols = config.rows, config.cols
    wells = {
        CellDesign.ONE_FIVE_DG: 2 * rows,
        CellDesign.TWO_FEFET_DG: 2 * cols,
    }.get(config.design, 0)
    drivers = {
        CellDesign.ONE_FIVE_DG: 2 * rows + cols,
        CellDesign.ONE_FIVE_SG: cols,
        CellDesign.TWO_FEFET_SG: 2 * cols,
        CellDesign.TWO_FEFET_DG: 4 * cols,
    }[config.design]

    if config.driver_shared:
        if config.design is not CellDesign.ONE_FIVE_DG:
            logger.warning(f"{config.design.label} writes and searches at different levels: sharing its "
                           f"high-voltage drivers needs extra switching")
        drivers //= 2

    return WellDriverReport(p_well_count=wells, hv_driver_count=drivers, shared=config.driver_shared)
