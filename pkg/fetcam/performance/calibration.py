import math
from dataclasses import dataclass, replace
from typing import Iterable

import numpy as np
from loguru import logger

from fetcam.cell.divider import DividerParams
from fetcam.cell_types import CellDesign, TernaryBit
from fetcam.device.fefet import FeFetParams
from fetcam.device.mosfet import MosfetParams
from fetcam.device_types import DeviceKind
from fetcam.performance.energy import SearchEnergyModel, average_search_energy
from fetcam.performance.timing import TimingParams, pull_resistance

# The step-1 miss rate behind the published average search energies.
REFERENCE_MISS_RATE = 0.9

# Search-line load used to measure the slope of the energy model.
TRIAL_LOAD = 1e-18

# Stored and searched symbol pairs cycled through every search step of the reference row.
REFERENCE_COMBINATIONS = [(TernaryBit.ZERO, TernaryBit.ZERO), (TernaryBit.ZERO, TernaryBit.ONE),
                          (TernaryBit.ONE, TernaryBit.ZERO), (TernaryBit.ONE, TernaryBit.ONE)]


class CalibrationError(Exception):
    """A calibration specific error."""
    pass


@dataclass(frozen=True)
class FomTargets:
    """Published figures of merit at a 64-bit word: latencies in seconds, energies per cell in joules."""
    latency_one_step: dict[CellDesign, float]
    latency_full: dict[CellDesign, float]
    energy_one_step: dict[CellDesign, float]
    energy_two_step: dict[CellDesign, float]

    def energy_average(self, design: CellDesign, step1_miss_rate: float = REFERENCE_MISS_RATE) -> float:
        return average_search_energy(self.energy_one_step[design], self.energy_two_step[design], step1_miss_rate)


REFERENCE_FOM = FomTargets(
    latency_one_step={CellDesign.TWO_FEFET_SG: 582e-12, CellDesign.TWO_FEFET_DG: 1147e-12,
                      CellDesign.ONE_FIVE_SG: 159e-12, CellDesign.ONE_FIVE_DG: 231e-12},
    latency_full={CellDesign.TWO_FEFET_SG: 582e-12, CellDesign.TWO_FEFET_DG: 1147e-12,
                  CellDesign.ONE_FIVE_SG: 351e-12, CellDesign.ONE_FIVE_DG: 481e-12},
    energy_one_step={CellDesign.TWO_FEFET_SG: 0.17e-15, CellDesign.TWO_FEFET_DG: 0.25e-15,
                     CellDesign.ONE_FIVE_SG: 0.11e-15, CellDesign.ONE_FIVE_DG: 0.13e-15},
    energy_two_step={CellDesign.TWO_FEFET_SG: 0.17e-15, CellDesign.TWO_FEFET_DG: 0.25e-15,
                     CellDesign.ONE_FIVE_SG: 0.16e-15, CellDesign.ONE_FIVE_DG: 0.21e-15},
)


def reference_row(word_len: int) -> tuple[np.ndarray, np.ndarray]:
    """
    Build the reference search workload.

    Every search step sees all four (stored, searched) pairs of Zero and One
    equally often: even and odd columns walk through the pairs in step.
    :param word_len: The word length.
    :return: The stored codes and the query codes.
    """
    combinations = [REFERENCE_COMBINATIONS[(column // 2) % len(REFERENCE_COMBINATIONS)] for column in range(word_len)]
    stored = np.array([pair[0].value for pair in combinations], dtype=np.int8)
    query = np.array([pair[1].value for pair in combinations], dtype=np.int8)
    return stored, query


def reference_energies(model: SearchEnergyModel) -> tuple[float, float]:
    """
    Cost the reference row per cell.
    :param model: The energy model of one design and word length.
    :return: The energy of a search ending after step 1 and of one running both steps.
    """
    stored, query = reference_row(model.word_len)
    one_step = model.row_energy(stored, query, 1).total / model.word_len
    if not model.design.is_paired:
        return one_step, one_step

    return one_step, model.row_energy(stored, query, 2).total / model.word_len


def _average_energy(design: CellDesign, word_len: int, dev: FeFetParams, div: DividerParams, tml: MosfetParams,
                    t: TimingParams) -> float:
    one_step, two_step = reference_energies(SearchEnergyModel(design, word_len, dev, div, tml, t))
    return average_search_energy(one_step, two_step, REFERENCE_MISS_RATE)


def calibrate(designs: Iterable[CellDesign], word_len: int, devices: dict[DeviceKind, FeFetParams],
              dividers: dict[DeviceKind, DividerParams], tml: MosfetParams, t: TimingParams,
              targets: FomTargets = REFERENCE_FOM) -> TimingParams:
    """
    Fit the per-design match-line and search-line loads to the published figures of merit.

    The ML load is solved from the one-step latency target; with it fixed, the
    average search energy is linear in the search-line load, which is solved
    from two trial evaluations. Every other parameter keeps its value.
    :param designs: The designs to calibrate.
    :param word_len: The word length the targets refer to.
    :param devices: The device parameters per family.
    :param dividers: The divider parameters per family.
    :param tml: The ML pull-down transistor.
    :param t: The starting timing parameters.
    :param targets: The figures of merit to fit.
    :return: The timing parameters with fitted loads.
    """
    designs = list(designs)
    c_ml = dict(t.c_ml_per_cell)
    c_sl = dict(t.c_sl_per_cell)

    for design in designs:
        dev, div = devices[design.device_kind], dividers[design.device_kind]
        r_pull = pull_resistance(design, dev, div, tml)
        total = targets.latency_one_step[design] / (r_pull * math.log(1.0 / t.sense_fraction))
        if design.is_paired:
            per_cell = (total - t.c_sa_input) / (word_len / 2) - 2 * t.c_wire_per_cell
        else:
            per_cell = ((total - t.c_sa_input) / word_len - t.c_wire_per_cell) / 2
        if per_cell <= 0:
            raise CalibrationError(f"{design.label}: latency target needs a non-physical ML load ({per_cell:.3e} F)")

        c_ml[design] = per_cell

    for design in designs:
        dev, div = devices[design.device_kind], dividers[design.device_kind]
        base = replace(t, c_ml_per_cell=c_ml, c_sl_per_cell={**c_sl, design: 0.0})
        trial = replace(t, c_ml_per_cell=c_ml, c_sl_per_cell={**c_sl, design: TRIAL_LOAD})
        e_base = _average_energy(design, word_len, dev, div, tml, base)
        e_trial = _average_energy(design, word_len, dev, div, tml, trial)

        value = (targets.energy_average(design) - e_base) * TRIAL_LOAD / (e_trial - e_base)
        if value <= 0:
            raise CalibrationError(f"{design.label}: energy target needs a non-physical search-line load "
                                   f"({value:.3e} F)")

        c_sl[design] = value
        logger.debug(f"Calibrated {design.label}: c_ml_per_cell={c_ml[design]:.4e} F, c_sl_per_cell={value:.4e} F")

    return replace(t, c_ml_per_cell=c_ml, c_sl_per_cell=c_sl)
