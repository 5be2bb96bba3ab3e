import csv
from dataclasses import dataclass, replace
from pathlib import Path
from typing import Optional

import numpy as np

from fetcam.array.tcam_array import ArrayConfig, ArrayState, program, search
from fetcam.array_types import Scenario, ScenarioError
from fetcam.cell_types import TernaryBit
from fetcam.configuration.configuration_types import ConfigurationError
from fetcam.performance.energy import SearchEnergyModel
from fetcam.performance.timing import pull_resistance


@dataclass(frozen=True)
class Waveform:
    """Sampled select lines, match lines and latched sense-amplifier outputs."""
    time: np.ndarray
    sel_a: np.ndarray
    sel_b: np.ndarray
    ml: np.ndarray
    sa: np.ndarray
    step_starts: tuple[float, ...]
    window: float
    pulse: float

    def write_csv(self, path: Path) -> None:
        """
        Write the trace with one column per signal.
        :param path: The output file.
        :return: None.
        """
        rows = self.ml.shape[0]
        header = ["time_s", "sel_a_v", "sel_b_v"] + [f"ml_row{row}_v" for row in range(rows)] + \
                 [f"sa_row{row}" for row in range(rows)]
        with open(path, "w", newline="") as stream:
            writer = csv.writer(stream)
            writer.writerow(header)
            for index, time in enumerate(self.time):
                writer.writerow([f"{time:.6e}", f"{self.sel_a[index]:.6g}", f"{self.sel_b[index]:.6g}"] +
                                [f"{self.ml[row, index]:.6g}" for row in range(rows)] +
                                [str(int(self.sa[row, index])) for row in range(rows)])


def waveform_trace(config: ArrayConfig, state: ArrayState, query: object, time_step: float,
                   model: Optional[SearchEnergyModel] = None) -> Waveform:
    """
    Trace a search in time.

    The match lines sit at VDD for the precharge window. Each search step then
    holds its select line for one sensing window plus the inter-step slack, so
    a worst-case miss crosses the sense threshold while the step is still open.
    A row with k conducting pull-down paths in a step decays with time constant
    r_pull * C_ML / k while that select line is high; step 2 only contributes
    for rows that execute it. The sense amplifier output latches low once its
    ML falls below sense_fraction * VDD.
    :param config: The array configuration.
    :param state: The programmed state.
    :param query: The searched symbols.
    :param time_step: The sample spacing in seconds.
    :param model: A prepared energy model for the configuration.
    :return: The sampled waveform.
    """
    if time_step <= 0:
        raise ConfigurationError(f"Waveform time step must be positive, got {time_step}")

    model = model or config.energy_model()
    outcome = search(config, state, query, model)

    window = model.latency.one_step
    slack = config.timing.slack_fraction * window
    pulse = window + slack
    paired = config.design.is_paired
    step_starts = [config.timing.search_pulse]
    if paired:
        step_starts.append(step_starts[0] + pulse)
    end = step_starts[-1] + pulse + slack

    time = np.arange(int(round(end / time_step)) + 1) * time_step
    select_level = config.div.v_sel if paired else config.div.v_search

    def select_pulse(start: float) -> np.ndarray:
        return np.where((time >= start) & (time < start + pulse), select_level, 0.0)

    sel_a = select_pulse(step_starts[0])
    sel_b = select_pulse(step_starts[1]) if paired and outcome.sel_b_active else np.zeros(time.shape)

    tau = pull_resistance(config.design, config.dev, config.div, config.tml) * model.c_ml
    exponent = np.zeros((config.rows, time.shape[0]))
    for row_outcome in outcome.per_row:
        for step, paths in enumerate(row_outcome.pull_downs[:row_outcome.executed_steps]):
            elapsed = np.clip(time - step_starts[step], 0.0, pulse)
            exponent[row_outcome.row] += paths * elapsed / tau

    ml = config.div.vdd * np.exp(-exponent)
    sa = np.minimum.accumulate(ml >= config.timing.sense_fraction * config.div.vdd, axis=1).astype(np.int8)
    return Waveform(time=time, sel_a=sel_a, sel_b=sel_b, ml=ml, sa=sa, step_starts=tuple(step_starts),
                    window=window, pulse=pulse)


def scenario_instance(config: ArrayConfig, scenario: Scenario) -> tuple[ArrayConfig, ArrayState, np.ndarray]:
    """
    Build a one-row array exhibiting a two-step search case.

    The row stores Zero everywhere and the query is all Zero; a step-1 miss
    stores One in the first cell-1 column, a step-2 miss in the first cell-2
    column.
    :param config: The array configuration to derive from.
    :param scenario: The requested case.
    :return: The one-row configuration, its state and the query.
    """
    if not config.design.is_paired:
        raise ScenarioError(f"{config.design.label} searches in a single step: no {scenario.label} scenario")

    single = replace(config, rows=1)
    words = np.full((1, single.cols), TernaryBit.ZERO.value, dtype=np.int8)
    if scenario is Scenario.STEP1_MISS:
        words[0, 0] = TernaryBit.ONE.value
    elif scenario is Scenario.STEP2_MISS:
        words[0, 1] = TernaryBit.ONE.value

    query = np.full(single.cols, TernaryBit.ZERO.value, dtype=np.int8)
    return single, program(single, words).state, query
