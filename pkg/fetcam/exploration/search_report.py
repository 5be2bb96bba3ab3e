import csv
from dataclasses import dataclass
from functools import partial
from multiprocessing.pool import ThreadPool
from pathlib import Path

import numpy as np

from fetcam.array.grid_io import format_row
from fetcam.array.tcam_array import ArrayConfig, ArrayState, SearchOutcome, search
from fetcam.cell_types import CellDesign
from fetcam.exploration.formatting import femtojoules


@dataclass(frozen=True)
class DesignSearch:
    """Every query outcome of one design, in query order."""
    design: CellDesign
    queries: np.ndarray
    outcomes: list[SearchOutcome]


def run_queries(config: ArrayConfig, state: ArrayState, queries: np.ndarray, threads: int = 1) -> DesignSearch:
    """
    Search every query, fanning the queries out to a thread pool.
    :param config: The array configuration.
    :param state: The programmed state.
    :param queries: The queries, one per row.
    :param threads: The number of worker threads.
    :return: The outcomes in query order.
    """
    model = config.energy_model()
    with ThreadPool(processes=threads) as pool:
        outcomes = pool.map(partial(search, config, state, model=model), list(queries))

    return DesignSearch(design=config.design, queries=queries, outcomes=outcomes)


def write_search_results(results: list[DesignSearch], path: Path) -> None:
    """
    Write one line per (design, query).
    :param results: The searches.
    :param path: The output file.
    :return: None.
    """
    with open(path, "w", newline="") as stream:
        writer = csv.writer(stream)
        writer.writerow(["design", "query_index", "query", "matched_rows", "match_count", "global_termination",
                         "latency_s", "energy_fj", "precharge_fj", "sense_amp_fj", "divider_static_fj",
                         "signal_switching_fj"])
        for result in results:
            for index, outcome in enumerate(result.outcomes):
                energy = outcome.total_energy
                writer.writerow([result.design.label, index, format_row(result.queries[index]),
                                 " ".join(str(row) for row in outcome.matched_rows), len(outcome.matched_rows),
                                 str(outcome.global_termination).lower(), f"{outcome.total_latency:.6e}",
                                 femtojoules(energy.total), femtojoules(energy.precharge),
                                 femtojoules(energy.sense_amp), femtojoules(energy.divider_static),
                                 femtojoules(energy.signal_switching)])


def write_search_rows(results: list[DesignSearch], path: Path) -> None:
    """
    Write one line per (design, query, row).
    :param results: The searches.
    :param path: The output file.
    :return: None.
    """
    with open(path, "w", newline="") as stream:
        writer = csv.writer(stream)
        writer.writerow(["design", "query_index", "row", "matched", "terminated_at_step", "executed_steps",
                         "pull_downs", "latency_s", "energy_fj", "precharge_fj", "sense_amp_fj", "divider_static_fj",
                         "signal_switching_fj"])
        for result in results:
            for index, outcome in enumerate(result.outcomes):
                for row in outcome.per_row:
                    writer.writerow([result.design.label, index, row.row, str(row.matched).lower(),
                                     "" if row.terminated_at_step is None else row.terminated_at_step,
                                     row.executed_steps, row.pull_down_count, f"{row.latency:.6e}",
                                     femtojoules(row.energy.total), femtojoules(row.energy.precharge),
                                     femtojoules(row.energy.sense_amp), femtojoules(row.energy.divider_static),
                                     femtojoules(row.energy.signal_switching)])
