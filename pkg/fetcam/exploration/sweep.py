import csv
from dataclasses import dataclass, field
from multiprocessing.pool import ThreadPool
from pathlib import Path
from typing import Iterable

from loguru import logger

from fetcam.array.tcam_array import ArrayConfig
from fetcam.cell_types import CellDesign
from fetcam.exploration.formatting import femtojoules, picoseconds
from fetcam.performance.calibration import reference_energies
from fetcam.performance.energy import SearchEnergyModel, average_search_energy


@dataclass(frozen=True)
class SweepPoint:
    design: CellDesign
    word_len: int
    latency_one_step: float
    latency_full: float
    energy_one_step: float
    energy_two_step: float
    energy_per_cell: float


@dataclass(frozen=True)
class TrendCheck:
    subject: str
    name: str
    passed: bool


@dataclass
class SweepResult:
    points: list[SweepPoint] = field(default_factory=list)
    trends: list[TrendCheck] = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return all(trend.passed for trend in self.trends)


def sweep_point(config: ArrayConfig) -> SweepPoint:
    """
    Evaluate one (design, word length) point on the reference workload.
    :param config: The array configuration, whose column count is the word length.
    :return: The latencies and per-cell energies.
    """
    model = SearchEnergyModel(config.design, config.cols, config.dev, config.div, config.tml, config.timing)
    one_step, two_step = reference_energies(model)
    return SweepPoint(design=config.design, word_len=config.cols, latency_one_step=model.latency.one_step,
                      latency_full=model.latency.full, energy_one_step=one_step, energy_two_step=two_step,
                      energy_per_cell=average_search_energy(one_step, two_step, config.step1_miss_rate))


def trend_checks(points: Iterable[SweepPoint]) -> list[TrendCheck]:
    """
    Evaluate the word-length trends.

    Latency must rise strictly with word length. Per-cell energy must not rise
    for 2FeFET designs (SA amortization) and must not fall for 1.5T1Fe designs
    (divider static energy). Within a device family the 1.5T1Fe latency must
    grow more slowly than the 2FeFET latency.
    """
    by_design: dict[CellDesign, list[SweepPoint]] = {}
    for point in points:
        by_design.setdefault(point.design, []).append(point)

    checks = []
    growth = {}
    for design, series in by_design.items():
        series = sorted(series, key=lambda point: point.word_len)
        latencies = [point.latency_full for point in series]
        energies = [point.energy_per_cell for point in series]
        checks.append(TrendCheck(design.label, "latency strictly increasing",
                                 all(a < b for a, b in zip(latencies, latencies[1:]))))
        if design.is_paired:
            checks.append(TrendCheck(design.label, "energy per cell non-decreasing",
                                     all(a <= b for a, b in zip(energies, energies[1:]))))
        else:
            checks.append(TrendCheck(design.label, "energy per cell non-increasing",
                                     all(a >= b for a, b in zip(energies, energies[1:]))))
        growth[design] = latencies[-1] / latencies[0]

    for paired, single in ((CellDesign.ONE_FIVE_SG, CellDesign.TWO_FEFET_SG),
                           (CellDesign.ONE_FIVE_DG, CellDesign.TWO_FEFET_DG)):
        if paired in growth and single in growth:
            checks.append(TrendCheck(f"{paired.label} vs {single.label}", "slower latency growth",
                                     growth[paired] < growth[single]))

    for check in checks:
        if not check.passed:
            logger.warning(f"Trend violated: {check.subject} {check.name}")
    return checks


def run_sweep(configs: list[ArrayConfig], threads: int = 1) -> SweepResult:
    """
    Evaluate every configuration, fanning the points out to a thread pool.
    :param configs: One array configuration per (design, word length), in output order.
    :param threads: The number of worker threads.
    :return: The points, in the order given, and the trend checks.
    """
    with ThreadPool(processes=threads) as pool:
        points = pool.map(sweep_point, configs)

    return SweepResult(points=points, trends=trend_checks(points))


def write_sweep_csv(result: SweepResult, path: Path) -> None:
    """
    Write the sweep points followed by a commented trend summary.
    :param result: The sweep result.
    :param path: The output file.
    :return: None.
    """
    with open(path, "w", newline="") as stream:
        writer = csv.writer(stream)
        writer.writerow(["design", "word_len", "latency_one_step_ps", "latency_ps", "energy_one_step_fj",
                         "energy_two_step_fj", "energy_per_cell_fj"])
        for point in result.points:
            writer.writerow([point.design.label, point.word_len, picoseconds(point.latency_one_step),
                             picoseconds(point.latency_full), femtojoules(point.energy_one_step),
                             femtojoules(point.energy_two_step), femtojoules(point.energy_per_cell)])

        for trend in result.trends:
            writer.writerow(["# trend", trend.subject, trend.name, "PASS" if trend.passed else "FAIL"])
