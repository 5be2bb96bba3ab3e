import csv
import json
from dataclasses import asdict, dataclass
from pathlib import Path
from typing import Optional

from fetcam.array.tcam_array import ArrayConfig, wells_and_drivers
from fetcam.cell_types import CellDesign
from fetcam.exploration.formatting import femtojoules, picoseconds, ratio
from fetcam.performance.area import area_estimate
from fetcam.performance.calibration import REFERENCE_FOM, FomTargets, reference_energies
from fetcam.performance.constants import CMOS_BASELINE
from fetcam.performance.energy import average_search_energy, write_energy_per_cell

# Array size of the published comparison.
FOM_SIZE = 64


@dataclass(frozen=True)
class FomRow:
    """
    One column of the figure-of-merit comparison.

    Ratios are baseline over design for area, latency and search energy, and
    2SG-FeFET over design for write energy; they are always recomputed from
    the values of the row.
    """
    design: str
    write_voltage: str
    fe_thickness_nm: Optional[float]
    cell_area_um2: float
    area_ratio: float
    write_energy_per_cell: Optional[float]
    write_energy_ratio: Optional[float]
    write_latency: Optional[float]
    latency_one_step: float
    latency_full: float
    latency_ratio: float
    energy_one_step: float
    energy_two_step: float
    energy_avg: float
    energy_ratio: float
    p_well_count: Optional[int] = None
    hv_driver_count: Optional[int] = None
    reported_write_energy: Optional[float] = None
    reported_latency_one_step: Optional[float] = None
    reported_latency_full: Optional[float] = None
    reported_energy_avg: Optional[float] = None


@dataclass(frozen=True)
class FomReport:
    rows: list[FomRow]

    def row(self, label: str) -> FomRow:
        for row in self.rows:
            if row.design == label:
                return row
        raise KeyError(label)

    def write_json(self, path: Path) -> None:
        with open(path, "w") as stream:
            json.dump({"array_size": FOM_SIZE, "rows": [asdict(row) for row in self.rows]}, stream, indent=2)
            stream.write("\n")

    def write_csv(self, path: Path) -> None:
        """
        Write the report with energies in fJ and latencies in ps.
        :param path: The output file.
        :return: None.
        """
        with open(path, "w", newline="") as stream:
            writer = csv.writer(stream)
            writer.writerow(["design", "write_voltage", "fe_thickness_nm", "cell_area_um2", "area_ratio",
                             "write_energy_fj", "write_energy_ratio", "write_latency_ps", "latency_one_step_ps",
                             "latency_ps", "latency_ratio", "energy_one_step_fj", "energy_two_step_fj",
                             "energy_avg_fj", "energy_ratio", "p_well_count", "hv_driver_count",
                             "reported_write_energy_fj", "reported_latency_one_step_ps", "reported_latency_ps",
                             "reported_energy_avg_fj"])
            for row in self.rows:
                writer.writerow([row.design, row.write_voltage,
                                 "" if row.fe_thickness_nm is None else f"{row.fe_thickness_nm:g}",
                                 f"{row.cell_area_um2:g}", ratio(row.area_ratio),
                                 femtojoules(row.write_energy_per_cell), ratio(row.write_energy_ratio),
                                 picoseconds(row.write_latency), picoseconds(row.latency_one_step),
                                 picoseconds(row.latency_full), ratio(row.latency_ratio),
                                 femtojoules(row.energy_one_step), femtojoules(row.energy_two_step),
                                 femtojoules(row.energy_avg), ratio(row.energy_ratio),
                                 "" if row.p_well_count is None else row.p_well_count,
                                 "" if row.hv_driver_count is None else row.hv_driver_count,
                                 femtojoules(row.reported_write_energy), picoseconds(row.reported_latency_one_step),
                                 picoseconds(row.reported_latency_full), femtojoules(row.reported_energy_avg)])


def baseline_row() -> FomRow:
    """The 16T CMOS reference row: every ratio is 1 by definition."""
    return FomRow(design=CMOS_BASELINE.label, write_voltage=CMOS_BASELINE.write_voltage, fe_thickness_nm=None,
                  cell_area_um2=CMOS_BASELINE.area_um2, area_ratio=1.0, write_energy_per_cell=None,
                  write_energy_ratio=None, write_latency=None, latency_one_step=CMOS_BASELINE.latency,
                  latency_full=CMOS_BASELINE.latency, latency_ratio=1.0,
                  energy_one_step=CMOS_BASELINE.energy_per_cell, energy_two_step=CMOS_BASELINE.energy_per_cell,
                  energy_avg=CMOS_BASELINE.energy_per_cell, energy_ratio=1.0,
                  reported_latency_one_step=CMOS_BASELINE.latency, reported_latency_full=CMOS_BASELINE.latency,
                  reported_energy_avg=CMOS_BASELINE.energy_per_cell)


def fom_row(config: ArrayConfig, targets: FomTargets = REFERENCE_FOM) -> FomRow:
    """
    Model the figures of merit of one design.
    :param config: The array configuration of the design.
    :param targets: The published values printed beside the modeled ones.
    :return: The row.
    """
    design, dev, cc = config.design, config.dev, config.constants
    model = config.energy_model()
    one_step, two_step = reference_energies(model)
    average = average_search_energy(one_step, two_step, config.step1_miss_rate)

    if design.is_paired:
        write_voltage = f"±{dev.write_pos_threshold:g}V, {dev.write_mid_level:g}V"
    else:
        write_voltage = f"±{dev.write_pos_threshold:g}V"

    wells = wells_and_drivers(config)
    area = area_estimate(design, 1, 1, cc, 0)
    write_energy = write_energy_per_cell(design, cc)
    return FomRow(design=design.label, write_voltage=write_voltage, fe_thickness_nm=dev.fe_thickness,
                  cell_area_um2=area, area_ratio=cc.baseline.area_um2 / area,
                  write_energy_per_cell=write_energy,
                  write_energy_ratio=write_energy_per_cell(CellDesign.TWO_FEFET_SG, cc) / write_energy,
                  write_latency=len(config.cell().write_levels) * config.timing.write_pulse,
                  latency_one_step=model.latency.one_step, latency_full=model.latency.full,
                  latency_ratio=cc.baseline.latency / model.latency.full, energy_one_step=one_step,
                  energy_two_step=two_step, energy_avg=average, energy_ratio=cc.baseline.energy_per_cell / average,
                  p_well_count=wells.p_well_count, hv_driver_count=wells.hv_driver_count,
                  reported_write_energy=cc.reported_write_energy[design],
                  reported_latency_one_step=targets.latency_one_step[design],
                  reported_latency_full=targets.latency_full[design],
                  reported_energy_avg=targets.energy_average(design))


def build_fom_report(configs: list[ArrayConfig], targets: FomTargets = REFERENCE_FOM) -> FomReport:
    """Build the comparison: the CMOS baseline followed by one row per configuration."""
    return FomReport(rows=[baseline_row()] + [fom_row(config, targets) for config in configs])
