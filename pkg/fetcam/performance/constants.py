from dataclasses import dataclass, field

from fetcam.cell_types import CellDesign
from fetcam.configuration.configuration_types import ConfigurationError
from fetcam.device_types import DeviceKind

# Write energy per cell as listed in the published comparison, in joules.
REPORTED_WRITE_ENERGY = {
    CellDesign.TWO_FEFET_SG: 1.63e-15,
    CellDesign.TWO_FEFET_DG: 0.81e-15,
    CellDesign.ONE_FIVE_SG: 0.82e-15,
    CellDesign.ONE_FIVE_DG: 0.41e-15,
}


@dataclass(frozen=True)
class CmosBaseline:
    """The 16T CMOS TCAM reference: constants only, never simulated."""
    label: str = "16T-CMOS"
    write_voltage: str = "0.9V"
    area_um2: float = 0.286
    latency: float = 235e-12
    energy_per_cell: float = 0.53e-15


CMOS_BASELINE = CmosBaseline()


@dataclass(frozen=True)
class CellConstants:
    """
    Per-cell area and write energy.

    fe_write_energy is the energy of one full write of a single FeFET of each
    device family; the per-design write energies follow from it.
    """
    area_um2: dict[CellDesign, float]
    fe_write_energy: dict[DeviceKind, float]
    well_spacing_overhead: float = 0.0
    reported_write_energy: dict[CellDesign, float] = field(default_factory=lambda: dict(REPORTED_WRITE_ENERGY))
    baseline: CmosBaseline = CMOS_BASELINE

    def __post_init__(self) -> None:
        for design in CellDesign:
            if self.area_um2.get(design, 0.0) <= 0:
                raise ConfigurationError(f"cells.area_um2 for {design.label} must be positive")
        for kind in DeviceKind:
            if self.fe_write_energy.get(kind, 0.0) <= 0:
                raise ConfigurationError(f"cells.fe_write_energy for {kind.label} must be positive")
        if self.well_spacing_overhead < 0:
            raise ConfigurationError("cells.well_spacing_overhead must be non-negative")
