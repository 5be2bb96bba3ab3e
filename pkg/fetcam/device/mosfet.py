import math
from dataclasses import dataclass

from fetcam.device_types import DeviceError, MosfetKind


@dataclass(frozen=True)
class MosfetParams:
    """
    A switch-level MOSFET.

    TP thresholds are negative (PMOS convention): the device conducts once its
    gate is pulled below its source by |vth|. gate_capacitance is informational:
    the search-line load per cell (timing.c_sl_per_cell) already includes the
    gates it drives, so no energy or latency term reads it.
    """
    kind: MosfetKind
    vth: float
    r_on: float
    r_off: float
    gate_capacitance: float

    def __post_init__(self) -> None:
        if self.r_on <= 0 or self.r_off < 1e3 * self.r_on:
            raise DeviceError(f"{self.kind.name} needs r_off >= 1e3 x r_on, got {self.r_on} / {self.r_off}")
        if self.kind is MosfetKind.TML and self.vth <= 0:
            raise DeviceError("TML threshold voltage must be positive")
        if self.kind is MosfetKind.TP and self.vth >= 0:
            raise DeviceError("TP threshold voltage must be negative")
        if self.gate_capacitance < 0:
            raise DeviceError("Gate capacitance must be non-negative")


def mosfet_resistance(params: MosfetParams, v_gs: float) -> float:
    """
    Get the switch resistance for a gate-source voltage.
    :param params: The transistor.
    :param v_gs: The gate to source voltage.
    :return: r_on when the channel is formed, otherwise r_off.
    """
    if not math.isfinite(v_gs):
        raise DeviceError(f"Gate voltage {v_gs} is not finite")

    if params.kind is MosfetKind.TP:
        conducting = v_gs <= params.vth
    else:
        conducting = v_gs >= params.vth

    return params.r_on if conducting else params.r_off
