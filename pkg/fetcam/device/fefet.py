import math
from dataclasses import dataclass

from fetcam.device_types import DeviceError, DeviceKind, GateKind, PolarizationState

LN10 = math.log(10.0)

# Write field tolerance around the mid-level (Vm) write voltage.
MVT_WRITE_TOLERANCE = 0.2

# Current below which resistance extraction clamps to the ceiling.
CURRENT_FLOOR = 1e-15
RESISTANCE_CEILING = 1e12


@dataclass(frozen=True)
class FeFetParams:
    """
    A FeFET parameter bundle.

    Threshold voltages are given for the active read gate: the front gate of
    an SG device and the back gate of a DG device. Subthreshold slopes are in
    mV/decade.
    """
    device_kind: DeviceKind
    vth_lvt: float
    vth_mvt: float
    vth_hvt: float
    ss_front: float
    ss_back: float
    i_on_ref: float
    v_ov_ref: float
    on_off_ratio: float
    v_read: float
    v_ds_read: float
    v_dsat: float
    write_pos_threshold: float
    write_neg_threshold: float
    write_mid_level: float
    fe_thickness: float

    def __post_init__(self) -> None:
        for name, value in self.__dict__.items():
            if isinstance(value, float) and not math.isfinite(value):
                raise DeviceError(f"Device parameter '{name}' must be finite")

        if not self.vth_lvt < self.vth_mvt < self.vth_hvt:
            raise DeviceError(
                f"Thresholds must satisfy LVT < MVT < HVT, got {self.vth_lvt} / {self.vth_mvt} / {self.vth_hvt}")
        if self.ss_front <= 0 or self.ss_back <= 0:
            raise DeviceError("Subthreshold slopes must be positive")
        if self.i_on_ref <= 0 or self.v_ov_ref <= 0 or self.v_dsat <= 0 or self.v_ds_read <= 0:
            raise DeviceError("ON current, reference overdrive and drain biases must be positive")
        if self.on_off_ratio < 1:
            raise DeviceError(f"ON/OFF ratio must be at least 1, got {self.on_off_ratio}")
        if not self.write_neg_threshold < 0 < self.write_mid_level < self.write_pos_threshold:
            raise DeviceError("Write levels must satisfy -Vw < 0 < Vm < +Vw")

    @property
    def memory_window(self) -> float:
        return self.vth_hvt - self.vth_lvt

    @property
    def read_gate(self) -> GateKind:
        """SG devices read through the front gate, DG devices through the back gate."""
        if self.device_kind is DeviceKind.DG:
            return GateKind.BACK_GATE
        return GateKind.FRONT_GATE

    def subthreshold_slope(self, gate: GateKind) -> float:
        """
        Get the subthreshold slope of a gate.
        :param gate: The gate.
        :return: The slope in mV/decade.
        """
        return self.ss_back if gate is GateKind.BACK_GATE else self.ss_front


@dataclass(frozen=True)
class Bias:
    """A gate-source and drain-source bias point."""
    v_gs: float
    v_ds: float


def _require_finite(*values: float) -> None:
    for value in values:
        if not math.isfinite(value):
            raise DeviceError(f"Voltage {value} is not finite")


def polarize(params: FeFetParams, state: PolarizationState, fg_voltage: float) -> PolarizationState:
    """
    Apply a front-gate write pulse with source, drain and back gate grounded.
    :param params: The device parameters.
    :param state: The state before the pulse.
    :param fg_voltage: The front-gate pulse amplitude.
    :return: The state after the pulse.
    """
    _require_finite(fg_voltage)
    limit = 1.5 * params.write_pos_threshold
    if abs(fg_voltage) > limit:
        raise DeviceError(f"Write voltage {fg_voltage} V exceeds the {limit} V device limit")

    if fg_voltage >= params.write_pos_threshold:
        return PolarizationState.LVT
    if fg_voltage <= params.write_neg_threshold:
        return PolarizationState.HVT
    if abs(fg_voltage - params.write_mid_level) <= MVT_WRITE_TOLERANCE:
        return PolarizationState.MVT

    # Insufficient field.
    return state


def threshold_voltage(params: FeFetParams, state: PolarizationState, gate: GateKind) -> float:
    """
    Get the threshold voltage seen from the read gate.
    :param params: The device parameters.
    :param state: The polarization state.
    :param gate: The read gate, which must be the device's read gate.
    :return: The threshold voltage.
    """
    if gate is not params.read_gate:
        raise DeviceError(f"{params.device_kind.name} devices cannot be read through the {gate.name}")

    return {
        PolarizationState.LVT: params.vth_lvt,
        PolarizationState.MVT: params.vth_mvt,
        PolarizationState.HVT: params.vth_hvt,
    }[state]


def drain_current(params: FeFetParams, state: PolarizationState, v_gs: float, v_ds: float,
                  gate: GateKind) -> float:
    """
    Evaluate the drain current.

    Below threshold the channel current falls one decade per subthreshold
    slope; above threshold it grows linearly with the overdrive, joined with a
    continuous first derivative and scaled so that the reference overdrive
    gives i_on_ref. The OFF floor i_on_ref / on_off_ratio bounds the current
    from below. The drain dependence is linear up to v_dsat and flat after it.
    :param params: The device parameters.
    :param state: The polarization state.
    :param v_gs: The read gate to source voltage.
    :param v_ds: The drain to source voltage.
    :param gate: The read gate.
    :return: The drain current in amperes.
    """
    _require_finite(v_gs, v_ds)
    if v_ds < 0:
        raise DeviceError(f"Drain bias must be non-negative, got {v_ds}")

    vth = threshold_voltage(params, state, gate)
    slope = params.subthreshold_slope(gate) / 1000.0
    i_threshold = params.i_on_ref / (1.0 + LN10 * params.v_ov_ref / slope)

    overdrive = v_gs - vth
    if overdrive <= 0:
        channel = i_threshold * 10.0 ** (overdrive / slope)
    else:
        channel = i_threshold * (1.0 + LN10 * overdrive / slope)

    floor = params.i_on_ref / params.on_off_ratio
    return max(channel, floor) * min(v_ds, params.v_dsat) / params.v_dsat


def effective_resistance(params: FeFetParams, state: PolarizationState, bias: Bias, gate: GateKind) -> float:
    """
    Extract the channel resistance at a bias point.
    :param params: The device parameters.
    :param state: The polarization state.
    :param bias: The bias point, with a positive drain bias.
    :param gate: The read gate.
    :return: v_ds / I_d, clamped to RESISTANCE_CEILING for vanishing currents.
    """
    if bias.v_ds <= 0:
        raise DeviceError(f"Resistance extraction needs a positive drain bias, got {bias.v_ds}")

    current = drain_current(params, state, bias.v_gs, bias.v_ds, gate)
    if current < CURRENT_FLOOR:
        return RESISTANCE_CEILING
    return bias.v_ds / current


def search_bias(params: FeFetParams) -> Bias:
    """The bias at which R_ON, R_M and R_OFF are quoted."""
    return Bias(v_gs=params.v_read, v_ds=params.v_ds_read)


def read_resistance(params: FeFetParams, state: PolarizationState) -> float:
    """
    Get the resistance of a state at the search bias.
    :param params: The device parameters.
    :param state: The polarization state.
    :return: The resistance in ohms.
    """
    return effective_resistance(params, state, search_bias(params), params.read_gate)
