from dataclasses import replace

import numpy as np
import pytest

from fetcam.device import initialize_preset
from fetcam.device.fefet import Bias, drain_current, effective_resistance, polarize, read_resistance, \
    search_bias, threshold_voltage
from fetcam.device.mosfet import MosfetParams, mosfet_resistance
from fetcam.device.presets import default_mosfets, dg14, sg14
from fetcam.device_types import DeviceError, DeviceKind, GateKind, MosfetKind, PolarizationState


def test_polarize_write_levels():
    assert polarize(dg14(), PolarizationState.HVT, 2.0) is PolarizationState.LVT
    assert polarize(dg14(), PolarizationState.LVT, -2.0) is PolarizationState.HVT
    assert polarize(dg14(), PolarizationState.LVT, 0.0) is PolarizationState.LVT
    assert polarize(sg14(), PolarizationState.LVT, 3.2) is PolarizationState.MVT


def test_polarize_is_idempotent():
    for params in (sg14(), dg14()):
        for state in PolarizationState:
            for voltage in (params.write_neg_threshold, params.write_mid_level, params.write_pos_threshold, 0.5):
                once = polarize(params, state, voltage)
                assert polarize(params, once, voltage) is once


def test_polarize_rejects_excessive_voltage():
    with pytest.raises(DeviceError):
        polarize(dg14(), PolarizationState.HVT, 3.5)


def test_memory_windows():
    dg, sg = dg14(), sg14()
    dg_window = threshold_voltage(dg, PolarizationState.HVT, GateKind.BACK_GATE) - \
        threshold_voltage(dg, PolarizationState.LVT, GateKind.BACK_GATE)
    sg_window = threshold_voltage(sg, PolarizationState.HVT, GateKind.FRONT_GATE) - \
        threshold_voltage(sg, PolarizationState.LVT, GateKind.FRONT_GATE)

    assert dg_window == pytest.approx(2.7, abs=1e-9)
    assert sg_window == pytest.approx(1.8, abs=1e-9)
    assert dg_window == pytest.approx(dg.memory_window, abs=1e-9)


def test_threshold_ordering():
    for params in (sg14(), dg14()):
        lvt, mvt, hvt = (threshold_voltage(params, state, params.read_gate)
                         for state in (PolarizationState.LVT, PolarizationState.MVT, PolarizationState.HVT))
        assert lvt < mvt < hvt


def test_front_gate_read_on_dg_device():
    with pytest.raises(DeviceError):
        threshold_voltage(dg14(), PolarizationState.LVT, GateKind.FRONT_GATE)


def test_back_gate_slope_degradation():
    for params in (sg14(), dg14()):
        assert params.subthreshold_slope(GateKind.BACK_GATE) > params.subthreshold_slope(GateKind.FRONT_GATE)


def test_no_drain_bias_no_current():
    assert drain_current(dg14(), PolarizationState.LVT, 2.0, 0.0, GateKind.BACK_GATE) == 0.0


def test_subthreshold_decade_span():
    params = dg14()
    slope = params.ss_back / 1000.0
    at_threshold = drain_current(params, PolarizationState.LVT, params.vth_lvt, params.v_ds_read, GateKind.BACK_GATE)
    one_decade_down = drain_current(params, PolarizationState.LVT, params.vth_lvt - slope, params.v_ds_read,
                                    GateKind.BACK_GATE)
    assert at_threshold / one_decade_down == pytest.approx(10.0, rel=0.05)


def test_current_monotone_in_gate_voltage():
    for params in (sg14(), dg14()):
        for state in PolarizationState:
            currents = [drain_current(params, state, v_gs, params.v_ds_read, params.read_gate)
                        for v_gs in np.linspace(-1.0, 4.0, 100)]
            assert all(a <= b for a, b in zip(currents, currents[1:]))


def test_dg_on_off_ratio():
    params = dg14()
    on = drain_current(params, PolarizationState.LVT, params.vth_lvt + 1.0, params.v_ds_read, GateKind.BACK_GATE)
    off = drain_current(params, PolarizationState.HVT, params.v_read, params.v_ds_read, GateKind.BACK_GATE)
    assert on / off >= 1e4 * (1 - 1e-9)
    assert params.on_off_ratio >= 1e4


def test_search_bias_resistances():
    dg, sg = dg14(), sg14()
    assert read_resistance(dg, PolarizationState.LVT) == pytest.approx(1e5, rel=1e-6)
    assert read_resistance(dg, PolarizationState.MVT) == pytest.approx(12.51e6, rel=1e-3)
    assert read_resistance(dg, PolarizationState.HVT) == pytest.approx(1e9, rel=1e-6)
    assert read_resistance(sg, PolarizationState.LVT) == pytest.approx(5e4, rel=1e-6)
    assert read_resistance(sg, PolarizationState.MVT) == pytest.approx(10.37e6, rel=1e-3)
    assert read_resistance(sg, PolarizationState.HVT) == pytest.approx(5e9, rel=1e-6)


def test_resistance_ordering_and_ratio():
    for params in (sg14(), dg14()):
        r_on, r_m, r_off = (read_resistance(params, state)
                            for state in (PolarizationState.LVT, PolarizationState.MVT, PolarizationState.HVT))
        assert r_on < r_m < r_off
        assert r_off / r_on >= 1e4 * (1 - 1e-9)


def test_resistance_current_duality():
    params = dg14()
    bias = search_bias(params)
    for state in PolarizationState:
        current = drain_current(params, state, bias.v_gs, bias.v_ds, params.read_gate)
        resistance = effective_resistance(params, state, bias, params.read_gate)
        assert resistance * current == pytest.approx(bias.v_ds, rel=1e-6)


def test_resistance_needs_drain_bias():
    with pytest.raises(DeviceError):
        effective_resistance(sg14(), PolarizationState.LVT, Bias(v_gs=0.8, v_ds=0.0), GateKind.FRONT_GATE)


def test_mosfet_switching():
    mosfets = default_mosfets()
    tml, tn, tp = mosfets[MosfetKind.TML], mosfets[MosfetKind.TN], mosfets[MosfetKind.TP]
    assert mosfet_resistance(tml, 0.0) == tml.r_off
    assert mosfet_resistance(tn, 0.8) == tn.r_on
    # Gate grounded with the source at VDD.
    assert mosfet_resistance(tp, -0.8) == tp.r_on
    assert mosfet_resistance(tp, 0.0) == tp.r_off


def test_mosfet_validation():
    with pytest.raises(DeviceError):
        MosfetParams(kind=MosfetKind.TN, vth=0.3, r_on=1e6, r_off=1e8, gate_capacitance=0.0)
    with pytest.raises(DeviceError):
        MosfetParams(kind=MosfetKind.TP, vth=0.3, r_on=1e6, r_off=1e10, gate_capacitance=0.0)


def test_parameter_validation():
    with pytest.raises(DeviceError):
        replace(dg14(), vth_mvt=4.0)
    with pytest.raises(DeviceError):
        replace(sg14(), on_off_ratio=0.5)
    with pytest.raises(DeviceError):
        replace(sg14(), write_mid_level=5.0)


def test_initialize_preset():
    assert initialize_preset("dg14").device_kind is DeviceKind.DG
    assert initialize_preset("sg14", {"i_on_ref": 1.5e-6}).i_on_ref == 1.5e-6

    with pytest.raises(DeviceError):
        initialize_preset("sg7")
    with pytest.raises(DeviceError):
        initialize_preset("sg14", {"device_kind": 2})
    with pytest.raises(DeviceError):
        initialize_preset("sg14", {"gate_length": 14.0})
