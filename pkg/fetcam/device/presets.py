from fetcam.device.fefet import FeFetParams
from fetcam.device.mosfet import MosfetParams
from fetcam.device_types import DeviceKind, MosfetKind


def sg14() -> FeFetParams:
    """14nm FDSOI single-gate FeFET: front-gate write and read, 1.8 V memory window."""
    return FeFetParams(
        device_kind=DeviceKind.SG,
        vth_lvt=0.2,
        vth_mvt=0.87,
        vth_hvt=2.0,
        ss_front=70.0,
        ss_back=200.0,
        i_on_ref=2e-6,
        v_ov_ref=0.6,
        on_off_ratio=1e5,
        v_read=0.8,
        v_ds_read=0.1,
        v_dsat=0.1,
        write_pos_threshold=4.0,
        write_neg_threshold=-4.0,
        write_mid_level=3.2,
        fe_thickness=10.0,
    )


def dg14() -> FeFetParams:
    """14nm FDSOI double-gate FeFET: front-gate write, back-gate read, 2.7 V memory window."""
    return FeFetParams(
        device_kind=DeviceKind.DG,
        vth_lvt=1.0,
        vth_mvt=2.2,
        vth_hvt=3.7,
        ss_front=70.0,
        ss_back=200.0,
        i_on_ref=1e-6,
        v_ov_ref=1.0,
        on_off_ratio=1e4,
        v_read=2.0,
        v_ds_read=0.1,
        v_dsat=0.1,
        write_pos_threshold=2.0,
        write_neg_threshold=-2.0,
        write_mid_level=1.6,
        fe_thickness=5.0,
    )


def default_mosfets() -> dict[MosfetKind, MosfetParams]:
    """The TP/TN/TML control transistors of a 1.5T1Fe cell pair."""
    return {
        MosfetKind.TP: MosfetParams(kind=MosfetKind.TP, vth=-0.3, r_on=1e8, r_off=1e12, gate_capacitance=5e-17),
        MosfetKind.TN: MosfetParams(kind=MosfetKind.TN, vth=0.3, r_on=1e6, r_off=1e10, gate_capacitance=5e-17),
        MosfetKind.TML: MosfetParams(kind=MosfetKind.TML, vth=0.3, r_on=6e4, r_off=1e9, gate_capacitance=3e-17),
    }
