from enum import Enum


class DeviceError(Exception):
    """A device parameter or device evaluation specific error."""
    pass


class DeviceKind(Enum):
    """FeFET device families."""
    SG = 1
    DG = 2

    @property
    def label(self) -> str:
        return self.name.lower()


class GateKind(Enum):
    """The gate a read (or write) pulse is applied to."""
    FRONT_GATE = 1
    BACK_GATE = 2


class PolarizationState(Enum):
    """
    The nonvolatile state of a single FeFET.

    Values double as indices into the lookup tables built by the cell and
    performance models, so they must stay dense and start at zero.
    """
    HVT = 0
    MVT = 1
    LVT = 2


class MosfetKind(Enum):
    """The plain control transistors of a 1.5T1Fe cell pair."""
    TP = 1
    TN = 2
    TML = 3
