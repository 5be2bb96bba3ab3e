from fetcam.cell.divider import DividerParams
from fetcam.cell_types import CellDesign, CellEncodingError, TernaryBit
from fetcam.configuration.configuration_types import ConfigurationError
from fetcam.device.fefet import FeFetParams
from fetcam.device_types import PolarizationState

States = tuple[PolarizationState, ...]


class Cell:
    """
    A TCAM cell design.

    Each cell class serves one or more designs and knows how a ternary symbol
    maps onto FeFET states, which line voltages write and search it, and how a
    searched cell decides between match and mismatch. States are always
    handled as a tuple with one entry per FeFET of the cell.
    """
    cell_designs: tuple[CellDesign, ...] = ()
    encoding: dict[TernaryBit, States] = {}

    def __init__(self, design: CellDesign, dev: FeFetParams, div: DividerParams):
        """
        Initialize the cell.
        :param design: The cell design.
        :param dev: The FeFET parameters, matching the design's device family.
        :param div: The family's electrical levels.
        """
        if design not in self.cell_designs:
            raise CellEncodingError(f"Design {design.label} does not belong to {type(self).__name__}")
        if dev.device_kind is not design.device_kind:
            raise ConfigurationError(
                f"Design {design.label} needs a {design.device_kind.name} device, got {dev.device_kind.name}")

        self.design = design
        self.dev = dev
        self.div = div

    @classmethod
    def encode(cls, value: TernaryBit) -> States:
        """
        Get the FeFET states storing a symbol.
        :param value: The symbol.
        :return: One state per FeFET.
        """
        return cls.encoding[value]

    @classmethod
    def decode(cls, states: States) -> TernaryBit:
        """
        Get the symbol stored by a set of FeFET states.
        :param states: One state per FeFET.
        :return: The symbol.
        """
        for value, encoded in cls.encoding.items():
            if encoded == tuple(states):
                return value

        raise CellEncodingError(f"States {[state.name for state in states]} are not a legal encoding")

    @property
    def write_levels(self) -> list[float]:
        """The front-gate levels of the write passes, in pass order."""
        raise NotImplementedError

    def write_voltages(self, value: TernaryBit) -> dict[str, float]:
        """The write-row line voltages of the operation table."""
        raise NotImplementedError

    @property
    def gate_lines(self) -> tuple[str, ...]:
        """The write-table line driving the front gate of each FeFET."""
        raise NotImplementedError

    def write_gate_voltages(self, value: TernaryBit) -> tuple[float, ...]:
        """The front-gate write voltage seen by each FeFET of the cell."""
        raise NotImplementedError

    def search_voltages(self, search_bit: TernaryBit) -> dict[str, float]:
        """The search-row line voltages of the operation table."""
        raise NotImplementedError

    def mismatch(self, states: States, search_bit: TernaryBit) -> bool:
        """Whether a searched cell discharges the match line."""
        raise NotImplementedError
