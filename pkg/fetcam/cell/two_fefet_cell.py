from dataclasses import dataclass
from typing import Union

from fetcam.cell.cell import Cell, States
from fetcam.cell_types import CellDesign, CellEncodingError, TernaryBit
from fetcam.device.fefet import FeFetParams, read_resistance
from fetcam.device_types import PolarizationState


@dataclass(frozen=True)
class FeFetPair:
    """The complementary FeFETs of a 2FeFET cell."""
    left: PolarizationState
    right: PolarizationState

    def __post_init__(self) -> None:
        if self.left is PolarizationState.LVT and self.right is PolarizationState.LVT:
            raise CellEncodingError("The (LVT, LVT) pair cannot be written")

    def activated(self, search_bit: TernaryBit) -> PolarizationState:
        """SL drives the left FeFET when searching 0, SL_bar the right one when searching 1."""
        if search_bit is TernaryBit.DONT_CARE:
            raise CellEncodingError("Search queries carry only 0 and 1")
        return self.left if search_bit is TernaryBit.ZERO else self.right


@dataclass(frozen=True)
class TwoFeFetMatch:
    pulls_down: bool
    path_resistance: float


def evaluate_match_2fefet(pair: Union[FeFetPair, tuple[PolarizationState, PolarizationState]],
                          search_bit: TernaryBit, dev: FeFetParams) -> TwoFeFetMatch:
    """
    Evaluate one searched 2FeFET cell.
    :param pair: The (left, right) FeFET states.
    :param search_bit: The searched symbol.
    :param dev: The device parameters.
    :return: Whether the activated FeFET pulls the ML down, and its resistance.
    """
    if not isinstance(pair, FeFetPair):
        pair = FeFetPair(*pair)

    activated = pair.activated(search_bit)
    return TwoFeFetMatch(pulls_down=activated is PolarizationState.LVT,
                         path_resistance=read_resistance(dev, activated))


class TwoFeFetCell(Cell):
    """A 2FeFET cell storing a symbol in a complementary FeFET pair."""
    cell_designs = (CellDesign.TWO_FEFET_SG, CellDesign.TWO_FEFET_DG)
    encoding = {
        TernaryBit.ZERO: (PolarizationState.HVT, PolarizationState.LVT),
        TernaryBit.ONE: (PolarizationState.LVT, PolarizationState.HVT),
        TernaryBit.DONT_CARE: (PolarizationState.HVT, PolarizationState.HVT),
    }

    @property
    def gate_lines(self) -> tuple[str, ...]:
        return ("BL", "BL_bar")

    @property
    def write_levels(self) -> list[float]:
        return [self.dev.write_neg_threshold, self.dev.write_pos_threshold]

    def write_voltages(self, value: TernaryBit) -> dict[str, float]:
        bl, bl_bar = self.write_gate_voltages(value)
        return {"BL": bl, "BL_bar": bl_bar, "SL": 0.0, "SL_bar": 0.0}

    def write_gate_voltages(self, value: TernaryBit) -> tuple[float, ...]:
        levels = {PolarizationState.HVT: self.dev.write_neg_threshold,
                  PolarizationState.LVT: self.dev.write_pos_threshold}
        return tuple(levels[state] for state in self.encode(value))

    def search_voltages(self, search_bit: TernaryBit) -> dict[str, float]:
        if search_bit is TernaryBit.DONT_CARE:
            raise CellEncodingError("Search queries carry only 0 and 1")

        sl = self.div.v_search if search_bit is TernaryBit.ZERO else 0.0
        sl_bar = self.div.v_search if search_bit is TernaryBit.ONE else 0.0
        return {"BL": 0.0, "BL_bar": 0.0, "SL": sl, "SL_bar": sl_bar}

    def mismatch(self, states: States, search_bit: TernaryBit) -> bool:
        left, right = states
        return evaluate_match_2fefet((left, right), search_bit, self.dev).pulls_down
