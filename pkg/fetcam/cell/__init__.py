from typing import Union

from fetcam.cell.cell import Cell, States
from fetcam.cell.divider import DividerParams
from fetcam.cell.one_five_cell import OneFiveCell
from fetcam.cell.two_fefet_cell import TwoFeFetCell
from fetcam.cell_types import CellDesign, TernaryBit
from fetcam.device.fefet import FeFetParams
from fetcam.device_types import PolarizationState

# A list of all cell implementations available.
all_cells: list[type[Cell]] = [TwoFeFetCell, OneFiveCell]

# A map of cell design to cell implementation.
cell_map: dict[int, type[Cell]] = {}
for cell in all_cells:
    for cell_design in cell.cell_designs:
        cell_map[cell_design.value] = cell


def initialize_cell(design: CellDesign, dev: FeFetParams, div: DividerParams) -> Cell:
    """Get the relevant cell implementation by design."""
    return cell_map[design.value](design, dev, div)


def encode(design: CellDesign, value: TernaryBit) -> Union[PolarizationState, States]:
    """Encode a symbol: a (left, right) pair for 2FeFET designs, a single state for 1.5T1Fe designs."""
    states = cell_map[design.value].encode(value)
    return states[0] if design.is_paired else states


def decode(design: CellDesign, states: Union[PolarizationState, States]) -> TernaryBit:
    """Decode the result of encode back into its symbol."""
    if isinstance(states, PolarizationState):
        states = (states,)
    return cell_map[design.value].decode(tuple(states))
