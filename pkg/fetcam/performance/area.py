from fetcam.cell_types import CellDesign
from fetcam.performance.constants import CellConstants


def area_estimate(design: CellDesign, rows: int, cols: int, cc: CellConstants, p_well_count: int) -> float:
    """
    Estimate the cell-array area.

    The per-cell constants already include the P-well spacing, so the explicit
    well term only contributes when well_spacing_overhead is configured.
    :param design: The cell design.
    :param rows: The number of rows.
    :param cols: The number of columns.
    :param cc: The cell constants.
    :param p_well_count: The number of isolated P-wells.
    :return: The area in um^2.
    """
    return rows * cols * cc.area_um2[design] + p_well_count * cc.well_spacing_overhead
