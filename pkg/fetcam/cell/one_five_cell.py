from fetcam.cell.cell import Cell, States
from fetcam.cell.divider import evaluate_match_1p5
from fetcam.cell_types import CellDesign, CellEncodingError, TernaryBit
from fetcam.device_types import PolarizationState


class OneFiveCell(Cell):
    """
    A 1.5T1Fe cell: one FeFET with three threshold levels, sharing TP, TN and
    TML with its pair partner. The SG variant merges BL and SeL onto the front
    gate; the DG variant selects through the back gate.
    """
    cell_designs = (CellDesign.ONE_FIVE_SG, CellDesign.ONE_FIVE_DG)
    encoding = {
        TernaryBit.ZERO: (PolarizationState.HVT,),
        TernaryBit.ONE: (PolarizationState.LVT,),
        TernaryBit.DONT_CARE: (PolarizationState.MVT,),
    }

    @property
    def bit_line(self) -> str:
        return "BL/SeL" if self.design is CellDesign.ONE_FIVE_SG else "BL"

    @property
    def gate_lines(self) -> tuple[str, ...]:
        return (self.bit_line,)

    @property
    def write_levels(self) -> list[float]:
        return [self.dev.write_neg_threshold, self.dev.write_pos_threshold, self.dev.write_mid_level]

    def write_voltages(self, value: TernaryBit) -> dict[str, float]:
        (bl,) = self.write_gate_voltages(value)
        voltages = {self.bit_line: bl, "Wr/SL": self.div.vdd, "SL": 0.0}
        if self.design is CellDesign.ONE_FIVE_DG:
            voltages["SeL"] = 0.0
        return voltages

    def write_gate_voltages(self, value: TernaryBit) -> tuple[float, ...]:
        return ({
            TernaryBit.ZERO: self.dev.write_neg_threshold,
            TernaryBit.ONE: self.dev.write_pos_threshold,
            TernaryBit.DONT_CARE: self.dev.write_mid_level,
        }[value],)

    def search_voltages(self, search_bit: TernaryBit) -> dict[str, float]:
        if search_bit is TernaryBit.DONT_CARE:
            raise CellEncodingError("Search queries carry only 0 and 1")

        drive = self.div.vdd if search_bit is TernaryBit.ZERO else 0.0
        if self.design is CellDesign.ONE_FIVE_SG:
            return {"BL/SeL": self.div.v_sel, "Wr/SL": drive, "SL": drive}

        bl = self.div.v_b if search_bit is TernaryBit.ZERO else 0.0
        return {"BL": bl, "SeL": self.div.v_sel, "Wr/SL": drive, "SL": drive}

    def mismatch(self, states: States, search_bit: TernaryBit) -> bool:
        (state,) = states
        return evaluate_match_1p5(state, search_bit, self.dev, self.div).tml_conducting
