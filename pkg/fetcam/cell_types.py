from enum import Enum

from fetcam.device_types import DeviceKind


class CellEncodingError(Exception):
    """A TCAM symbol or cell state specific error."""
    pass


class TernaryBit(Enum):
    """A stored TCAM symbol; queries only ever carry ZERO and ONE."""
    ZERO = 0
    ONE = 1
    DONT_CARE = 2

    @property
    def symbol(self) -> str:
        return SYMBOLS[self]

    @staticmethod
    def from_symbol(symbol: str) -> "TernaryBit":
        """
        Parse a single grid character.
        :param symbol: One of '0', '1' or 'X' (lower case 'x' is accepted).
        :return: The ternary bit.
        """
        for bit, character in SYMBOLS.items():
            if symbol.upper() == character:
                return bit

        raise CellEncodingError(f"Symbol '{symbol}' is not one of 0, 1, X")


SYMBOLS = {TernaryBit.ZERO: "0", TernaryBit.ONE: "1", TernaryBit.DONT_CARE: "X"}


class CellDesign(Enum):
    """The four FeFET TCAM cell designs."""
    TWO_FEFET_SG = 1
    TWO_FEFET_DG = 2
    ONE_FIVE_SG = 3
    ONE_FIVE_DG = 4

    @property
    def device_kind(self) -> DeviceKind:
        if self in (CellDesign.TWO_FEFET_SG, CellDesign.ONE_FIVE_SG):
            return DeviceKind.SG
        return DeviceKind.DG

    @property
    def is_paired(self) -> bool:
        """1.5T1Fe designs group two cells around one TP/TN/TML set."""
        return self in (CellDesign.ONE_FIVE_SG, CellDesign.ONE_FIVE_DG)

    @property
    def label(self) -> str:
        return LABELS[self]

    @staticmethod
    def from_label(label: str) -> "CellDesign":
        """
        Find a design by its report label (case insensitive) or enum name.
        :param label: For example "1.5T1DG-Fe" or "ONE_FIVE_DG".
        :return: The design.
        """
        for design, design_label in LABELS.items():
            if label.lower() in (design_label.lower(), design.name.lower()):
                return design

        raise CellEncodingError(f"Cell design '{label}' not found")


LABELS = {
    CellDesign.TWO_FEFET_SG: "2SG-FeFET",
    CellDesign.TWO_FEFET_DG: "2DG-FeFET",
    CellDesign.ONE_FIVE_SG: "1.5T1SG-Fe",
    CellDesign.ONE_FIVE_DG: "1.5T1DG-Fe",
}


def ternary_match(stored: TernaryBit, query: TernaryBit) -> bool:
    """The reference wildcard match every cell design must reproduce."""
    return stored is TernaryBit.DONT_CARE or stored is query
