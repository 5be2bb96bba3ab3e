from typing import Optional


def femtojoules(value: Optional[float]) -> str:
    """Energies in fJ with three significant digits."""
    return "" if value is None else f"{value * 1e15:.3g}"


def picoseconds(value: Optional[float]) -> str:
    return "" if value is None else f"{value * 1e12:.4g}"


def ratio(value: Optional[float]) -> str:
    return "" if value is None else f"{value:.3g}"
