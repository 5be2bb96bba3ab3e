from pathlib import Path
from typing import Iterable

import numpy as np

from fetcam.cell_types import CellEncodingError, TernaryBit
from fetcam.configuration.configuration_types import InputFormatError

COMMENT = "#"


def _parse(lines: Iterable[str], source: str, allow_dont_care: bool) -> np.ndarray:
    rows: list[list[int]] = []
    width = None
    for line_number, line in enumerate(lines, start=1):
        text = line.strip()
        if not text or text.startswith(COMMENT):
            continue

        try:
            row = [TernaryBit.from_symbol(symbol).value for symbol in text]
        except CellEncodingError as err:
            raise InputFormatError(f"{source}:{line_number}: {err}")
        if not allow_dont_care and TernaryBit.DONT_CARE.value in row:
            raise InputFormatError(f"{source}:{line_number}: queries carry only 0 and 1")
        if width is not None and len(row) != width:
            raise InputFormatError(f"{source}:{line_number}: expected {width} symbols, found {len(row)}")

        width = len(row)
        rows.append(row)

    if not rows:
        raise InputFormatError(f"{source}: no rows found")
    return np.array(rows, dtype=np.int8)


def parse_grid(lines: Iterable[str], source: str = "<grid>") -> np.ndarray:
    """
    Parse array contents: one row per line over 0, 1 and X.
    :param lines: The text lines.
    :param source: The name used in error messages.
    :return: The M x N TernaryBit codes.
    """
    return _parse(lines, source, allow_dont_care=True)


def parse_queries(lines: Iterable[str], source: str = "<queries>") -> np.ndarray:
    """Parse queries: one query per line over 0 and 1."""
    return _parse(lines, source, allow_dont_care=False)


def read_grid(path: Path) -> np.ndarray:
    with open(path, "r") as stream:
        return parse_grid(stream, str(path))


def read_queries(path: Path) -> np.ndarray:
    with open(path, "r") as stream:
        return parse_queries(stream, str(path))


def format_row(codes: np.ndarray) -> str:
    return "".join(TernaryBit(int(code)).symbol for code in codes)


def write_grid(path: Path, codes: np.ndarray) -> None:
    """
    Write symbol codes as a text grid that read_grid and read_queries accept.
    :param path: The output file.
    :param codes: The codes, one row per line.
    :return: None.
    """
    with open(path, "w") as stream:
        for row in np.atleast_2d(codes):
            stream.write(format_row(row) + "\n")


def random_words(rng: np.random.Generator, rows: int, cols: int) -> np.ndarray:
    """Draw stored symbols uniformly over 0, 1 and X."""
    return rng.integers(0, len(TernaryBit), size=(rows, cols)).astype(np.int8)


def random_queries(rng: np.random.Generator, count: int, cols: int) -> np.ndarray:
    """Draw queries uniformly over 0 and 1."""
    return rng.integers(0, 2, size=(count, cols)).astype(np.int8)
