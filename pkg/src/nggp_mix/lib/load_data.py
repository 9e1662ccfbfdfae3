"""Reading observations from CSV files."""

import csv
import logging
from pathlib import Path
from typing import List, Union

import numpy as np

from ..core.errors import DataFormatError

logger = logging.getLogger(__name__)


def _parse_row(row: List[str]) -> List[float]:
    return [float(cell) for cell in row]


def load_csv(path: Union[str, Path]) -> np.ndarray:
    """Load one observation per row from a comma-separated file.

    A first row that does not parse as numbers is taken as a header. Blank
    lines are skipped.

    Args:
        path: UTF-8 CSV file

    Returns:
        (n, D) float array

    Raises:
        DataFormatError: On an empty file, a ragged row or an unparseable value
            (the message names the 1-based line number)
    """
    path = Path(path)
    logger.info(f"Loading observations from {path}")
    try:
        with path.open(newline="", encoding="utf-8") as handle:
            lines = list(enumerate(csv.reader(handle), start=1))
    except (OSError, UnicodeDecodeError) as e:
        raise DataFormatError(f"Cannot read {path}: {e}") from e

    lines = [(number, row) for number, row in lines if any(cell.strip() for cell in row)]
    if not lines:
        raise DataFormatError(f"{path} contains no observations")

    first_number, first_row = lines[0]
    try:
        _parse_row(first_row)
    except ValueError:
        logger.debug(f"Treating line {first_number} as a header: {first_row}")
        width = len(first_row)
        lines = lines[1:]
        if not lines:
            raise DataFormatError(f"{path} has a header but no observations")
    else:
        width = len(first_row)

    rows = []
    for number, row in lines:
        if len(row) != width:
            raise DataFormatError(
                f"{path}, line {number}: expected {width} values, found {len(row)}"
            )
        try:
            rows.append(_parse_row(row))
        except ValueError as e:
            raise DataFormatError(f"{path}, line {number}: {e}") from e

    data = np.array(rows, dtype=float)
    if not np.all(np.isfinite(data)):
        raise DataFormatError(f"{path} contains non-finite values")
    logger.info(f"Loaded {data.shape[0]} observations of dimension {data.shape[1]}")
    return data
