"""Provides utility classes and functions"""
import logging
import shutil
from logging import Logger
from math import floor, ceil, comb
from typing import Any, Iterable, List, Sequence

from colorama import init, Fore, Style, Back


def ceil_half(value: int) -> int:
    """
    Integer ceiling of value / 2
    Args:
        value: non-negative integer

    Returns:
        ceil(value / 2) without going through floats
    """
    return -(-value // 2)


def tverberg_row_count(n: int) -> int:
    """Row count 4 * C(n, 2) + 1 of the rank system for n points"""
    return 4 * comb(n, 2) + 1


def mask_of(indices: Iterable[int]) -> int:
    """
    Builds a subset bitmask from point indices
    Args:
        indices: indices into the ambient point set

    Returns:
        bitmask with bit i set for every index i
    """
    mask = 0
    for index in indices:
        if index < 0:
            raise ValueError(f"Negative index {index} in subset.")
        mask |= 1 << index
    return mask


def indices_of(mask: int) -> List[int]:
    """Sorted list of the indices set in mask"""
    indices = []
    index = 0
    while mask:
        if mask & 1:
            indices.append(index)
        mask >>= 1
        index += 1
    return indices


def is_subset(a: int, b: int) -> bool:
    """True iff subset a is contained in subset b (not necessarily strictly)"""
    return a & b == a


init(strip=False)


class CustomLogger:
    """
    Colored console logger; success, failure and tables are shorthands for
    pipeline results
    """

    LEVEL_DEBUG = logging.DEBUG
    LEVEL_INFO = logging.INFO
    LEVEL_WARN = logging.WARNING
    LEVEL_ERR = logging.ERROR

    _LEVEL_STYLES = {
        LEVEL_DEBUG: Fore.BLACK,
        LEVEL_INFO: Back.BLACK + Fore.WHITE,
        LEVEL_WARN: Back.YELLOW + Fore.BLACK,
        LEVEL_ERR: Back.RED + Fore.WHITE,
    }
    _SUCCESS_STYLE = Back.BLACK + Fore.GREEN
    _FAILURE_STYLE = Back.BLACK + Fore.RED
    _HEADER_STYLE = Back.GREEN + Fore.BLACK

    def __init__(self, name: str, level: int = LEVEL_INFO):
        self._logger = Logger(name)
        self._logger.setLevel(level)
        self._logger.addHandler(logging.StreamHandler())

    def set_level(self, level: int) -> None:
        self._logger.setLevel(level)

    def _emit(self, level: int, style: str, s: Any) -> None:
        self._logger.log(level, style + str(s) + Style.RESET_ALL)

    def log(self, s: Any, level: int = LEVEL_INFO):
        self._emit(level, self._LEVEL_STYLES.get(level, ""), s)

    def debug(self, s: Any):
        self.log(s, self.LEVEL_DEBUG)

    def info(self, s: Any):
        self.log(s, self.LEVEL_INFO)

    def warning(self, s: Any):
        self.log(s, self.LEVEL_WARN)

    def error(self, s: Any):
        self.log(s, self.LEVEL_ERR)

    def success(self, s: Any, level: int = LEVEL_INFO):
        self._emit(level, self._SUCCESS_STYLE, s)

    def failure(self, s: Any, level: int = LEVEL_ERR):
        self._emit(level, self._FAILURE_STYLE, s)

    def _banner(self, s: str, level: int):
        # centered in the terminal, at least three '#' on each side
        spare = shutil.get_terminal_size().columns - len(s) - 2
        left, right = max(floor(spare / 2), 3), max(ceil(spare / 2), 3)
        self._emit(level, self._HEADER_STYLE, f"{'#' * left} {s} {'#' * right}")

    def header_start(self, s: Any, level: int = LEVEL_INFO):
        self._logger.log(level, "")
        self._banner(str(s), level)

    def header_end(self, level: int = LEVEL_INFO):
        self._banner("DONE", level)

    def table(self, rows: Sequence[Sequence[Any]], level: int = LEVEL_INFO):
        """
        Logs rows as a left-aligned text table, first row is the header
        Args:
            rows: table rows, all of the same length
            level: logging level
        """
        if len(rows) == 0:
            return
        cells = [[str(cell) for cell in row] for row in rows]
        widths = [max(len(row[col]) for row in cells) for col in range(len(cells[0]))]
        for i, row in enumerate(cells):
            line = "  ".join(cell.ljust(widths[col]) for col, cell in enumerate(row))
            self._emit(level, Style.BRIGHT if i == 0 else "", line)
