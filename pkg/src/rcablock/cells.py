"""Finite sets of integer cell positions with Minkowski arithmetic.

``A + B`` and ``A - B`` are the Minkowski sum and difference, ``-A`` is the
reflection.  Plain set difference is spelled ``A.without(B)``.
"""

from __future__ import annotations

from typing import Iterable, Iterator


class CellSet:
    __slots__ = ("cells",)

    def __init__(self, cells: Iterable[int] = ()):
        self.cells: tuple[int, ...] = tuple(sorted({int(c) for c in cells}))

    @classmethod
    def interval(cls, lo: int, hi: int) -> "CellSet":
        return cls(range(lo, hi + 1))

    @classmethod
    def parse(cls, text: str) -> "CellSet":
        """Accept ``"0,1,2"``, ``"{0,1,2}"``, ``"0..2"`` or ``"-1..1,4"``."""
        text = text.strip().strip("{}").strip()
        out: list[int] = []
        if not text:
            return cls()
        for part in text.replace(" ", ",").split(","):
            if not part:
                continue
            if ".." in part:
                lo, hi = part.split("..", 1)
                out.extend(range(int(lo), int(hi) + 1))
            else:
                out.append(int(part))
        return cls(out)

    def __iter__(self) -> Iterator[int]:
        return iter(self.cells)

    def __len__(self) -> int:
        return len(self.cells)

    def __contains__(self, c: object) -> bool:
        return c in self.cells

    def __bool__(self) -> bool:
        return bool(self.cells)

    def __eq__(self, other: object) -> bool:
        if isinstance(other, CellSet):
            return self.cells == other.cells
        if isinstance(other, (set, frozenset)):
            return set(self.cells) == other
        return NotImplemented

    def __hash__(self) -> int:
        return hash(self.cells)

    def __repr__(self) -> str:
        return f"CellSet({list(self.cells)})"

    def __str__(self) -> str:
        return "{" + ",".join(map(str, self.cells)) + "}"

    def csv(self) -> str:
        return ",".join(map(str, self.cells))

    def __add__(self, other: "CellSet") -> "CellSet":
        return CellSet(a + b for a in self.cells for b in _cells(other))

    def __sub__(self, other: "CellSet") -> "CellSet":
        return CellSet(a - b for a in self.cells for b in _cells(other))

    def __neg__(self) -> "CellSet":
        return CellSet(-a for a in self.cells)

    def __or__(self, other: "CellSet") -> "CellSet":
        return CellSet(self.cells + tuple(_cells(other)))

    def __and__(self, other: "CellSet") -> "CellSet":
        o = set(_cells(other))
        return CellSet(c for c in self.cells if c in o)

    def without(self, other: Iterable[int]) -> "CellSet":
        o = set(other)
        return CellSet(c for c in self.cells if c not in o)

    def shifted(self, k: int) -> "CellSet":
        return CellSet(c + k for c in self.cells)

    def scaled(self, k: int) -> "CellSet":
        return CellSet(c * k for c in self.cells)

    def issubset(self, other: "CellSet") -> bool:
        return set(self.cells) <= set(_cells(other))

    def issuperset(self, other: "CellSet") -> bool:
        return set(self.cells) >= set(_cells(other))

    __le__ = issubset
    __ge__ = issuperset

    def index(self, c: int) -> int:
        return self.cells.index(c)

    @property
    def min(self) -> int:
        return self.cells[0]

    @property
    def max(self) -> int:
        return self.cells[-1]

    def hull(self) -> "CellSet":
        """Smallest integer interval containing the set (empty stays empty)."""
        if not self.cells:
            return CellSet()
        return CellSet.interval(self.cells[0], self.cells[-1])

    def is_interval(self) -> bool:
        return bool(self.cells) and self.cells[-1] - self.cells[0] + 1 == len(self.cells)


def _cells(x) -> Iterable[int]:
    return x.cells if isinstance(x, CellSet) else x


def cellset(*cells: int) -> CellSet:
    return CellSet(cells)


def interval(lo: int, hi: int) -> CellSet:
    return CellSet.interval(lo, hi)


# Functional spellings for callers that prefer them.
def minkowski_sum(a: CellSet, b: CellSet) -> CellSet:
    return a + b


def minkowski_diff(a: CellSet, b: CellSet) -> CellSet:
    return a - b


def negate(a: CellSet) -> CellSet:
    return -a


def union(a: CellSet, b: CellSet) -> CellSet:
    return a | b


def intersect(a: CellSet, b: CellSet) -> CellSet:
    return a & b


def hull_interval(a: CellSet) -> CellSet:
    return a.hull()
