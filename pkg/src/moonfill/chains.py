"""Longest ne and se chains of 1-cells in a filling.

A ne chain runs bottom-left to top-right (rows strictly decreasing as
columns strictly increase), an se chain top-left to bottom-right (rows and
columns both strictly increasing). A candidate set of 1-cells counts as a
chain only when the full grid of row/column combinations it spans lies
inside the shape.

For shapes whose rows are intervals the grid condition has a useful
equivalent: a monotone set is a chain exactly when every member's row
interval covers the whole column span of the set. The fast search below
exploits that by scanning column spans; the brute-force oracle and
is_valid_chain stay with the definition.
"""

from dataclasses import dataclass
from itertools import combinations
from typing import Iterable, Sequence

from .fillings import CellOutsideShape, Filling
from .shapes import Cell, Polyomino

NE = "ne"
SE = "se"


class ChainError(ValueError):
    pass


class NotAOneCell(ChainError):
    pass


class TooManyOnes(ChainError):
    pass


@dataclass(frozen=True)
class Chain:
    """A witness chain; cells are listed in canonical order (see canonical_order)."""

    cells: tuple[Cell, ...]
    direction: str

    def __len__(self) -> int:
        return len(self.cells)


def canonical_order(cells: Iterable[Cell], direction: str) -> tuple[Cell, ...]:
    """ne chains list rows in decreasing order, se chains in increasing order."""
    if direction == NE:
        return tuple(sorted(cells, key=lambda c: (-c.row, c.col)))
    if direction == SE:
        return tuple(sorted(cells, key=lambda c: (c.row, c.col)))
    raise ValueError(f"direction must be {NE!r} or {SE!r}, got {direction!r}")


def _monotone(ordered: Sequence[Cell], direction: str) -> bool:
    for a, b in zip(ordered, ordered[1:]):
        if direction == NE:
            if not (b.row < a.row and b.col > a.col):
                return False
        else:
            if not (b.row > a.row and b.col > a.col):
                return False
    return True


def is_valid_chain(shape: Polyomino, cells: Iterable[Cell], direction: str) -> bool:
    """Definitional check: monotone, and the spanned grid lies in the shape.

    Raises CellOutsideShape when a candidate cell is not in the shape at all.
    The empty set is not a chain.
    """
    cs = [Cell(r, c) for r, c in cells]
    for cell in cs:
        if not shape.contains(cell.row, cell.col):
            raise CellOutsideShape(f"({cell.row},{cell.col}) is not a cell of the shape")
    if not cs:
        return False
    ordered = canonical_order(cs, direction)
    if not _monotone(ordered, direction):
        return False
    for a in ordered:
        for b in ordered:
            if not shape.contains(a.row, b.col):
                return False
    return True


def _pair_ok(shape: Polyomino, a: Cell, b: Cell) -> bool:
    # both cells already in shape; check the two opposite rectangle corners
    return shape.contains(a.row, b.col) and shape.contains(b.row, a.col)


def _spans(shape: Polyomino):
    """Distinct (eligible rows, column window) combinations for the span scan."""
    seen = set()
    out = []
    for a in range(1, shape.width + 1):
        for b in range(a, shape.width + 1):
            rows_ok = frozenset(
                i for i in range(1, shape.row_count + 1)
                if shape.rows[i - 1].start <= a and shape.rows[i - 1].end >= b)
            if not rows_ok:
                continue
            key = (rows_ok, a, b)
            if key in seen:
                continue
            seen.add(key)
            out.append((rows_ok, a, b))
    return out


def _span_lis(cells: list[Cell], direction: str) -> list[int]:
    """Longest chain ending at each cell, cells pre-sorted by column ascending."""
    ends = [1] * len(cells)
    for i, c in enumerate(cells):
        best = 0
        for j in range(i):
            p = cells[j]
            if p.col < c.col and (p.row > c.row if direction == NE else p.row < c.row):
                best = max(best, ends[j])
        ends[i] = best + 1
    return ends


def longest_chain(filling: Filling, direction: str) -> tuple[int, Chain | None]:
    """Length of the longest chain and the lexicographically least witness.

    Among all maximum chains the witness minimizes the canonical cell list
    under tuple comparison. Returns (0, None) for a filling with no 1-cells.
    """
    m = _longest_len(filling, direction)
    if m == 0:
        return 0, None
    witness = _lex_witness(filling, direction, m)
    return m, Chain(witness, direction)


def _longest_len(filling: Filling, direction: str) -> int:
    ones = filling.ones_sorted()
    if not ones:
        return 0
    shape = filling.shape
    best = 0
    for rows_ok, a, b in _spans(shape):
        elig = [c for c in ones if c.row in rows_ok and a <= c.col <= b]
        if len(elig) <= best:
            continue
        elig.sort(key=lambda c: c.col)
        best = max(best, max(_span_lis(elig, direction)))
    return best


def _lex_witness(filling: Filling, direction: str, m: int) -> tuple[Cell, ...]:
    shape = filling.shape
    pool = sorted(filling.ones())  # ascending (row, col): lexicographic try order

    def step(chosen: list[Cell]) -> tuple[Cell, ...] | None:
        if len(chosen) == m:
            return tuple(chosen)
        for cand in pool:
            if chosen:
                last = chosen[-1]
                if direction == NE:
                    if not (cand.row < last.row and cand.col > last.col):
                        continue
                else:
                    if not (cand.row > last.row and cand.col > last.col):
                        continue
                if not all(_pair_ok(shape, c, cand) for c in chosen):
                    continue
            # optimistic bound: every remaining cell extending cand counted
            if direction == NE:
                rest = sum(1 for x in pool if x.row < cand.row and x.col > cand.col)
            else:
                rest = sum(1 for x in pool if x.row > cand.row and x.col > cand.col)
            if len(chosen) + 1 + rest < m:
                continue
            chosen.append(cand)
            got = step(chosen)
            chosen.pop()
            if got is not None:
                return got
        return None

    got = step([])
    assert got is not None, "witness search must succeed once the length is known"
    return got


def ne(filling: Filling) -> int:
    """Length of the longest ne chain (0 for an empty filling)."""
    return _longest_len(filling, NE)


def se(filling: Filling) -> int:
    """Length of the longest se chain (0 for an empty filling)."""
    return _longest_len(filling, SE)


def max_chain_through(filling: Filling, cell, direction: str) -> int:
    """Longest chain of the given direction passing through a given 1-cell."""
    r, c = cell
    v = Cell(r, c)
    if filling.get(r, c) != 1:
        raise NotAOneCell(f"({r},{c}) does not hold a 1")
    ones = filling.ones_sorted()
    shape = filling.shape
    best = 0
    for rows_ok, a, b in _spans(shape):
        if v.row not in rows_ok or not a <= v.col <= b:
            continue
        elig = [x for x in ones if x.row in rows_ok and a <= x.col <= b]
        elig.sort(key=lambda x: x.col)
        ends = _span_lis(elig, direction)
        # longest chain starting at x: same DP over reversed column order
        starts_rev = _span_lis_rev(list(reversed(elig)), direction)
        idx = elig.index(v)
        best = max(best, ends[idx] + starts_rev[len(elig) - 1 - idx] - 1)
    return best


def _span_lis_rev(cells_desc: list[Cell], direction: str) -> list[int]:
    """Longest chain starting at each cell, cells pre-sorted by column descending."""
    starts = [1] * len(cells_desc)
    for i, c in enumerate(cells_desc):
        best = 0
        for j in range(i):
            p = cells_desc[j]
            if p.col > c.col and (p.row < c.row if direction == NE else p.row > c.row):
                best = max(best, starts[j])
        starts[i] = best + 1
    return starts


def brute_force_longest(filling: Filling, direction: str, max_ones: int = 20) -> int:
    """Oracle: try every subset of 1-cells, largest first, using is_valid_chain."""
    ones = filling.ones_sorted()
    if len(ones) > max_ones:
        raise TooManyOnes(f"{len(ones)} ones exceeds the bound {max_ones}")
    shape = filling.shape
    for size in range(len(ones), 0, -1):
        for subset in combinations(ones, size):
            if is_valid_chain(shape, subset, direction):
                return size
    return 0
