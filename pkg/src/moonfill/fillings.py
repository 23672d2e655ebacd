"""0/1 fillings of a shape and constrained enumeration of them.

A filling assigns 0 or 1 to every cell. Internally each row is a bitmask
whose bit c corresponds to column c, so cells keep their absolute column
positions under row operations.
"""

from dataclasses import dataclass
from itertools import combinations, product
from typing import Iterable, Iterator

from .shapes import Cell, Polyomino, mirror_columns, rotate180, transpose


class FillingError(ValueError):
    pass


class CellOutsideShape(FillingError):
    pass


class DimensionMismatch(FillingError):
    pass


@dataclass(frozen=True)
class Filling:
    """A 0/1 assignment on the cells of a fixed shape."""

    shape: Polyomino
    row_bits: tuple[int, ...]

    @property
    def count(self) -> int:
        """Number of 1-cells."""
        return sum(b.bit_count() for b in self.row_bits)

    def get(self, row: int, col: int) -> int:
        if not self.shape.contains(row, col):
            raise CellOutsideShape(f"({row},{col}) is not a cell of the shape")
        return (self.row_bits[row - 1] >> col) & 1

    def ones(self) -> frozenset[Cell]:
        out = []
        for i, bits in enumerate(self.row_bits, start=1):
            b = bits
            while b:
                low = b & -b
                out.append(Cell(i, low.bit_length() - 1))
                b ^= low
        return frozenset(out)

    def ones_sorted(self) -> list[Cell]:
        return sorted(self.ones())


def make_filling(shape: Polyomino, ones: Iterable) -> Filling:
    """Build a filling from its set of 1-cells; duplicates collapse."""
    bits = [0] * shape.row_count
    for item in ones:
        r, c = item
        if not shape.contains(r, c):
            raise CellOutsideShape(f"({r},{c}) is not a cell of the shape")
        bits[r - 1] |= 1 << c
    return Filling(shape, tuple(bits))


def empty_filling(shape: Polyomino) -> Filling:
    return Filling(shape, (0,) * shape.row_count)


def row_sums(f: Filling) -> tuple[int, ...]:
    return tuple(b.bit_count() for b in f.row_bits)


def col_sums(f: Filling) -> tuple[int, ...]:
    """Per-column counts for columns 1..width; untouched columns report 0."""
    w = f.shape.width
    out = [0] * w
    for bits in f.row_bits:
        b = bits
        while b:
            low = b & -b
            out[low.bit_length() - 2] += 1
            b ^= low
    return tuple(out)


# Enumeration constraints. An unsatisfiable constraint yields an empty
# stream rather than an error.

@dataclass(frozen=True)
class All:
    pass


@dataclass(frozen=True)
class TotalOnes:
    n: int


@dataclass(frozen=True)
class ColSums:
    cols: tuple[int, ...]


@dataclass(frozen=True)
class RowColSums:
    rows: tuple[int, ...]
    cols: tuple[int, ...]


@dataclass(frozen=True)
class Restricted:
    """Exactly one 1 in every row and at most one in every column."""
    pass


def _cells_row_major(shape: Polyomino) -> list[Cell]:
    return list(shape.cells())


def _from_cells(shape: Polyomino, cells: Iterable[Cell]) -> Filling:
    bits = [0] * shape.row_count
    for cell in cells:
        bits[cell.row - 1] |= 1 << cell.col
    return Filling(shape, tuple(bits))


def _enumerate_all(shape: Polyomino) -> Iterator[Filling]:
    cells = _cells_row_major(shape)
    n = len(cells)
    for mask in range(1 << n):
        bits = [0] * shape.row_count
        m = mask
        while m:
            low = m & -m
            cell = cells[low.bit_length() - 1]
            bits[cell.row - 1] |= 1 << cell.col
            m ^= low
        yield Filling(shape, tuple(bits))


def _enumerate_total(shape: Polyomino, n: int) -> Iterator[Filling]:
    cells = _cells_row_major(shape)
    if n < 0 or n > len(cells):
        return
    for chosen in combinations(cells, n):
        yield _from_cells(shape, chosen)


def _enumerate_col_sums(shape: Polyomino, cols: tuple[int, ...]) -> Iterator[Filling]:
    if len(cols) != shape.width:
        raise DimensionMismatch(
            f"column sum vector has {len(cols)} entries, shape has {shape.width} columns")
    per_col = []
    for c, want in enumerate(cols, start=1):
        rows_here = [i for i in range(1, shape.row_count + 1) if shape.rows[i - 1].contains(c)]
        if want < 0 or want > len(rows_here):
            return
        per_col.append([frozenset((r, c) for r in pick) for pick in combinations(rows_here, want)])
    for combo in product(*per_col):
        yield make_filling(shape, frozenset().union(*combo) if combo else frozenset())


def _enumerate_row_col_sums(shape: Polyomino, rows: tuple[int, ...],
                            cols: tuple[int, ...]) -> Iterator[Filling]:
    k, w = shape.row_count, shape.width
    if len(rows) != k:
        raise DimensionMismatch(f"row sum vector has {len(rows)} entries, shape has {k} rows")
    if len(cols) != w:
        raise DimensionMismatch(f"column sum vector has {len(cols)} entries, shape has {w} columns")
    if any(r < 0 for r in rows) or any(c < 0 for c in cols) or sum(rows) != sum(cols):
        return
    # rows remaining that can still serve column c, for pruning
    coverage = [sum(1 for i in range(k) if shape.rows[i].contains(c + 1)) for c in range(w)]
    need = list(cols)
    bits: list[int] = []

    def feasible(depth: int) -> bool:
        for c in range(w):
            left = sum(1 for i in range(depth, k) if shape.rows[i].contains(c + 1))
            if need[c] > left:
                return False
        return True

    def rec(depth: int) -> Iterator[Filling]:
        if depth == k:
            if all(x == 0 for x in need):
                yield Filling(shape, tuple(bits))
            return
        iv = shape.rows[depth]
        candidates = [c for c in range(iv.start, iv.end + 1) if need[c - 1] > 0]
        if rows[depth] > len(candidates):
            return
        for chosen in combinations(candidates, rows[depth]):
            for c in chosen:
                need[c - 1] -= 1
            if feasible(depth + 1):
                bits.append(sum(1 << c for c in chosen))
                yield from rec(depth + 1)
                bits.pop()
            for c in chosen:
                need[c - 1] += 1

    yield from rec(0)


def enumerate_fillings(shape: Polyomino, constraint=All()) -> Iterator[Filling]:
    """Stream the fillings of a shape matching the constraint, in a fixed order.

    The order is deterministic per constraint kind: All counts through cell
    subsets in row-major bit order; the others are row-major lexicographic.
    """
    if isinstance(constraint, All):
        return _enumerate_all(shape)
    if isinstance(constraint, TotalOnes):
        return _enumerate_total(shape, constraint.n)
    if isinstance(constraint, ColSums):
        return _enumerate_col_sums(shape, tuple(constraint.cols))
    if isinstance(constraint, RowColSums):
        return _enumerate_row_col_sums(shape, tuple(constraint.rows), tuple(constraint.cols))
    if isinstance(constraint, Restricted):
        return _enumerate_restricted(shape)
    raise TypeError(f"unknown constraint {constraint!r}")


def _enumerate_restricted(shape: Polyomino) -> Iterator[Filling]:
    # row sums all 1, column sums at most 1: pick one free column per row
    k = shape.row_count
    used: set[int] = set()
    bits: list[int] = []

    def rec(depth: int) -> Iterator[Filling]:
        if depth == k:
            yield Filling(shape, tuple(bits))
            return
        iv = shape.rows[depth]
        for c in range(iv.start, iv.end + 1):
            if c in used:
                continue
            used.add(c)
            bits.append(1 << c)
            yield from rec(depth + 1)
            bits.pop()
            used.remove(c)

    yield from rec(0)


def mirror_lr(f: Filling) -> Filling:
    """Filling on the left-right mirrored shape, cells carried along."""
    shape = f.shape
    w = shape.width
    # mirrored min start is w+1-max(end) = 1, so no extra shift is needed
    target = mirror_columns(shape)
    return make_filling(target, [(r, w + 1 - c) for r, c in f.ones()])


def rotate180_filling(f: Filling) -> Filling:
    """Filling on the half-turned shape, cells carried along."""
    shape = f.shape
    k, w = shape.row_count, shape.width
    target = rotate180(shape)
    return make_filling(target, [(k + 1 - r, w + 1 - c) for r, c in f.ones()])


def transpose_filling(f: Filling) -> Filling:
    """Filling on the transposed shape, cells carried along."""
    shape = f.shape
    target = transpose(shape)
    lo = shape.min_col
    return make_filling(target, [(c - lo + 1, r) for r, c in f.ones()])
