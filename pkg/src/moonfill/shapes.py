"""Row-convex polyomino shapes given as one column interval per row.

Rows are indexed 1..k top to bottom, columns 1..width left to right.
A shape is a tuple of closed column intervals, one per row.
"""

from dataclasses import dataclass
from itertools import combinations
from typing import Iterable, Iterator


class ShapeError(ValueError):
    pass


class EmptyShape(ShapeError):
    pass


class EmptyRow(ShapeError):
    pass


class NonPositiveBound(ShapeError):
    pass


class IndexOutOfRange(ShapeError):
    pass


class NotColumnConvex(ShapeError):
    pass


@dataclass(frozen=True, order=True)
class Cell:
    """One unit square, addressed (row, col), both 1-based."""

    row: int
    col: int

    def __iter__(self):
        return iter((self.row, self.col))


@dataclass(frozen=True, order=True)
class RowInterval:
    """Closed column interval [start, end] occupied by one row."""

    start: int
    end: int

    @property
    def length(self) -> int:
        return self.end - self.start + 1

    def contains(self, col: int) -> bool:
        return self.start <= col <= self.end

    def as_tuple(self) -> tuple[int, int]:
        return (self.start, self.end)


@dataclass(frozen=True)
class Polyomino:
    """Row-convex shape: one interval per row, rows top to bottom."""

    rows: tuple[RowInterval, ...]

    @property
    def row_count(self) -> int:
        return len(self.rows)

    @property
    def width(self) -> int:
        return max(r.end for r in self.rows)

    @property
    def min_col(self) -> int:
        return min(r.start for r in self.rows)

    @property
    def cell_count(self) -> int:
        return sum(r.length for r in self.rows)

    def row(self, i: int) -> RowInterval:
        if not 1 <= i <= len(self.rows):
            raise IndexOutOfRange(f"row index {i} outside 1..{len(self.rows)}")
        return self.rows[i - 1]

    def contains(self, row: int, col: int) -> bool:
        return 1 <= row <= len(self.rows) and self.rows[row - 1].contains(col)

    def cells(self) -> Iterator[Cell]:
        """All cells in row-major order (row ascending, col ascending)."""
        for i, r in enumerate(self.rows, start=1):
            for c in range(r.start, r.end + 1):
                yield Cell(i, c)

    def row_lengths(self) -> tuple[int, ...]:
        return tuple(r.length for r in self.rows)

    def interval_tuples(self) -> tuple[tuple[int, int], ...]:
        return tuple(r.as_tuple() for r in self.rows)


def build_polyomino(intervals: Iterable[tuple[int, int]]) -> Polyomino:
    """Validate and build a shape from (start_col, end_col) pairs, top row first."""
    rows = []
    items = list(intervals)
    if not items:
        raise EmptyShape("a shape needs at least one row")
    for i, item in enumerate(items, start=1):
        if isinstance(item, RowInterval):
            s, e = item.start, item.end
        else:
            s, e = item
        if s < 1:
            raise NonPositiveBound(f"row {i}: start column {s} must be >= 1")
        if e < s:
            raise EmptyRow(f"row {i}: end column {e} precedes start column {s}")
        rows.append(RowInterval(int(s), int(e)))
    return Polyomino(tuple(rows))


@dataclass(frozen=True)
class ShapeClass:
    """Classification result; exceptional_row is set only for kind 'almost-moon'."""

    kind: str
    exceptional_row: int | None = None


MOON = "moon"
ALMOST_MOON = "almost-moon"
ROW_COMPARABLE = "row-comparable"
GENERAL = "general"


def _nested(a: RowInterval, b: RowInterval) -> bool:
    return (a.start <= b.start and a.end >= b.end) or (b.start <= a.start and b.end >= a.end)


def rows_comparable(shape: Polyomino) -> bool:
    """True when every pair of row intervals is nested one way or the other."""
    return all(_nested(a, b) for a, b in combinations(shape.rows, 2))


def exceptional_rows(shape: Polyomino) -> set[int]:
    """Rows with a strictly longer row somewhere above and somewhere below."""
    lengths = shape.row_lengths()
    out = set()
    for i, l in enumerate(lengths):
        if any(x > l for x in lengths[:i]) and any(x > l for x in lengths[i + 1:]):
            out.add(i + 1)
    return out


def is_column_convex(shape: Polyomino) -> bool:
    """True when the occupied rows of every column form a contiguous block."""
    for c in range(1, shape.width + 1):
        hit = [i for i in range(1, shape.row_count + 1) if shape.rows[i - 1].contains(c)]
        if hit and hit[-1] - hit[0] + 1 != len(hit):
            return False
    return True


def classify(shape: Polyomino) -> ShapeClass:
    """Bucket a shape by row comparability and its number of exceptional rows."""
    if not rows_comparable(shape):
        return ShapeClass(GENERAL)
    exc = exceptional_rows(shape)
    if not exc:
        return ShapeClass(MOON)
    if len(exc) == 1:
        return ShapeClass(ALMOST_MOON, exceptional_row=next(iter(exc)))
    return ShapeClass(ROW_COMPARABLE)


def swap_adjacent_rows(shape: Polyomino, i: int) -> Polyomino:
    """New shape with rows i and i+1 exchanged (1-based, i+1 must exist)."""
    if not 1 <= i <= shape.row_count - 1:
        raise IndexOutOfRange(f"swap index {i} outside 1..{shape.row_count - 1}")
    rows = list(shape.rows)
    rows[i - 1], rows[i] = rows[i], rows[i - 1]
    return Polyomino(tuple(rows))


def _normalize(rows: list[tuple[int, int]]) -> Polyomino:
    shift = min(s for s, _ in rows) - 1
    return Polyomino(tuple(RowInterval(s - shift, e - shift) for s, e in rows))


def rotate180(shape: Polyomino) -> Polyomino:
    """Half-turn: reverse the row order and mirror columns, then shift to column 1."""
    w = shape.width
    flipped = [(w + 1 - r.end, w + 1 - r.start) for r in reversed(shape.rows)]
    return _normalize(flipped)


def mirror_columns(shape: Polyomino) -> Polyomino:
    """Left-right mirror within the bounding box, shifted to start at column 1."""
    w = shape.width
    return _normalize([(w + 1 - r.end, w + 1 - r.start) for r in shape.rows])


def transpose(shape: Polyomino) -> Polyomino:
    """Exchange rows and columns; requires a column-convex shape.

    The nonempty columns must also form one contiguous block, otherwise the
    result would contain an empty row.
    """
    if not is_column_convex(shape):
        raise NotColumnConvex("transpose needs contiguous cells in every column")
    lo = shape.min_col
    hi = shape.width
    rows = []
    for c in range(lo, hi + 1):
        hit = [i for i in range(1, shape.row_count + 1) if shape.rows[i - 1].contains(c)]
        if not hit:
            raise NotColumnConvex(f"column {c} is empty inside the occupied column range")
        rows.append((hit[0], hit[-1]))
    return Polyomino(tuple(RowInterval(s, e) for s, e in rows))


def column_strip(shape: Polyomino, r: int) -> frozenset[Cell]:
    """All cells of the shape lying in the columns spanned by row r."""
    iv = shape.row(r)
    out = []
    for i in range(1, shape.row_count + 1):
        other = shape.rows[i - 1]
        for c in range(max(iv.start, other.start), min(iv.end, other.end) + 1):
            out.append(Cell(i, c))
    return frozenset(out)


def column_heights(shape: Polyomino) -> tuple[int, ...]:
    """Number of cells in each column 1..width (0 for untouched columns)."""
    out = [0] * shape.width
    for r in shape.rows:
        for c in range(r.start, r.end + 1):
            out[c - 1] += 1
    return tuple(out)


def ferrers_from_heights(heights: Iterable[int]) -> Polyomino:
    """Canonical top-left-justified shape whose column heights are the given
    multiset sorted in decreasing order. Zero heights are dropped."""
    hs = sorted((h for h in heights if h > 0), reverse=True)
    if not hs:
        raise EmptyShape("no positive column heights")
    k = hs[0]
    rows = []
    for r in range(1, k + 1):
        length = sum(1 for h in hs if h >= r)
        rows.append(RowInterval(1, length))
    return Polyomino(tuple(rows))


def _all_intervals(max_cols: int) -> list[RowInterval]:
    return [RowInterval(a, b) for a in range(1, max_cols + 1) for b in range(a, max_cols + 1)]


def comparable_shapes(max_rows: int, max_cols: int) -> Iterator[Polyomino]:
    """Every shape with pairwise nested rows inside a max_rows x max_cols box.

    Ordered by row count, then lexicographically by the interval list.
    Column-shifted copies of the same geometry are distinct entries.
    """
    if max_rows < 1 or max_cols < 1:
        raise NonPositiveBound("box bounds must be positive")
    ivs = _all_intervals(max_cols)

    def extend(prefix: list[RowInterval], depth: int) -> Iterator[tuple[RowInterval, ...]]:
        if depth == 0:
            yield tuple(prefix)
            return
        for iv in ivs:
            if all(_nested(iv, p) for p in set(prefix)):
                prefix.append(iv)
                yield from extend(prefix, depth - 1)
                prefix.pop()

    for k in range(1, max_rows + 1):
        for rows in extend([], k):
            yield Polyomino(rows)
