"""Carrying fillings across an adjacent row swap.

A SwapContext fixes a source shape, a row index i, and the swapped target
shape. The two swapped rows are comparable, so the shorter interval (the
overlap) sits inside the longer one; the longer row's extra columns are the
left and right flanks. All maps below keep overlap-column bits at their
absolute positions and differ only in how they treat the flanks and in
corrective moves inside the overlap.

Maps provided, named by behavior (CLI tokens in parentheses):
  swap_filling (f): flank bits travel with the long interval, involution.
  chain_preserving_swap (phi): swap_filling plus a corrective shift of
    overlap bits so the longest ne chain length is preserved.
  coupled_swap (psi): for fillings with row sums at most 1, preserves both
    the ne statistic and the row sum vector up to the swap.
  exchange_overlap: trade the two rows' overlap segments in place.
  reverse_overlap: reverse the order of the occupied overlap columns.
  swap_rows_with_fillings: move both rows wholesale with their bits.
"""

from dataclasses import dataclass

from .chains import NE, max_chain_through, ne
from .fillings import Filling, col_sums, row_sums
from .shapes import (ALMOST_MOON, MOON, Cell, Polyomino, classify,
                     swap_adjacent_rows)


class BijectionError(ValueError):
    pass


class PreconditionViolated(BijectionError):
    pass


class ShapeMismatch(BijectionError):
    pass


class RowSumTooLarge(BijectionError):
    pass


class NotCaseII(BijectionError):
    pass


class InternalAssertionFailed(AssertionError):
    """An identity the maps rely on failed; indicates a bug, not bad input."""


@dataclass(frozen=True)
class SwapContext:
    """Everything fixed by choosing a shape and an adjacent row pair.

    s_row and l_row are the indices of the shorter and longer of rows
    i, i+1 in the source shape (ties pick s_row = i). In the target shape
    the long interval sits at index s_row and the short one at l_row.
    """

    source: Polyomino
    target: Polyomino
    i: int
    s_row: int
    l_row: int
    alpha_cols: tuple[int, ...]
    gamma_cols: tuple[int, ...]
    delta_cols: tuple[int, ...]
    trivial: bool

    @property
    def target_l_row(self) -> int:
        """Index of the long interval inside the target shape."""
        return self.s_row

    @property
    def target_s_row(self) -> int:
        return self.l_row

    def reverse(self) -> "SwapContext":
        return make_swap_context(self.target, self.i)

    def overlap_mask(self) -> int:
        return sum(1 << c for c in self.alpha_cols)

    def flank_mask(self) -> int:
        return sum(1 << c for c in self.gamma_cols + self.delta_cols)


def make_swap_context(shape: Polyomino, i: int) -> SwapContext:
    """Validate that swapping rows i, i+1 keeps the row-swap theory applicable.

    Both the shape and its swap must classify as moon or almost-moon, and any
    exceptional row must be one of the two swapped rows.
    """
    target = swap_adjacent_rows(shape, i)
    for side, name in ((shape, "source"), (target, "target")):
        cls = classify(side)
        if cls.kind not in (MOON, ALMOST_MOON):
            raise PreconditionViolated(f"{name} shape classifies as {cls.kind}")
        if cls.kind == ALMOST_MOON and cls.exceptional_row not in (i, i + 1):
            raise PreconditionViolated(
                f"{name} shape has exceptional row {cls.exceptional_row}, "
                f"not one of the swapped rows {i},{i + 1}")
    a, b = shape.row(i), shape.row(i + 1)
    if a.length <= b.length:
        s_row, l_row = i, i + 1
    else:
        s_row, l_row = i + 1, i
    short, long_ = shape.row(s_row), shape.row(l_row)
    trivial = a.length == b.length
    if trivial and a != b:
        raise InternalAssertionFailed("equal-length comparable rows must coincide")
    return SwapContext(
        source=shape,
        target=target,
        i=i,
        s_row=s_row,
        l_row=l_row,
        alpha_cols=tuple(range(short.start, short.end + 1)),
        gamma_cols=tuple(range(long_.start, short.start)),
        delta_cols=tuple(range(short.end + 1, long_.end + 1)),
        trivial=trivial,
    )


def _require_source(ctx: SwapContext, filling: Filling) -> None:
    if filling.shape != ctx.source:
        raise ShapeMismatch("filling lives on a different shape than the context source")


def swap_filling(ctx: SwapContext, filling: Filling) -> Filling:
    """The basic swap map: overlap bits stay put, flank bits follow the long row.

    An involution with respect to the reversed context; changes the longest
    ne chain length by at most 1.
    """
    _require_source(ctx, filling)
    bits = list(filling.row_bits)
    ov = ctx.overlap_mask()
    fl = ctx.flank_mask()
    s, l = ctx.s_row - 1, ctx.l_row - 1
    bs, bl = bits[s], bits[l]
    bits[s] = (bs & ov) | (bl & fl)
    bits[l] = bl & ov
    return Filling(ctx.target, tuple(bits))


def swap_case(ctx: SwapContext, filling: Filling) -> str:
    """Label I, II or III by how swap_filling moves the ne statistic (0, +1, -1)."""
    k = ne(filling)
    k2 = ne(swap_filling(ctx, filling))
    if k2 == k:
        return "I"
    if k2 == k + 1:
        return "II"
    if k2 == k - 1:
        return "III"
    raise InternalAssertionFailed(f"ne moved from {k} to {k2} under the swap map")


@dataclass(frozen=True)
class ProblemCellReport:
    """Cells forcing the longer chain after the swap map, and where they go."""

    k: int
    problem_cells: frozenset[Cell]
    landing_cells: frozenset[Cell]


def problem_cells(ctx: SwapContext, filling: Filling) -> ProblemCellReport:
    """For a Case II filling, locate the cells that force the longer chain:
    the 1-cells in the image's long row through which a chain of the
    increased length passes. They must all sit in the overlap, and the cells
    directly across in the short row must be empty."""
    _require_source(ctx, filling)
    if swap_case(ctx, filling) != "II":
        raise NotCaseII("problem cells are defined for Case II fillings only")
    k = ne(filling)
    image = swap_filling(ctx, filling)
    long_row = ctx.target_l_row
    short_row = ctx.target_s_row
    iv = image.shape.row(long_row)
    probs = []
    for c in range(iv.start, iv.end + 1):
        if image.get(long_row, c) == 1 and max_chain_through(image, (long_row, c), NE) == k + 1:
            probs.append(c)
    if not probs:
        raise InternalAssertionFailed("Case II image must contain a problem cell")
    alpha = set(ctx.alpha_cols)
    if not all(c in alpha for c in probs):
        raise InternalAssertionFailed("problem cells must lie in the overlap columns")
    for c in probs:
        if image.get(short_row, c) != 0:
            raise InternalAssertionFailed("landing cells must be empty in the image")
    return ProblemCellReport(
        k=k,
        problem_cells=frozenset(Cell(long_row, c) for c in probs),
        landing_cells=frozenset(Cell(short_row, c) for c in probs),
    )


def _shift_problem(image: Filling, report: ProblemCellReport) -> Filling:
    bits = list(image.row_bits)
    for cell in report.problem_cells:
        bits[cell.row - 1] &= ~(1 << cell.col)
    for cell in report.landing_cells:
        bits[cell.row - 1] |= 1 << cell.col
    return Filling(image.shape, tuple(bits))


def chain_preserving_swap(ctx: SwapContext, filling: Filling) -> Filling:
    """The ne-preserving bijection (phi) between the fillings of the two shapes.

    Case I applies swap_filling unchanged; Case II repairs the image by
    dropping the problem cells into the short row; Case III routes through
    the reversed map, whose inner application is guaranteed to be Case II.
    Preserves the ne statistic and every column sum.
    """
    _require_source(ctx, filling)
    if ctx.trivial:
        return Filling(ctx.target, filling.row_bits)
    k = ne(filling)
    image = swap_filling(ctx, filling)
    k2 = ne(image)
    if k2 == k:
        out = image
    elif k2 == k + 1:
        out = _shift_problem(image, problem_cells(ctx, filling))
    else:
        rctx = ctx.reverse()
        if swap_case(rctx, image) != "II":
            raise InternalAssertionFailed("the reversed direction of a Case III filling must be Case II")
        mid = chain_preserving_swap(rctx, image)
        out = swap_filling(ctx, mid)
    if ne(out) != k:
        raise InternalAssertionFailed(f"ne not preserved: {k} became {ne(out)}")
    if col_sums(out) != col_sums(filling):
        raise InternalAssertionFailed("column sums not preserved")
    return out


def exchange_overlap(ctx: SwapContext, filling: Filling, unchecked: bool = False) -> Filling:
    """Trade the two swapped rows' overlap segments; the shape stays the same.

    The checked form requires both swapped rows to carry at most one 1 each.
    unchecked=True skips that gate and performs the same bit exchange."""
    _require_source(ctx, filling)
    s, l = ctx.s_row - 1, ctx.l_row - 1
    bits = list(filling.row_bits)
    if not unchecked:
        for r in (s, l):
            if bits[r].bit_count() > 1:
                raise RowSumTooLarge(f"row {r + 1} holds more than one 1")
    ov = ctx.overlap_mask()
    bs, bl = bits[s], bits[l]
    bits[s] = bl & ov
    bits[l] = (bl & ~ov) | (bs & ov)
    return Filling(ctx.source, tuple(bits))


def reverse_overlap(ctx: SwapContext, filling: Filling) -> Filling:
    """Reverse the left-right order of the occupied overlap columns.

    The two-cell column patterns of the swapped rows move as units onto the
    occupied column positions in reversed order; empty overlap columns stay
    empty. An involution; row sums are always preserved, column sums whenever
    no overlap column carries two 1s."""
    _require_source(ctx, filling)
    s, l = ctx.s_row - 1, ctx.l_row - 1
    bits = list(filling.row_bits)
    bs, bl = bits[s], bits[l]
    ov = ctx.overlap_mask()
    occupied = [c for c in ctx.alpha_cols if ((bs >> c) | (bl >> c)) & 1]
    patterns = [((bs >> c) & 1, (bl >> c) & 1) for c in occupied]
    ns, nl = bs & ~ov, bl & ~ov
    for c, (x, y) in zip(occupied, reversed(patterns)):
        ns |= x << c
        nl |= y << c
    bits[s], bits[l] = ns, nl
    return Filling(ctx.source, tuple(bits))


def swap_rows_with_fillings(ctx: SwapContext, filling: Filling) -> Filling:
    """Exchange rows i and i+1 together with their bits.

    Equals swap_filling composed with the unchecked overlap exchange."""
    _require_source(ctx, filling)
    bits = list(filling.row_bits)
    bits[ctx.i - 1], bits[ctx.i] = bits[ctx.i], bits[ctx.i - 1]
    return Filling(ctx.target, tuple(bits))


def coupled_swap(ctx: SwapContext, filling: Filling) -> Filling:
    """The ne-preserving bijection (psi) for fillings with row sums at most 1.

    Moves whole rows when possible (keeping row sums aligned with the swap)
    and falls back to swap_filling when moving rows would change ne.
    Preserves ne, all column sums, and permutes the row sums by the swap.
    """
    _require_source(ctx, filling)
    if any(b.bit_count() > 1 for b in filling.row_bits):
        raise RowSumTooLarge("the map is defined for fillings with row sums at most 1")
    if ctx.trivial:
        return Filling(ctx.target, filling.row_bits)
    s, l = ctx.s_row - 1, ctx.l_row - 1
    ov = ctx.overlap_mask()
    a_bits = filling.row_bits[s] & ov
    b_bits = filling.row_bits[l] & ov
    moved = swap_rows_with_fillings(ctx, filling)
    if a_bits == 0 or b_bits == 0 or a_bits == b_bits:
        out = moved
    elif ne(filling) == ne(moved):
        out = moved
    else:
        out = swap_filling(ctx, filling)
    k = ne(filling)
    if ne(out) != k:
        raise InternalAssertionFailed(f"ne not preserved: {k} became {ne(out)}")
    if col_sums(out) != col_sums(filling):
        raise InternalAssertionFailed("column sums not preserved")
    want = list(row_sums(filling))
    want[ctx.i - 1], want[ctx.i] = want[ctx.i], want[ctx.i - 1]
    if list(row_sums(out)) != want:
        raise InternalAssertionFailed("row sums not permuted by the swap")
    return out
