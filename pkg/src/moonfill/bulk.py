"""Vectorized whole-family checks over every filling of one shape.

Fillings of a shape with n cells are integer masks over the row-major cell
list (bit p <-> cell p), matching the order of enumerate_fillings(All()).
Arrays indexed by mask hold per-filling values; maps between fillings of two
shapes become integer permutation arrays. The chain search is the same
column-span scan as the per-filling code, evaluated for every mask at once.
"""

from itertools import combinations

import numpy as np

from .bijections import (InternalAssertionFailed, SwapContext, make_swap_context)
from .chains import NE, SE
from .distributions import Report, SwapSequence
from .fillings import Filling
from .shapes import Cell, Polyomino, column_heights, ferrers_from_heights, rotate180

MAX_CELLS = 22


class TooManyCells(ValueError):
    pass


class ShapeTable:
    """Per-shape arrays over all 2**n fillings."""

    def __init__(self, shape: Polyomino):
        self.shape = shape
        self.cells: list[Cell] = list(shape.cells())
        self.n = len(self.cells)
        if self.n > MAX_CELLS:
            raise TooManyCells(
                f"shape has {self.n} cells; exhaustive arrays support at most {MAX_CELLS}")
        self.index = {(c.row, c.col): p for p, c in enumerate(self.cells)}
        self.total = 1 << self.n
        self.masks = np.arange(self.total, dtype=np.int64)
        self._bits: dict[int, np.ndarray] = {}
        self._chain: dict[str, np.ndarray] = {}
        self._spans: list[tuple[int, ...]] | None = None
        self._pop = None
        self._colsig = None
        self._rowsig = None
        self._rows_le1 = None

    # ---- basic arrays ----

    def bit(self, p: int) -> np.ndarray:
        got = self._bits.get(p)
        if got is None:
            got = ((self.masks >> p) & 1).astype(np.int8)
            self._bits[p] = got
        return got

    def pop(self) -> np.ndarray:
        if self._pop is None:
            out = np.zeros(self.total, np.int8)
            for p in range(self.n):
                out += self.bit(p)
            self._pop = out
        return self._pop

    def colsig(self) -> np.ndarray:
        """Column sums packed 4 bits per column (column 1 in the low bits)."""
        if self._colsig is None:
            if self.shape.width > 15 or self.shape.row_count > 15:
                raise TooManyCells("packed signatures support at most 15 rows and columns")
            out = np.zeros(self.total, np.int64)
            for p, cell in enumerate(self.cells):
                out += self.bit(p).astype(np.int64) << (4 * (cell.col - 1))
            self._colsig = out
        return self._colsig

    def rowsig(self) -> np.ndarray:
        """Row sums packed 4 bits per row (row 1 in the low bits)."""
        if self._rowsig is None:
            if self.shape.width > 15 or self.shape.row_count > 15:
                raise TooManyCells("packed signatures support at most 15 rows and columns")
            out = np.zeros(self.total, np.int64)
            for p, cell in enumerate(self.cells):
                out += self.bit(p).astype(np.int64) << (4 * (cell.row - 1))
            self._rowsig = out
        return self._rowsig

    def row_cell_mask(self, r: int) -> int:
        iv = self.shape.row(r)
        return sum(1 << self.index[(r, c)] for c in range(iv.start, iv.end + 1))

    def rows_le1(self) -> np.ndarray:
        """Boolean: every row holds at most one 1."""
        if self._rows_le1 is None:
            ok = np.ones(self.total, bool)
            for r in range(1, self.shape.row_count + 1):
                t = self.masks & self.row_cell_mask(r)
                ok &= (t & (t - 1)) == 0
            self._rows_le1 = ok
        return self._rows_le1

    def rows_selected_le1(self, rows: tuple[int, ...]) -> np.ndarray:
        ok = np.ones(self.total, bool)
        for r in rows:
            t = self.masks & self.row_cell_mask(r)
            ok &= (t & (t - 1)) == 0
        return ok

    # ---- conversions ----

    def mask_of(self, filling: Filling) -> int:
        m = 0
        for p, cell in enumerate(self.cells):
            m |= ((filling.row_bits[cell.row - 1] >> cell.col) & 1) << p
        return m

    def filling_of(self, mask: int) -> Filling:
        bits = [0] * self.shape.row_count
        m = int(mask)
        while m:
            low = m & -m
            cell = self.cells[low.bit_length() - 1]
            bits[cell.row - 1] |= 1 << cell.col
            m ^= low
        return Filling(self.shape, tuple(bits))

    # ---- chain statistics ----

    def eligible_sets(self) -> list[tuple[int, ...]]:
        """Distinct cell-index sets eligible for one column span: the cells in
        columns [a, b] whose row interval covers all of [a, b]."""
        if self._spans is None:
            shape = self.shape
            seen = set()
            out = []
            for a in range(1, shape.width + 1):
                for b in range(a, shape.width + 1):
                    rows_ok = {
                        r for r in range(1, shape.row_count + 1)
                        if shape.rows[r - 1].start <= a and shape.rows[r - 1].end >= b}
                    ids = tuple(
                        p for p, cell in enumerate(self.cells)
                        if cell.row in rows_ok and a <= cell.col <= b)
                    if ids and ids not in seen:
                        seen.add(ids)
                        out.append(ids)
            self._spans = out
        return self._spans

    def _pass(self, ids: tuple[int, ...], direction: str, reverse_cols: bool,
              collect: set[int]) -> tuple[np.ndarray, dict[int, np.ndarray]]:
        """One dominance DP over the span's cells for every mask at once.

        Forward (reverse_cols=False) yields the longest chain ending at each
        cell; the reversed pass yields the longest chain starting there.
        """
        k = self.shape.row_count
        zeros = np.zeros(self.total, np.int8)
        per_row: list[np.ndarray] = [zeros] * (k + 2)
        best = zeros
        out: dict[int, np.ndarray] = {}
        suffix = (direction == NE) ^ reverse_cols
        by_col: dict[int, list[int]] = {}
        for p in ids:
            by_col.setdefault(self.cells[p].col, []).append(p)
        for col in sorted(by_col, reverse=reverse_cols):
            group = by_col[col]
            agg: list[np.ndarray] = [zeros] * (k + 2)
            if suffix:
                for r in range(k, 0, -1):
                    agg[r] = np.maximum(per_row[r + 1], agg[r + 1])
            else:
                for r in range(2, k + 1):
                    agg[r] = np.maximum(per_row[r - 1], agg[r - 1])
            fresh = []
            for p in group:
                r = self.cells[p].row
                vals = (agg[r] + np.int8(1)) * self.bit(p)
                best = np.maximum(best, vals)
                if p in collect:
                    out[p] = vals
                fresh.append((r, vals))
            for r, vals in fresh:
                per_row[r] = np.maximum(per_row[r], vals)
        return best, out

    def chain_array(self, direction: str) -> np.ndarray:
        """Longest chain length per mask."""
        got = self._chain.get(direction)
        if got is None:
            got = np.zeros(self.total, np.int8)
            for ids in self.eligible_sets():
                best, _ = self._pass(ids, direction, False, set())
                np.maximum(got, best, out=got)
            self._chain[direction] = got
        return got

    def thru_arrays(self, direction: str, cell_ids: tuple[int, ...]) -> dict[int, np.ndarray]:
        """Longest chain through each requested cell, per mask (0 where the
        cell holds no 1). Not cached; cost is a few span scans."""
        want = set(cell_ids)
        out = {p: np.zeros(self.total, np.int8) for p in want}
        for ids in self.eligible_sets():
            here = want.intersection(ids)
            if not here:
                continue
            _, ends = self._pass(ids, direction, False, here)
            _, starts = self._pass(ids, direction, True, here)
            for p in here:
                thru = (ends[p] + starts[p] - np.int8(1)) * self.bit(p)
                np.maximum(out[p], thru, out=out[p])
        return out


class Engine:
    """Cache of ShapeTables keyed by the interval list."""

    def __init__(self):
        self._tables: dict[tuple, ShapeTable] = {}

    def table(self, shape: Polyomino) -> ShapeTable:
        key = shape.interval_tuples()
        got = self._tables.get(key)
        if got is None:
            got = ShapeTable(shape)
            self._tables[key] = got
        return got


# ---- permutations realizing the maps ----

def f_perm(ta: ShapeTable, tb: ShapeTable, ctx: SwapContext) -> np.ndarray:
    """swap_filling as a source-mask -> target-mask array."""
    flank = set(ctx.gamma_cols + ctx.delta_cols)
    out = np.zeros(ta.total, np.int64)
    for p, cell in enumerate(ta.cells):
        r, c = cell.row, cell.col
        if r == ctx.l_row and c in flank:
            q = tb.index[(ctx.target_l_row, c)]
        else:
            q = tb.index[(r, c)]
        out += ta.bit(p).astype(np.int64) << q
    return out


def exchange_perm(ta: ShapeTable, ctx: SwapContext) -> np.ndarray:
    """Unchecked exchange_overlap as a mask -> mask array on the source."""
    alpha = set(ctx.alpha_cols)
    out = np.zeros(ta.total, np.int64)
    for p, cell in enumerate(ta.cells):
        r, c = cell.row, cell.col
        if c in alpha and r == ctx.s_row:
            q = ta.index[(ctx.l_row, c)]
        elif c in alpha and r == ctx.l_row:
            q = ta.index[(ctx.s_row, c)]
        else:
            q = p
        out += ta.bit(p).astype(np.int64) << q
    return out


def swap_rows_perm(ta: ShapeTable, tb: ShapeTable, ctx: SwapContext) -> np.ndarray:
    """swap_rows_with_fillings as a source-mask -> target-mask array."""
    out = np.zeros(ta.total, np.int64)
    for p, cell in enumerate(ta.cells):
        r, c = cell.row, cell.col
        if r == ctx.i:
            q = tb.index[(ctx.i + 1, c)]
        elif r == ctx.i + 1:
            q = tb.index[(ctx.i, c)]
        else:
            q = tb.index[(r, c)]
        out += ta.bit(p).astype(np.int64) << q
    return out


def _problem_shift(table: ShapeTable, masks_vec: np.ndarray, k_vec: np.ndarray,
                   long_row: int, short_row: int, alpha: set[int]) -> np.ndarray:
    """XOR-masks moving the problem cells of each filling from the long row
    into the short row. k_vec holds the chain length each filled image must
    come down to plus one (the current, too-long value)."""
    iv = table.shape.row(long_row)
    cell_ids = tuple(table.index[(long_row, c)] for c in range(iv.start, iv.end + 1))
    thru = table.thru_arrays(NE, cell_ids)
    move = np.zeros(masks_vec.size, np.int64)
    count = np.zeros(masks_vec.size, np.int16)
    for c in range(iv.start, iv.end + 1):
        pl = table.index[(long_row, c)]
        isp = (table.bit(pl)[masks_vec] == 1) & (thru[pl][masks_vec] == k_vec)
        if c in alpha:
            ps = table.index[(short_row, c)]
            if np.any(isp & (table.bit(ps)[masks_vec] == 1)):
                raise InternalAssertionFailed("a landing cell is occupied")
            move |= np.where(isp, np.int64((1 << pl) | (1 << ps)), np.int64(0))
            count += isp
        else:
            if np.any(isp):
                raise InternalAssertionFailed("a problem cell sits outside the overlap")
    if np.any(count == 0):
        raise InternalAssertionFailed("no problem cell found for a raised-ne filling")
    return move


def phi_perm(ta: ShapeTable, tb: ShapeTable, ctx: SwapContext,
             fab: np.ndarray | None = None) -> np.ndarray:
    """chain_preserving_swap as a source-mask -> target-mask array, with the
    identities it relies on asserted along the way."""
    if fab is None:
        fab = f_perm(ta, tb, ctx)
    if ctx.trivial:
        if not np.array_equal(fab, ta.masks):
            raise InternalAssertionFailed("trivial swap must leave masks unchanged")
        return fab
    ne_a = ta.chain_array(NE)
    ne_b = tb.chain_array(NE)
    d = ne_b[fab].astype(np.int16) - ne_a
    phi = fab.copy()

    raised = np.nonzero(d == 1)[0]
    if raised.size:
        x = fab[raised]
        kplus = (ne_a[raised] + 1).astype(np.int8)
        alpha = set(ctx.alpha_cols)
        move = _problem_shift(tb, x, kplus, ctx.target_l_row, ctx.target_s_row, alpha)
        newx = x ^ move
        if np.any(ne_b[newx] != kplus - 1):
            raise InternalAssertionFailed("problem shift failed to lower ne")
        phi[raised] = newx

    lowered = np.nonzero(d == -1)[0]
    if lowered.size:
        m = lowered.astype(np.int64)
        k = ne_a[lowered].astype(np.int8)
        alpha = set(ctx.alpha_cols)
        move = _problem_shift(ta, m, k, ctx.l_row, ctx.s_row, alpha)
        newm = m ^ move
        if np.any(ne_a[newm] != k - 1):
            raise InternalAssertionFailed("problem shift failed to lower ne")
        phi[lowered] = fab[newm]

    if np.any(ne_b[phi] != ne_a):
        raise InternalAssertionFailed("ne not preserved across the swap")
    if np.any(tb.colsig()[phi] != ta.colsig()):
        raise InternalAssertionFailed("column sums not preserved across the swap")
    if not np.array_equal(np.sort(phi), tb.masks):
        raise InternalAssertionFailed("the map is not a bijection onto the target fillings")
    return phi


def psi_perm(ta: ShapeTable, tb: ShapeTable, ctx: SwapContext,
             fab: np.ndarray | None = None) -> np.ndarray:
    """coupled_swap on the row-sums-at-most-1 domain, as a full-length array
    holding -1 outside the domain."""
    if fab is None:
        fab = f_perm(ta, tb, ctx)
    sel = ta.rows_le1()
    m = np.nonzero(sel)[0].astype(np.int64)
    out = np.full(ta.total, -1, np.int64)
    if ctx.trivial:
        out[m] = m
        return out
    sw = swap_rows_perm(ta, tb, ctx)
    s_row, l_row = ctx.s_row, ctx.l_row
    a_val = np.zeros(m.size, np.int64)
    b_val = np.zeros(m.size, np.int64)
    same_col = np.zeros(m.size, bool)
    for c in ctx.alpha_cols:
        ps = ta.index[(s_row, c)]
        pl = ta.index[(l_row, c)]
        bs = ta.bit(ps)[m]
        bl = ta.bit(pl)[m]
        a_val += bs
        b_val += bl
        same_col |= (bs & bl) == 1
    ne_a = ta.chain_array(NE)
    ne_b = tb.chain_array(NE)
    moved = sw[m]
    keep_rows = (a_val == 0) | (b_val == 0) | same_col | (ne_b[moved] == ne_a[m])
    out[m] = np.where(keep_rows, moved, fab[m])
    # the fallback branch must itself preserve ne
    if np.any(ne_b[out[m]] != ne_a[m]):
        raise InternalAssertionFailed("ne not preserved on the sparse domain")
    return out


# ---- property check drivers (each returns a Report) ----

def _witnesses(table: ShapeTable, masks: np.ndarray, limit: int = 1) -> tuple[Filling, ...]:
    return tuple(table.filling_of(int(m)) for m in masks[:limit])


def _class_filter(table: ShapeTable, col_sums: tuple[int, ...] | None,
                  max_ones: int | None) -> np.ndarray:
    sel = np.ones(table.total, bool)
    if col_sums is not None:
        if len(col_sums) != table.shape.width:
            raise ValueError(
                f"column sum vector has {len(col_sums)} entries, "
                f"shape has {table.shape.width} columns")
        packed = 0
        for j, c in enumerate(col_sums):
            packed |= int(c) << (4 * j)
        sel &= table.colsig() == packed
    if max_ones is not None:
        sel &= table.pop() <= max_ones
    return sel


def check_involution(eng: Engine, shape: Polyomino, i: int,
                     col_sums=None, max_ones=None) -> Report:
    ctx = make_swap_context(shape, i)
    ta, tb = eng.table(ctx.source), eng.table(ctx.target)
    fab = f_perm(ta, tb, ctx)
    fba = f_perm(tb, ta, ctx.reverse())
    sel = _class_filter(ta, col_sums, max_ones)
    idx = np.nonzero(sel)[0]
    bad = idx[fba[fab[idx]] != idx]
    return Report(
        passed=bad.size == 0,
        prop="f-involution",
        details=f"checked {idx.size} fillings across swap {i}; {bad.size} violations",
        witnesses=_witnesses(ta, bad))


def check_delta_bound(eng: Engine, shape: Polyomino, i: int,
                      col_sums=None, max_ones=None) -> Report:
    ctx = make_swap_context(shape, i)
    ta, tb = eng.table(ctx.source), eng.table(ctx.target)
    fab = f_perm(ta, tb, ctx)
    d = tb.chain_array(NE)[fab].astype(np.int16) - ta.chain_array(NE)
    sel = _class_filter(ta, col_sums, max_ones)
    idx = np.nonzero(sel)[0]
    bad = idx[np.abs(d[idx]) > 1]
    return Report(
        passed=bad.size == 0,
        prop="delta-ne-bound",
        details=f"checked {idx.size} fillings across swap {i}; {bad.size} violations",
        witnesses=_witnesses(ta, bad))


def check_theorem1(eng: Engine, shape: Polyomino, i: int,
                   col_sums=None, max_ones=None) -> Report:
    """The ne-preserving bijection bundle for one swap: involution of the base
    map, the one-step ne bound, ne and column sum preservation, the two
    directions composing to the identity, and consistent case labels."""
    ctx = make_swap_context(shape, i)
    ta, tb = eng.table(ctx.source), eng.table(ctx.target)
    fab = f_perm(ta, tb, ctx)
    fba = f_perm(tb, ta, ctx.reverse())
    sel = _class_filter(ta, col_sums, max_ones)
    idx = np.nonzero(sel)[0]
    problems = []
    bad = idx[fba[fab[idx]] != idx]
    if bad.size:
        problems.append(("involution", bad))
    d_ab = tb.chain_array(NE)[fab].astype(np.int16) - ta.chain_array(NE)
    d_ba = ta.chain_array(NE)[fba].astype(np.int16) - tb.chain_array(NE)
    bad = idx[np.abs(d_ab[idx]) > 1]
    if bad.size:
        problems.append(("delta-bound", bad))
    bad = idx[d_ba[fab[idx]] != -d_ab[idx]]
    if bad.size:
        problems.append(("case-partition", bad))
    try:
        phi_ab = phi_perm(ta, tb, ctx, fab)
        phi_ba = phi_perm(tb, ta, ctx.reverse(), fba)
    except InternalAssertionFailed as exc:
        return Report(False, "theorem1", f"internal identity failed: {exc}")
    bad = idx[phi_ba[phi_ab[idx]] != idx]
    if bad.size:
        problems.append(("inverse", bad))
    bad = idx[tb.chain_array(NE)[phi_ab[idx]] != ta.chain_array(NE)[idx]]
    if bad.size:
        problems.append(("ne-preservation", bad))
    bad = idx[tb.colsig()[phi_ab[idx]] != ta.colsig()[idx]]
    if bad.size:
        problems.append(("column-sums", bad))
    if col_sums is not None or max_ones is not None:
        selB = _class_filter(tb, col_sums, max_ones)
        if not np.array_equal(np.sort(phi_ab[idx]), np.nonzero(selB)[0]):
            problems.append(("class-bijection", idx[:1]))
    if problems:
        name, bad = problems[0]
        return Report(False, "theorem1",
                      f"{name} failed on {bad.size} of {idx.size} fillings (swap {i})",
                      _witnesses(ta, bad))
    return Report(True, "theorem1",
                  f"checked {idx.size} fillings across swap {i}; all identities hold")


def check_coupling_lemma(eng: Engine, shape: Polyomino, i: int, max_ones=None) -> Report:
    """Multiset identity {ne(M), ne(M')} == {ne(N), ne(N')} whenever the two
    swapped rows each hold at most one 1."""
    ctx = make_swap_context(shape, i)
    ta, tb = eng.table(ctx.source), eng.table(ctx.target)
    fab = f_perm(ta, tb, ctx)
    cp = exchange_perm(ta, ctx)
    sw = swap_rows_perm(ta, tb, ctx)
    if not np.array_equal(fab[cp], sw):
        raise InternalAssertionFailed("row carry must equal exchange followed by the swap map")
    sel = ta.rows_selected_le1((ctx.i, ctx.i + 1))
    if max_ones is not None:
        sel &= ta.pop() <= max_ones
    m = np.nonzero(sel)[0]
    ne_a = ta.chain_array(NE)
    ne_b = tb.chain_array(NE)
    u1, u2 = ne_a[m], ne_a[cp[m]]
    v1, v2 = ne_b[fab[cp[m]]], ne_b[fab[m]]
    ok = (np.minimum(u1, u2) == np.minimum(v1, v2)) & (np.maximum(u1, u2) == np.maximum(v1, v2))
    bad = m[~ok]
    return Report(
        passed=bad.size == 0,
        prop="coupling-lemma",
        details=f"checked {m.size} fillings with swapped-row sums <= 1 (swap {i}); "
                f"{bad.size} violations",
        witnesses=_witnesses(ta, bad))


def check_theorem2(eng: Engine, shape: Polyomino, i: int, max_ones=None) -> Report:
    """The sparse-domain bijection bundle: ne, column sums, row sums permuted
    by the swap, bijectivity onto the target domain, and the two directions
    composing to the identity."""
    ctx = make_swap_context(shape, i)
    ta, tb = eng.table(ctx.source), eng.table(ctx.target)
    try:
        psi_ab = psi_perm(ta, tb, ctx)
        psi_ba = psi_perm(tb, ta, ctx.reverse())
    except InternalAssertionFailed as exc:
        return Report(False, "theorem2", f"internal identity failed: {exc}")
    sel = ta.rows_le1()
    if max_ones is not None:
        sel &= ta.pop() <= max_ones
    m = np.nonzero(sel)[0]
    img = psi_ab[m]
    problems = []
    bad = m[tb.chain_array(NE)[img] != ta.chain_array(NE)[m]]
    if bad.size:
        problems.append(("ne-preservation", bad))
    bad = m[tb.colsig()[img] != ta.colsig()[m]]
    if bad.size:
        problems.append(("column-sums", bad))
    swapped_rowsig = _swap_rowsig(ta.rowsig()[m], ctx.i)
    bad = m[tb.rowsig()[img] != swapped_rowsig]
    if bad.size:
        problems.append(("row-sums", bad))
    if max_ones is None:
        target_domain = np.nonzero(tb.rows_le1())[0]
        if not np.array_equal(np.sort(img), target_domain):
            problems.append(("bijection", m[:1]))
    bad = m[psi_ba[img] != m]
    if bad.size:
        problems.append(("inverse", bad))
    if problems:
        name, bad = problems[0]
        return Report(False, "theorem2",
                      f"{name} failed on {bad.size} of {m.size} sparse fillings (swap {i})",
                      _witnesses(ta, bad))
    return Report(True, "theorem2",
                  f"checked {m.size} sparse fillings across swap {i}; all identities hold")


def _swap_rowsig(sig: np.ndarray, i: int) -> np.ndarray:
    lo = 4 * (i - 1)
    hi = 4 * i
    a = (sig >> lo) & 15
    b = (sig >> hi) & 15
    return sig - (a << lo) - (b << hi) + (b << lo) + (a << hi)


def _permute_rowsig(sig: np.ndarray, row_order: tuple[int, ...]) -> np.ndarray:
    out = np.zeros_like(sig)
    for new_pos, src in enumerate(row_order, start=1):
        field = (sig >> (4 * (src - 1))) & 15
        out += field << (4 * (new_pos - 1))
    return out


def _hist(*cols: np.ndarray):
    arr = np.column_stack([np.asarray(c, dtype=np.int64) for c in cols])
    return np.unique(arr, axis=0, return_counts=True)


def _hist_equal(h1, h2) -> bool:
    return np.array_equal(h1[0], h2[0]) and np.array_equal(h1[1], h2[1])


def check_sorted_transport(eng: Engine, seq: SwapSequence, restricted: bool) -> Report:
    """Distributions survive the trip to the sorted endpoint: per 1-count and
    per column sum vector in general, and per (row sums, column sums) pair on
    the sparse domain when restricted=True."""
    ta = eng.table(seq.start)
    tf = eng.table(seq.final)
    ne_a, ne_f = ta.chain_array(NE), tf.chain_array(NE)
    prop = "corollary2-distribution" if restricted else "corollary1-distribution"
    if restricted:
        sel_a = np.nonzero(ta.rows_le1())[0]
        sel_f = np.nonzero(tf.rows_le1())[0]
        h1 = _hist(_permute_rowsig(ta.rowsig()[sel_a], seq.row_order),
                   ta.colsig()[sel_a], ne_a[sel_a])
        h2 = _hist(tf.rowsig()[sel_f], tf.colsig()[sel_f], ne_f[sel_f])
        ok = _hist_equal(h1, h2)
        detail = f"{sel_a.size} sparse fillings over {len(seq.steps)} swaps"
    else:
        ok = (_hist_equal(_hist(ta.pop(), ne_a), _hist(tf.pop(), ne_f))
              and _hist_equal(_hist(ta.colsig(), ne_a), _hist(tf.colsig(), ne_f)))
        detail = f"{ta.total} fillings over {len(seq.steps)} swaps"
    return Report(ok, prop,
                  f"{'histograms agree' if ok else 'histograms differ'}: {detail}")


def check_column_multiset(eng: Engine, shape: Polyomino) -> Report:
    """The (1-count, ne) distribution depends only on the multiset of column
    heights: compare against the sorted, top-left-justified shape."""
    ferrers = ferrers_from_heights(column_heights(shape))
    ta, tf = eng.table(shape), eng.table(ferrers)
    ok = _hist_equal(_hist(ta.pop(), ta.chain_array(NE)),
                     _hist(tf.pop(), tf.chain_array(NE)))
    return Report(ok, "column-multiset-invariance",
                  f"{'histograms agree' if ok else 'histograms differ'} with the sorted "
                  f"column shape {ferrers.interval_tuples()}")


def check_rotate180(eng: Engine, shape: Polyomino, max_ones=None) -> Report:
    """ne and se are unchanged by a half-turn of the filled shape."""
    rshape = rotate180(shape)
    ta, tr = eng.table(shape), eng.table(rshape)
    k, w = shape.row_count, shape.width
    perm = np.zeros(ta.total, np.int64)
    for p, cell in enumerate(ta.cells):
        q = tr.index[(k + 1 - cell.row, w + 1 - cell.col)]
        perm += ta.bit(p).astype(np.int64) << q
    sel = np.ones(ta.total, bool) if max_ones is None else ta.pop() <= max_ones
    idx = np.nonzero(sel)[0]
    bad = idx[(tr.chain_array(NE)[perm[idx]] != ta.chain_array(NE)[idx])
              | (tr.chain_array(SE)[perm[idx]] != ta.chain_array(SE)[idx])]
    return Report(bad.size == 0, "rotate180-invariance",
                  f"checked {idx.size} fillings; {bad.size} violations",
                  _witnesses(ta, bad))


# ---- independent oracle and structural grid checks ----

def _monotone_subsets(shape: Polyomino, direction: str):
    """Yield every nonempty strictly monotone cell set of the shape, as a list."""
    cells = sorted(shape.cells(), key=lambda c: (c.col, c.row))

    def extend(chain: list[Cell], start: int):
        yield list(chain)
        for j in range(start, len(cells)):
            nxt = cells[j]
            last = chain[-1]
            if nxt.col <= last.col:
                continue
            if direction == NE and nxt.row >= last.row:
                continue
            if direction == SE and nxt.row <= last.row:
                continue
            chain.append(nxt)
            yield from extend(chain, j + 1)
            chain.pop()

    for j in range(len(cells)):
        yield from extend([cells[j]], j + 1)


def _grid_ok(shape: Polyomino, cells: list[Cell]) -> bool:
    return all(shape.contains(a.row, b.col) for a in cells for b in cells)


def _pairs_ok(shape: Polyomino, cells: list[Cell]) -> bool:
    return all(
        shape.contains(a.row, b.col) and shape.contains(b.row, a.col)
        for a, b in combinations(cells, 2))


def _span_ok(shape: Polyomino, cells: list[Cell]) -> bool:
    lo = min(c.col for c in cells)
    hi = max(c.col for c in cells)
    return all(shape.rows[c.row - 1].start <= lo and shape.rows[c.row - 1].end >= hi
               for c in cells)


def check_pairwise_grid(shape: Polyomino) -> Report:
    """For every monotone cell set: the grid condition, the all-pairs
    rectangle condition, and the row-interval span condition agree."""
    checked = 0
    for direction in (NE, SE):
        for cells in _monotone_subsets(shape, direction):
            checked += 1
            g = _grid_ok(shape, cells)
            if g != _pairs_ok(shape, cells) or g != _span_ok(shape, cells):
                return Report(False, "pairwise-grid",
                              f"conditions disagree on {[(c.row, c.col) for c in cells]}")
    return Report(True, "pairwise-grid",
                  f"grid, pairwise and span conditions agree on {checked} monotone sets")


def oracle_chain_array(table: ShapeTable, direction: str) -> np.ndarray:
    """Independent longest-chain array: seed every valid chain's mask with its
    size, then propagate maxima to all supersets."""
    seed = np.zeros(table.total, np.int8)
    for cells in _monotone_subsets(table.shape, direction):
        if _grid_ok(table.shape, cells):
            mask = 0
            for c in cells:
                mask |= 1 << table.index[(c.row, c.col)]
            if len(cells) > seed[mask]:
                seed[mask] = len(cells)
    for p in range(table.n):
        view = seed.reshape(-1, 2, 1 << p)
        np.maximum(view[:, 1, :], view[:, 0, :], out=view[:, 1, :])
    return seed


def check_chain_oracle(eng: Engine, shape: Polyomino) -> Report:
    table = eng.table(shape)
    for direction in (NE, SE):
        want = oracle_chain_array(table, direction)
        got = table.chain_array(direction)
        if not np.array_equal(want, got):
            bad = np.nonzero(want != got)[0][:1]
            return Report(False, "chain-oracle",
                          f"{direction} search disagrees with the subset oracle",
                          _witnesses(table, bad))
    return Report(True, "chain-oracle",
                  f"ne and se agree with the subset oracle on {table.total} fillings")


def check_coupling_instance(shape: Polyomino, i: int, filling: Filling) -> Report:
    """Single-filling multiset identity report (no row sum requirement)."""
    from .bijections import exchange_overlap, swap_filling, swap_rows_with_fillings
    from .chains import ne as ne_stat

    ctx = make_swap_context(shape, i)
    mp = exchange_overlap(ctx, filling, unchecked=True)
    nf = swap_rows_with_fillings(ctx, filling)
    npf = swap_filling(ctx, filling)
    left = sorted((ne_stat(filling), ne_stat(mp)))
    right = sorted((ne_stat(nf), ne_stat(npf)))
    ok = left == right
    return Report(ok, "coupling-lemma",
                  f"ne multisets {{{left[0]},{left[1]}}} vs {{{right[0]},{right[1]}}} "
                  f"({'equal' if ok else 'different'})",
                  () if ok else (filling,))
