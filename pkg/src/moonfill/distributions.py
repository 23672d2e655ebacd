"""Distribution polynomials of chain statistics and row-sorting transports.

A distribution polynomial records how many fillings of a constrained family
attain each statistic value: univariate in q for one statistic, bivariate in
x, y for a joint pair. sort_path turns a shape into a sorted-row endpoint by
adjacent swaps, each of which supports the chain-preserving maps, so whole
distributions can be transported step by step.
"""

from collections import Counter
from dataclasses import dataclass
from typing import Iterable

from .bijections import (PreconditionViolated, SwapContext, chain_preserving_swap,
                         coupled_swap, make_swap_context)
from .chains import ne, se
from .fillings import Filling, enumerate_fillings
from .shapes import ALMOST_MOON, MOON, Polyomino, classify, swap_adjacent_rows


@dataclass(frozen=True)
class DistributionPolynomial:
    """Sparse polynomial with integer coefficients, exponents sorted ascending.

    arity 1 prints terms as c*q^e, arity 2 as c*x^a*y^b, joined by ' + '.
    """

    arity: int
    terms: tuple[tuple[tuple[int, ...], int], ...]

    @classmethod
    def from_counts(cls, counts: dict, arity: int) -> "DistributionPolynomial":
        items = []
        for exps, coeff in counts.items():
            if coeff == 0:
                continue
            key = (exps,) if isinstance(exps, int) else tuple(exps)
            if len(key) != arity:
                raise ValueError(f"exponent {exps!r} does not match arity {arity}")
            items.append((key, int(coeff)))
        items.sort()
        return cls(arity, tuple(items))

    def coeff(self, *exps: int) -> int:
        for key, c in self.terms:
            if key == exps:
                return c
        return 0

    def total(self) -> int:
        return sum(c for _, c in self.terms)

    def as_dict(self) -> dict:
        return {key if self.arity > 1 else key[0]: c for key, c in self.terms}

    def is_symmetric(self) -> bool:
        if self.arity != 2:
            raise ValueError("symmetry is defined for bivariate polynomials")
        d = self.as_dict()
        return all(d.get((b, a), 0) == c for (a, b), c in d.items())

    def marginal(self, axis: int) -> "DistributionPolynomial":
        if self.arity != 2:
            raise ValueError("marginal is defined for bivariate polynomials")
        counts: Counter = Counter()
        for (a, b), c in self.terms:
            counts[a if axis == 0 else b] += c
        return DistributionPolynomial.from_counts(counts, 1)

    def __str__(self) -> str:
        if not self.terms:
            return "0"
        parts = []
        for key, c in self.terms:
            if self.arity == 1:
                parts.append(f"{c}*q^{key[0]}")
            else:
                parts.append(f"{c}*x^{key[0]}*y^{key[1]}")
        return " + ".join(parts)


def distribution(shape: Polyomino, constraint, joint: bool = False) -> DistributionPolynomial:
    """ne distribution of the constrained fillings; joint=True pairs ne with se."""
    counts: Counter = Counter()
    for f in enumerate_fillings(shape, constraint):
        if joint:
            counts[(ne(f), se(f))] += 1
        else:
            counts[ne(f)] += 1
    return DistributionPolynomial.from_counts(counts, 2 if joint else 1)


def joint_distribution(shape: Polyomino, constraint) -> DistributionPolynomial:
    return distribution(shape, constraint, joint=True)


@dataclass(frozen=True)
class SwapStep:
    """One adjacent swap: applied to `shape`, exchanging rows i and i+1."""

    shape: Polyomino
    i: int

    def context(self) -> SwapContext:
        return make_swap_context(self.shape, self.i)


@dataclass(frozen=True)
class SwapSequence:
    """A chain of adjacent swaps from a start shape to its sorted endpoint.

    row_order lists the source row indices in their final top-to-bottom
    order, so row j of the final shape is source row row_order[j-1].
    """

    start: Polyomino
    steps: tuple[SwapStep, ...]
    final: Polyomino
    row_order: tuple[int, ...]


def sort_path(shape: Polyomino) -> SwapSequence:
    """Adjacent swaps carrying a moon or almost-moon shape to one with rows
    sorted by decreasing length.

    Any exceptional row first sinks below every strictly longer row, which
    makes the shape a moon; then a selection sort settles each position from
    the bottom up, picking the lowest minimal-length row so equal rows never
    swap. Every intermediate swap is validated to support the swap maps.
    """
    cls = classify(shape)
    if cls.kind not in (MOON, ALMOST_MOON):
        raise PreconditionViolated(f"sorting is defined for moon or almost-moon shapes, got {cls.kind}")
    steps: list[SwapStep] = []
    current = shape
    order = list(range(1, shape.row_count + 1))

    def apply_swap(i: int) -> None:
        nonlocal current
        step = SwapStep(current, i)
        step.context()  # raises PreconditionViolated if the swap is not supported
        steps.append(step)
        current = swap_adjacent_rows(current, i)
        order[i - 1], order[i] = order[i], order[i - 1]

    if cls.kind == ALMOST_MOON:
        e = cls.exceptional_row
        lengths = list(current.row_lengths())
        while any(x > lengths[e - 1] for x in lengths[e:]):
            apply_swap(e)
            lengths = list(current.row_lengths())
            e += 1

    k = current.row_count
    for bottom in range(k, 1, -1):
        lengths = current.row_lengths()[:bottom]
        smallest = min(lengths)
        pos = max(i + 1 for i, l in enumerate(lengths) if l == smallest)
        for i in range(pos, bottom):
            apply_swap(i)

    final_lengths = current.row_lengths()
    assert all(a >= b for a, b in zip(final_lengths, final_lengths[1:])), \
        "endpoint rows must be sorted by decreasing length"
    return SwapSequence(start=shape, steps=tuple(steps), final=current, row_order=tuple(order))


def composed_phi(seq: SwapSequence, filling: Filling) -> Filling:
    """Push a filling along every step with the ne-preserving swap map."""
    out = filling
    for step in seq.steps:
        out = chain_preserving_swap(step.context(), out)
    return out


def composed_psi(seq: SwapSequence, filling: Filling) -> Filling:
    """Push a sparse filling (row sums at most 1) along every step."""
    out = filling
    for step in seq.steps:
        out = coupled_swap(step.context(), out)
    return out


@dataclass(frozen=True)
class Report:
    """Outcome of a property check; witnesses hold offending fillings if any."""

    passed: bool
    prop: str
    details: str
    witnesses: tuple[Filling, ...] = ()


PROPERTIES = (
    "f-involution",
    "delta-ne-bound",
    "theorem1",
    "theorem2",
    "coupling-lemma",
    "corollary1-distribution",
    "corollary2-distribution",
    "column-multiset-invariance",
    "pairwise-grid",
    "rotate180-invariance",
)


def verify(prop: str, shape: Polyomino, swap: int | None = None,
           col_sums: tuple[int, ...] | None = None,
           filling: Filling | None = None,
           max_ones: int | None = None,
           engine=None) -> Report:
    """Exhaustively check one named property on one shape.

    Properties tied to a specific swap (f-involution, delta-ne-bound,
    theorem1, theorem2, coupling-lemma) need swap=i; the others ignore it.
    col_sums and max_ones restrict the filling family where meaningful.
    An existing bulk.Engine can be passed to reuse its cached tables.
    """
    from . import bulk

    if prop not in PROPERTIES:
        raise ValueError(f"unknown property {prop!r}; known: {', '.join(PROPERTIES)}")
    needs_swap = prop in ("f-involution", "delta-ne-bound", "theorem1", "theorem2",
                          "coupling-lemma")
    if needs_swap and swap is None and not (prop == "coupling-lemma" and filling is not None):
        raise ValueError(f"property {prop} needs a swap index")

    eng = engine if engine is not None else bulk.Engine()
    if prop == "f-involution":
        return bulk.check_involution(eng, shape, swap, col_sums, max_ones)
    if prop == "delta-ne-bound":
        return bulk.check_delta_bound(eng, shape, swap, col_sums, max_ones)
    if prop == "theorem1":
        return bulk.check_theorem1(eng, shape, swap, col_sums, max_ones)
    if prop == "theorem2":
        return bulk.check_theorem2(eng, shape, swap, max_ones)
    if prop == "coupling-lemma":
        if filling is not None:
            return bulk.check_coupling_instance(shape, swap, filling)
        return bulk.check_coupling_lemma(eng, shape, swap, max_ones)
    if prop == "corollary1-distribution":
        return bulk.check_sorted_transport(eng, sort_path(shape), restricted=False)
    if prop == "corollary2-distribution":
        return bulk.check_sorted_transport(eng, sort_path(shape), restricted=True)
    if prop == "column-multiset-invariance":
        return bulk.check_column_multiset(eng, shape)
    if prop == "pairwise-grid":
        return bulk.check_pairwise_grid(shape)
    if prop == "rotate180-invariance":
        return bulk.check_rotate180(eng, shape, max_ones)
    raise AssertionError("unreachable")


def joint_symmetry_check(shape: Polyomino, constraint) -> Report:
    """Is the joint (ne, se) distribution symmetric under exchanging the axes?"""
    poly = distribution(shape, constraint, joint=True)
    sym = poly.is_symmetric()
    details = f"joint distribution {poly}"
    return Report(passed=sym, prop="joint-symmetry", details=details)
