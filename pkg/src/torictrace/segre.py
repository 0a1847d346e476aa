"""Trace computations for Segre products of graded toric factors.

Factors are supplied as graded families of explicit slices (built from posets
by :class:`HibiFactor`); this module never re-derives ring structure.  Segre
monomials are tuples of factor exponent vectors.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache
from itertools import combinations, product

from . import hibi
from .errors import DomainError, InputError, ResourceError, VerificationError
from .hibi import GradedSlice
from .poset import Poset

#: Marker for a full-height factor ideal (height = factor dimension, or the
#: unit ideal, whose height convention -1 never enters the minimum).
FULL_HEIGHT = "full"

MATERIALIZE_CAP = 200_000
INCLUSION_EXCLUSION_CAP = 20


class HibiFactor:
    """Graded data of one Hibi-ring Segre factor, with cached slices."""

    def __init__(self, poset: Poset):
        if poset.n == 0:
            raise InputError("a Segre factor needs a nonempty poset")
        self.poset = poset
        self.dim = poset.n + 1
        self.alpha_canonical = hibi.canonical_alpha(poset)
        self.alpha_anticanonical = hibi.anticanonical_alpha(poset)
        self.a_invariant = -self.alpha_canonical
        self._beta: tuple[int, int] | None = None

    def _betas(self) -> tuple[int, int]:
        if self._beta is None:
            can = hibi.minimal_canonical_generators(self.poset)
            anti = hibi.minimal_anticanonical_generators(self.poset)
            self._beta = (can.beta, anti.beta)
        return self._beta

    @property
    def beta_canonical(self) -> int:
        return self._betas()[0]

    @property
    def beta_anticanonical(self) -> int:
        return self._betas()[1]

    def canonical(self, degree: int) -> frozenset:
        return hibi._slice_set(self.poset, degree, 1)

    def anticanonical(self, degree: int) -> frozenset:
        return hibi._slice_set(self.poset, degree, -1)

    def ring(self, degree: int) -> frozenset:
        return hibi._slice_set(self.poset, degree, 0)

    def trace(self, degree: int) -> frozenset:
        return hibi.trace_slice(self.poset, degree).exponents


@dataclass(frozen=True)
class SegreSlice:
    """One graded piece of a Segre product; monomials are factor-exponent tuples."""

    degree: int
    monomials: frozenset[tuple]

    def __len__(self) -> int:
        return len(self.monomials)


def segre_slice(slices) -> SegreSlice:
    """Componentwise product of equal-degree factor slices."""
    slices = tuple(slices)
    if not slices:
        raise InputError("need at least one factor slice")
    degrees = {s.degree for s in slices}
    if len(degrees) != 1:
        raise InputError(f"factor slices at mixed degrees {sorted(degrees)}")
    monomials = frozenset(product(*(s.exponents for s in slices)))
    return SegreSlice(degrees.pop(), monomials)


def truncation_threshold(factors) -> int:
    """b = max beta(omega^-1) + max beta(omega) over the factors."""
    factors = tuple(factors)
    if not factors:
        raise InputError("need at least one factor")
    return (max(f.beta_anticanonical for f in factors)
            + max(f.beta_canonical for f in factors))


def union_product_cardinality(blocks) -> int:
    """|union of products| by inclusion-exclusion over factor-level intersections.

    ``blocks`` is a list of tuples of per-factor sets; the union of the
    product sets is never materialized.
    """
    blocks = [tuple(map(frozenset, blk)) for blk in blocks]
    blocks = [blk for blk in blocks if all(blk)]
    if not blocks:
        return 0
    if len(blocks) > INCLUSION_EXCLUSION_CAP:
        raise ResourceError(f"inclusion-exclusion over {len(blocks)} blocks refused")
    total = 0
    for size in range(1, len(blocks) + 1):
        sign = 1 if size % 2 else -1
        for chosen in combinations(blocks, size):
            term = 1
            for factor_sets in zip(*chosen):
                inter = frozenset.intersection(*factor_sets)
                term *= len(inter)
                if term == 0:
                    break
            total += sign * term
    return total


@dataclass(frozen=True)
class SegreTraceResult:
    degree: int
    factor_traces: tuple[frozenset, ...]
    cardinality: int
    monomials: frozenset | None  # explicit only under the materialization cap
    verified_by: str  # "explicit" or "cardinality"


def segre_trace_truncation(factors, degree: int,
                           materialize_cap: int = MATERIALIZE_CAP) -> SegreTraceResult:
    """Degree-k trace slice of the Segre product, for k past the threshold.

    Computes the factorized form (product of the factors' trace slices) and
    the raw sumset over all degree splits, and asserts they agree.  The raw
    sumset of products is compared exactly: each split's block is contained in
    the factorized product, so equality holds iff the inclusion-exclusion
    cardinality of the union matches the product of the trace slice sizes.
    Both sides are additionally materialized when small enough.
    """
    factors = tuple(factors)
    b = truncation_threshold(factors)
    if degree < b:
        raise DomainError(f"degree {degree} below truncation threshold b = {b}")

    traces = tuple(f.trace(degree) for f in factors)
    factorized_count = 1
    for t in traces:
        factorized_count *= len(t)

    lo = max(f.alpha_canonical for f in factors)
    hi = degree - max(f.alpha_anticanonical for f in factors)
    blocks = []
    for i in range(lo, hi + 1):
        block = tuple(_sumset(f.anticanonical(degree - i), f.canonical(i))
                      for f in factors)
        if all(block):
            for part, trace in zip(block, traces):
                if not part <= trace:
                    raise VerificationError("sumset block escaped the factor trace slice")
            blocks.append(block)

    union_count = union_product_cardinality(blocks)
    if union_count != factorized_count:
        raise VerificationError(
            f"truncation identity failed at degree {degree}: "
            f"sumset {union_count} vs factorized {factorized_count}"
        )

    monomials = None
    verified_by = "cardinality"
    if factorized_count <= materialize_cap:
        explicit_union = set()
        for block in blocks:
            explicit_union.update(product(*block))
        explicit_factorized = set(product(*traces))
        if explicit_union != explicit_factorized:
            raise VerificationError(
                f"truncation identity failed elementwise at degree {degree}"
            )
        monomials = frozenset(explicit_factorized)
        verified_by = "explicit"

    return SegreTraceResult(degree, traces, factorized_count, monomials, verified_by)


@lru_cache(maxsize=512)
def _sumset_cached(a: frozenset, b: frozenset) -> frozenset:
    return frozenset(hibi.add_exponents(x, y) for x in a for y in b)


def _sumset(a, b) -> frozenset:
    return _sumset_cached(frozenset(a), frozenset(b))


def empirical_truncation_onset(factors, scan_from: int | None = None) -> int | None:
    """Least k <= b from which the factorized identity holds up to b.

    Reported for information only; the theorem asserts nothing below b.
    """
    factors = tuple(factors)
    b = truncation_threshold(factors)
    start = max(f.alpha_canonical + f.alpha_anticanonical for f in factors) \
        if scan_from is None else scan_from
    onset = None
    for k in range(start, b + 1):
        traces = [f.trace(k) for f in factors]
        factorized = 1
        for t in traces:
            factorized *= len(t)
        lo = max(f.alpha_canonical for f in factors)
        hi = k - max(f.alpha_anticanonical for f in factors)
        blocks = []
        for i in range(lo, hi + 1):
            block = tuple(_sumset(f.anticanonical(k - i), f.canonical(i))
                          for f in factors)
            if all(block):
                blocks.append(block)
        holds = union_product_cardinality(blocks) == factorized
        if holds and onset is None:
            onset = k
        if not holds:
            onset = None
    return onset


def gorenstein_segre_trace_exponent(a_invariants) -> int:
    """tr(omega) = m^(a_max - a_min) for a Segre product of Gorenstein factors.

    All a-invariants must be negative (the Cohen-Macaulayness hypothesis).
    """
    a_invariants = tuple(a_invariants)
    if not a_invariants:
        raise InputError("need at least one a-invariant")
    bad = [a for a in a_invariants if a >= 0]
    if bad:
        raise DomainError(f"nonnegative a-invariant {bad[0]} violates the hypothesis")
    return max(a_invariants) - min(a_invariants)


def segre_height(heights, dims) -> int:
    """Height of I_1 # ... # I_m from the factor heights.

    Full-height entries (height = factor dimension, or FULL_HEIGHT for the
    unit ideal after truncation) count as the Segre dimension; the result is
    the minimum of the effective heights, which is the full dimension exactly
    when every factor is full.
    """
    heights = tuple(heights)
    dims = tuple(int(d) for d in dims)
    if len(heights) != len(dims) or not dims:
        raise DomainError("need equally many heights and dimensions")
    total = sum(dims) - (len(dims) - 1)
    effective = []
    for h, d in zip(heights, dims):
        if h == FULL_HEIGHT or h == d:
            effective.append(total)
        elif isinstance(h, int) and 0 <= h < d:
            effective.append(h)
        else:
            raise DomainError(f"height {h!r} inconsistent with dimension {d}")
    return min(effective)
