"""Independent brute-force referee for the analytic modules.

Everything here recomputes results from first principles: graded slices by
filtering certified boxes, trace slices as literal sumsets, ray verdicts by
scanning candidate parameters, and cone memberships by bounded lattice walks.
The verifiers return a :class:`CrossCheck` rather than raising, so callers can
surface the first discrepancy.
"""

from __future__ import annotations

import math
import os
from dataclasses import dataclass
from fractions import Fraction
from itertools import product
from typing import Callable

from .conegeom import AffineRay, RayIntegralityReport, SimplicialCone, _as_integral_point
from .errors import InputError, ResourceError
from .intlinalg import dot, inverse, matvec
from .poset import Poset

DEFAULT_ENUM_CAP = 10**7
ENUM_CAP_ENV = "TORICTRACE_ENUM_CAP"


def enum_cap() -> int:
    raw = os.environ.get(ENUM_CAP_ENV)
    if raw is None:
        return DEFAULT_ENUM_CAP
    try:
        value = int(raw)
    except ValueError as exc:
        raise InputError(f"{ENUM_CAP_ENV} must be an integer, got {raw!r}") from exc
    if value <= 0:
        raise InputError(f"{ENUM_CAP_ENV} must be positive")
    return value


@dataclass(frozen=True)
class BoundedRegion:
    """Integer box plus a membership predicate; bounds certified by the caller.

    ``prefix_ok`` may reject partial assignments of a coordinate prefix, which
    lets the pruned walker skip dead branches; it must never reject a prefix of
    a member.
    """

    bounds: tuple[tuple[int, int], ...]
    predicate: Callable[[tuple[int, ...]], bool]
    description: str = ""
    prefix_ok: Callable[[tuple[int, ...]], bool] | None = None

    def volume(self) -> int:
        vol = 1
        for lo, hi in self.bounds:
            vol *= max(0, hi - lo + 1)
        return vol


def enumerate_slice(region: BoundedRegion, cap: int | None = None) -> list[tuple[int, ...]]:
    """All integer points of the region, in lexicographic order."""
    cap = enum_cap() if cap is None else cap
    vol = region.volume()
    if vol > cap:
        raise ResourceError(
            f"{region.description or 'region'}: box volume {vol} exceeds cap {cap}"
        )
    ranges = [range(lo, hi + 1) for lo, hi in region.bounds]
    return [p for p in product(*ranges) if region.predicate(p)]


def enumerate_slice_pruned(region: BoundedRegion, cap: int | None = None) -> list[tuple[int, ...]]:
    """Like enumerate_slice but cuts branches that prefix_ok already rejects."""
    if region.prefix_ok is None:
        return enumerate_slice(region, cap)
    out: list[tuple[int, ...]] = []
    bounds = region.bounds

    def walk(prefix: tuple[int, ...]):
        if len(prefix) == len(bounds):
            if region.predicate(prefix):
                out.append(prefix)
            return
        lo, hi = bounds[len(prefix)]
        for v in range(lo, hi + 1):
            ext = prefix + (v,)
            if region.prefix_ok(ext):
                walk(ext)

    walk(())
    return out


# ---------------------------------------------------------------------------
# Hibi-side regions.  Constraints are rebuilt here directly from the cover
# list so the referee does not share the analytic module's rank/dist tables.
# ---------------------------------------------------------------------------

def _hibi_constraints(poset: Poset, shift: int):
    """(i, j) pairs over coordinates 0..n meaning vec[i] >= vec[j] + shift,
    plus bare lower bounds from covers into +inf (vec[i] >= shift)."""
    pairs = []
    floors = []
    idx = {e: i + 1 for i, e in enumerate(poset.elements)}
    covered_below = {v for _, v in poset.covers}
    covered_above = {u for u, _ in poset.covers}
    for u, v in poset.covers:
        pairs.append((idx[u], idx[v]))
    for e in poset.elements:
        if e not in covered_below:  # minimal: -inf covers it
            pairs.append((0, idx[e]))
        if e not in covered_above:  # maximal: covered by +inf
            floors.append(idx[e])
    if poset.n == 0:
        floors.append(0)
    return pairs, floors


def hibi_region(poset: Poset, degree: int, shift: int) -> BoundedRegion:
    """Certified box for one graded slice of the (anti)canonical module or ring.

    Chain bounds: every value is at least shift * (shortest climb to +inf) and
    at most degree - shift * (climb from -inf), using rank for positive shift
    and dist for negative shift; the coarse versions below only need the
    global rank of P^.
    """
    hat_rank = _oracle_hat_rank(poset)
    if shift == 1:
        lo, hi = 1, degree - 1
    elif shift == 0:
        lo, hi = 0, degree
    else:
        lo, hi = -hat_rank, degree + hat_rank
    bounds = ((degree, degree),) + ((lo, hi),) * poset.n

    pairs, floors = _hibi_constraints(poset, shift)

    def predicate(vec) -> bool:
        return (all(vec[i] >= vec[j] + shift for i, j in pairs)
                and all(vec[i] >= shift for i in floors))

    def prefix_ok(vec) -> bool:
        k = len(vec)
        return (all(vec[i] >= vec[j] + shift for i, j in pairs if i < k and j < k)
                and all(vec[i] >= shift for i in floors if i < k))

    kind = {1: "canonical", 0: "ring", -1: "anticanonical"}[shift]
    return BoundedRegion(bounds, predicate, f"{kind} slice deg {degree}", prefix_ok)


def _oracle_hat_rank(poset: Poset) -> int:
    """Longest chain length of P^ computed by plain DFS over covers."""
    idx = {e: i for i, e in enumerate(poset.elements)}
    up = [[] for _ in range(poset.n)]
    for u, v in poset.covers:
        up[idx[u]].append(idx[v])
    memo: dict[int, int] = {}

    def height(i: int) -> int:
        # longest path from i up to +inf, counting the final cover into +inf
        if i not in memo:
            memo[i] = 1 + max((height(j) for j in up[i]), default=0)
        return memo[i]

    if poset.n == 0:
        return 1
    return 1 + max(height(i) for i in range(poset.n))


def hibi_slice_by_enumeration(poset: Poset, degree: int, shift: int,
                              cap: int | None = None) -> frozenset[tuple[int, ...]]:
    return frozenset(enumerate_slice_pruned(hibi_region(poset, degree, shift), cap))


def brute_trace_slice(canonical: dict[int, frozenset], anticanonical: dict[int, frozenset],
                      degree: int) -> frozenset[tuple[int, ...]]:
    """Literal sumset union over all degree splits i + j = degree."""
    out = set()
    for i, can in canonical.items():
        anti = anticanonical.get(degree - i)
        if not anti or not can:
            continue
        for m in can:
            for mp in anti:
                out.add(tuple(x + y for x, y in zip(m, mp)))
    return frozenset(out)


# ---------------------------------------------------------------------------
# Cone-side enumeration: slices of sigma/tau/tau~ graded by total pairing.
# ---------------------------------------------------------------------------

def cone_region(cone: SimplicialCone, pairing_min: int, pairing_sum_cap: int) -> BoundedRegion:
    """Lattice points with <m, u_i> >= pairing_min and total pairing <= cap.

    Total pairing is positive on sigma minus the origin, so these windows are
    finite; coordinate bounds come from interval arithmetic on m = U^-1 p.
    """
    n = cone.dim
    inv = inverse(cone.normals)
    hi_pair = pairing_sum_cap - (n - 1) * pairing_min
    bounds = []
    for j in range(n):
        lo = hi = Fraction(0)
        for i in range(n):
            coeff = inv[j][i]
            lo += coeff * (hi_pair if coeff < 0 else pairing_min)
            hi += coeff * (pairing_min if coeff < 0 else hi_pair)
        bounds.append((math.ceil(lo), math.floor(hi)))

    normals = cone.normals

    def predicate(vec) -> bool:
        total = 0
        for u in normals:
            p = dot(vec, u)
            if p < pairing_min:
                return False
            total += p
        return total <= pairing_sum_cap

    return BoundedRegion(tuple(bounds), predicate,
                         f"cone window pairings >= {pairing_min}, sum <= {pairing_sum_cap}")


def cone_points_window(cone: SimplicialCone, pairing_min: int, pairing_sum_cap: int,
                       cap: int | None = None) -> list[tuple[int, ...]]:
    return enumerate_slice(cone_region(cone, pairing_min, pairing_sum_cap), cap)


def minimal_module_points(cone: SimplicialCone, pairing_min: int, pairing_sum_cap: int,
                          cap: int | None = None) -> list[tuple[int, ...]]:
    """Module points in the window that are minimal modulo the semigroup.

    Minimality is exact: a reducer s must keep every pairing of m - s at least
    pairing_min, which confines s to a finite window regardless of the cap.
    """
    points = cone_points_window(cone, pairing_min, pairing_sum_cap, cap)
    out = []
    for m in points:
        pair_m = cone.pairings(m)
        budget = sum(pair_m) - cone.dim * pairing_min
        reducers = cone_points_window(cone, 0, budget, cap)
        reducible = any(
            s != (0,) * cone.dim
            and all(pm - ps >= pairing_min for pm, ps in zip(pair_m, cone.pairings(s)))
            for s in reducers
        )
        if not reducible:
            out.append(m)
    return out


def hilbert_basis_window(cone: SimplicialCone, pairing_sum_cap: int,
                         cap: int | None = None) -> list[tuple[int, ...]]:
    """Irreducible semigroup elements within the pairing window (exact there)."""
    zero = (0,) * cone.dim
    points = [p for p in cone_points_window(cone, 0, pairing_sum_cap, cap) if p != zero]
    members = set(points)
    out = []
    for m in points:
        halves = (s for s in points if sum(cone.pairings(s)) <= sum(cone.pairings(m)))
        if not any(tuple(a - b for a, b in zip(m, s)) in members and s != m
                   for s in halves):
            out.append(m)
    return out


def ray_integral_point_naive(ray: AffineRay, t_cap_factor: int = 4) -> RayIntegralityReport:
    """Third referee: scan t = s/q for s up to q * (4 * max |a_i|) literally."""
    q = math.lcm(*(x.denominator for x in ray.base))
    t_max = q * t_cap_factor * max(abs(a) for a in ray.direction)
    for s in range(t_max + 1):
        point = _as_integral_point(ray.point_at(Fraction(s, q)))
        if point is not None:
            return RayIntegralityReport(True, Fraction(s, q), point, None, (), None, ())
    return RayIntegralityReport(False, None, None, "cond3", (), None, ())


# ---------------------------------------------------------------------------
# Cross-verification harness.
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class CrossCheck:
    passed: bool
    detail: str = ""


def compare_sets(expected, actual, label: str = "") -> CrossCheck:
    expected, actual = frozenset(expected), frozenset(actual)
    if expected == actual:
        return CrossCheck(True)
    missing = sorted(expected - actual)
    extra = sorted(actual - expected)
    first = missing[0] if missing else extra[0]
    return CrossCheck(False,
                      f"{label or 'sets'} differ: first discrepancy {first}, "
                      f"{len(missing)} missing / {len(extra)} extra")


def cross_verify_hibi_slice(poset: Poset, degree: int, shift: int,
                            cap: int | None = None) -> CrossCheck:
    from . import hibi

    analytic = hibi._slice_set(poset, degree, shift)
    brute = hibi_slice_by_enumeration(poset, degree, shift, cap)
    kind = {1: "canonical", 0: "ring", -1: "anticanonical"}[shift]
    return compare_sets(brute, analytic, f"{kind} slice deg {degree}")


def cross_verify_trace_slice(poset: Poset, degree: int, cap: int | None = None) -> CrossCheck:
    from . import hibi

    lo_can = hibi.canonical_alpha(poset)
    lo_anti = hibi.anticanonical_alpha(poset)
    canonical = {}
    anticanonical = {}
    for i in range(lo_can, degree - lo_anti + 1):
        canonical[i] = hibi_slice_by_enumeration(poset, i, 1, cap)
        anticanonical[degree - i] = hibi_slice_by_enumeration(poset, degree - i, -1, cap)
    brute = brute_trace_slice(canonical, anticanonical, degree)
    return compare_sets(brute, hibi.trace_slice(poset, degree).exponents,
                        f"trace slice deg {degree}")


def cross_verify_hibi_classification(poset: Poset, slice_degrees: int = 3) -> CrossCheck:
    """Recompute the classification from maximal-chain enumeration plus slices."""
    from . import hibi
    from .poset import connected_components

    got = hibi.classify(poset, slice_bound=0)
    chain_pure = []
    ranks = []
    for comp in connected_components(poset):
        lengths = {len(ch) - 1 for ch in _maximal_chains(comp)}
        chain_pure.append(len(lengths) == 1)
        ranks.append(max(len(ch) - 1 for ch in _maximal_chains(comp)))
    n_power = max(ranks) - min(ranks)
    if all(chain_pure):
        expected = (hibi.GorensteinStatus.GORENSTEIN if n_power == 0
                    else hibi.GorensteinStatus.NEARLY_GORENSTEIN if n_power == 1
                    else hibi.GorensteinStatus.PUNCTURED_GORENSTEIN)
    else:
        expected = hibi.GorensteinStatus.NEITHER
    if got.status is not expected:
        return CrossCheck(False, f"status {got.status} != chain-enumeration {expected}")
    if got.trace_power != n_power:
        return CrossCheck(False, f"N = {got.trace_power} != rank spread {n_power}")
    for k in range(slice_degrees + 1):
        check = cross_verify_trace_slice(poset, k)
        if not check.passed:
            return check
        if all(chain_pure):
            expected_slice = hibi.maximal_ideal_power_slice(poset, n_power, k)
            check = compare_sets(expected_slice.exponents,
                                 hibi.trace_slice(poset, k).exponents,
                                 f"(m^{n_power})_{k}")
            if not check.passed:
                return check
    return CrossCheck(True)


def _maximal_chains(poset: Poset):
    """All saturated chains from a minimal to a maximal element, as label lists."""
    up = {e: [] for e in poset.elements}
    for u, v in poset.covers:
        up[u].append(v)
    chains = []

    def extend(chain):
        tail = chain[-1]
        if not up[tail]:
            chains.append(list(chain))
            return
        for nxt in up[tail]:
            chain.append(nxt)
            extend(chain)
            chain.pop()

    for e in poset.minimal_elements():
        extend([e])
    return chains


def cross_verify_cone(cone: SimplicialCone, multiple_checks: int = 3) -> CrossCheck:
    """Referee classify_cone with the naive scanner and trace spot checks.

    For a ray with an integral point p = b + t a, the theorem's proof makes
    ceil(t) * a a trace element; for a ray without integral points no multiple
    of a may be a trace element.
    """
    from .conegeom import classify_cone, membership

    result = classify_cone(cone)
    for a, report in zip(cone.rays, result.ray_reports):
        naive = ray_integral_point_naive(AffineRay(result.cone_point, a))
        if naive.has_integral_point != report.has_integral_point:
            return CrossCheck(False, f"ray {a}: naive scan disagrees with solver")
        if naive.has_integral_point and naive.point != report.point:
            return CrossCheck(False, f"ray {a}: witness mismatch "
                                     f"{naive.point} vs {report.point}")
        if report.has_integral_point:
            s = math.ceil(report.t) if report.t > 0 else 1
            probe = tuple(s * x for x in a)
            if not membership(cone, probe).in_trace:
                return CrossCheck(False, f"ray {a}: {probe} should be a trace element")
        else:
            for mult in range(1, multiple_checks + 1):
                probe = tuple(mult * x for x in a)
                if membership(cone, probe).in_trace:
                    return CrossCheck(False,
                                      f"ray {a}: {probe} cannot be a trace element")
    if not result.minors.passed and result.punctured_gorenstein:
        return CrossCheck(False, "minors violation with punctured verdict")
    return CrossCheck(True)
