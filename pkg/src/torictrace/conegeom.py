"""Simplicial rational cones and the integral-point tests on the shifted cone.

A full-dimensional pointed simplicial cone is carried as a pair of integer
matrices: rows of A are the primitive extremal ray generators, rows of U the
primitive inner normals, labeled so that <a_l, u_j> = 0 for l != j and
<a_l, u_l> >= 1.  The canonical module lives on the shifted cone
tau = {v : <v, u_i> >= 1}, whose extremal rays are b + t*a_i with b the cone
point; Gorenstein-type properties reduce to integrality questions on these
rays, solved here three independent ways.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from itertools import combinations, product

from .errors import DomainError, InputError, VerificationError
from . import intlinalg
from .intlinalg import dot, primitivize

IntVector = tuple[int, ...]
FracVector = tuple[Fraction, ...]


def _int_matrix(rows) -> tuple[IntVector, ...]:
    out = []
    width = None
    for row in rows:
        row = tuple(int(x) for x in row)
        if width is None:
            width = len(row)
        elif len(row) != width:
            raise InputError("matrix rows have unequal lengths")
        out.append(row)
    return tuple(out)


def dual_matrix(matrix) -> tuple[IntVector, ...]:
    """Primitivized columns of |det M| * M^-1.

    Applied to ray rows this yields the inner normals and vice versa; the sign
    correction keeps the diagonal pairing positive regardless of row order.
    """
    m = _int_matrix(matrix)
    n = len(m)
    if n == 0 or len(m[0]) != n:
        raise InputError("dual_matrix needs a nonempty square matrix")
    d = intlinalg.det_int(m)
    if d == 0:
        raise InputError("degenerate cone: matrix is singular")
    adj = intlinalg.adjugate(m)
    sign = 1 if d > 0 else -1
    cols = []
    for j in range(n):
        col = tuple(sign * adj[i][j] for i in range(n))
        cols.append(primitivize(col))
    return tuple(cols)


def normals_from_rays(rays) -> tuple[IntVector, ...]:
    return dual_matrix(rays)


def rays_from_normals(normals) -> tuple[IntVector, ...]:
    return dual_matrix(normals)


@dataclass(frozen=True)
class SimplicialCone:
    rays: tuple[IntVector, ...]
    normals: tuple[IntVector, ...]

    def __post_init__(self):
        n = len(self.rays)
        if n == 0 or len(self.normals) != n:
            raise InputError("need equally many rays and normals")
        for row in (*self.rays, *self.normals):
            if len(row) != n:
                raise InputError("cone matrices must be square")
            if intlinalg.vec_gcd(row) != 1:
                raise InputError(f"row {row} is not primitive")
        if intlinalg.det_int(self.rays) == 0:
            raise InputError("degenerate cone: ray matrix is singular")
        for l, a in enumerate(self.rays):
            for j, u in enumerate(self.normals):
                p = dot(a, u)
                if l != j and p != 0:
                    raise InputError(f"pairing <a_{l+1}, u_{j+1}> = {p}, expected 0")
                if l == j and p < 1:
                    raise InputError(f"pairing <a_{l+1}, u_{l+1}> = {p}, expected >= 1")

    @property
    def dim(self) -> int:
        return len(self.rays)

    @classmethod
    def from_rays(cls, rays) -> "SimplicialCone":
        rays = tuple(primitivize(r) for r in _int_matrix(rays))
        return cls(rays, normals_from_rays(rays))

    @classmethod
    def from_normals(cls, normals) -> "SimplicialCone":
        normals = tuple(primitivize(r) for r in _int_matrix(normals))
        return cls(rays_from_normals(normals), normals)

    def pairings(self, v) -> tuple:
        return tuple(dot(v, u) for u in self.normals)


@dataclass(frozen=True)
class AffineRay:
    """The half-line base + t*direction (t >= 0), direction primitive."""

    base: FracVector
    direction: IntVector

    def __post_init__(self):
        base = tuple(Fraction(x) for x in self.base)
        if len(base) != len(self.direction) or not base:
            raise InputError("base and direction need equal positive length")
        direction = primitivize(self.direction)
        object.__setattr__(self, "base", base)
        object.__setattr__(self, "direction", direction)

    def point_at(self, t) -> FracVector:
        t = Fraction(t)
        return tuple(b + t * a for b, a in zip(self.base, self.direction))


@dataclass(frozen=True)
class RayIntegralityReport:
    has_integral_point: bool
    t: Fraction | None
    point: IntVector | None
    failed_condition: str | None  # "cond1" | "cond2" | "cond3"
    ceil_gaps: FracVector  # c_i = ceil(b_i) - b_i
    pivot: int | None
    e_values: tuple[tuple[int, Fraction], ...]  # (index, a_i*c_j - a_j*c_i)


def _as_integral_point(vec) -> IntVector | None:
    out = []
    for x in vec:
        if Fraction(x).denominator != 1:
            return None
        out.append(int(x))
    return tuple(out)


def cone_point(normals) -> FracVector:
    """The vertex of tau: the unique b with <b, u_i> = 1 for every normal."""
    ones = (1,) * len(tuple(normals))
    return intlinalg.solve(_int_matrix(normals), ones)


def is_gorenstein(cone: SimplicialCone) -> bool:
    return _as_integral_point(cone_point(cone.normals)) is not None


def tau_ray(cone: SimplicialCone, i: int) -> AffineRay:
    return AffineRay(cone_point(cone.normals), cone.rays[i])


def ray_integral_point(ray: AffineRay, pivot: int | None = None) -> RayIntegralityReport:
    """Integral point on the ray via the ceiling-gap congruence conditions.

    With c_i = ceil(b_i) - b_i and a pivot j among the nonzero direction
    entries, an integral point exists iff (1) b_i is an integer wherever
    a_i = 0, (2) every e_i = a_i*c_j - a_j*c_i is an integer, and (3) the
    congruences e_i + a_i*t ~ 0 (mod a_j) have a common solution; solutions
    are periodic mod |a_j|, so scanning one period decides, and the witness
    is normalized to the smallest t >= 0.
    """
    b, a = ray.base, ray.direction
    support = [i for i, ai in enumerate(a) if ai != 0]
    gaps = tuple(Fraction(math.ceil(x)) - x for x in b)

    if any(b[i].denominator != 1 for i in range(len(b)) if i not in support):
        return RayIntegralityReport(False, None, None, "cond1", gaps, None, ())

    if pivot is None:
        pivot = min(support, key=lambda i: (abs(a[i]), i))
    elif pivot not in support:
        raise DomainError(f"pivot {pivot} has zero direction entry")

    e_vals = tuple((i, a[i] * gaps[pivot] - a[pivot] * gaps[i])
                   for i in support if i != pivot)
    if any(e.denominator != 1 for _, e in e_vals):
        return RayIntegralityReport(False, None, None, "cond2", gaps, pivot, e_vals)

    modulus = abs(a[pivot])
    t_pivot = next(
        (t for t in range(modulus)
         if all((int(e) + a[i] * t) % modulus == 0 for i, e in e_vals)),
        None,
    )
    if t_pivot is None:
        return RayIntegralityReport(False, None, None, "cond3", gaps, pivot, e_vals)

    t = (gaps[pivot] + t_pivot) / a[pivot]
    t -= math.floor(t)
    point = _as_integral_point(ray.point_at(t))
    if point is None:
        raise VerificationError("congruence solution failed to lift to an integral point")
    return RayIntegralityReport(True, t, point, None, gaps, pivot, e_vals)


def ray_integral_point_oracle(ray: AffineRay) -> RayIntegralityReport:
    """Independent referee over a common denominator.

    Writing b_i = p_i/q, an integral point forces t = s/q with s an integer
    satisfying s*a_i ~ -p_i (mod q) for every coordinate; one period of s is
    scanned exactly.
    """
    b, a = ray.base, ray.direction
    q = math.lcm(*(x.denominator for x in b))
    nums = [int(x * q) for x in b]
    gaps = tuple(Fraction(math.ceil(x)) - x for x in b)

    if any(nums[i] % q != 0 for i in range(len(b)) if a[i] == 0):
        return RayIntegralityReport(False, None, None, "cond1", gaps, None, ())

    s = next(
        (s for s in range(q) if all((p + s * ai) % q == 0 for p, ai in zip(nums, a))),
        None,
    )
    if s is None:
        return RayIntegralityReport(False, None, None, "cond3", gaps, None, ())
    t = Fraction(s, q)
    point = _as_integral_point(ray.point_at(t))
    if point is None:
        raise VerificationError("denominator scan failed to lift to an integral point")
    return RayIntegralityReport(True, t, point, None, gaps, None, ())


@dataclass(frozen=True)
class SpecialCaseResult:
    applicable: bool
    pivot: int | None
    verdict: bool | None
    non_integral_pair: tuple[int, int] | None


def special_case_gcd_test(ray: AffineRay) -> SpecialCaseResult:
    """Pairwise-gap test usable when some a_i is coprime to all other entries.

    Requires an index i with gcd(a_i, a_j) = 1 for every other nonzero a_j;
    then an integral point exists iff the zero-direction coordinates are
    integral and every e_ij = a_i*c_j - a_j*c_i is an integer.
    """
    b, a = ray.base, ray.direction
    n = len(a)
    support = [i for i in range(n) if a[i] != 0]
    pivot = next(
        (i for i in support
         if all(math.gcd(abs(a[i]), abs(a[j])) == 1 for j in support if j != i)),
        None,
    )
    if pivot is None:
        return SpecialCaseResult(False, None, None, None)

    if any(b[i].denominator != 1 for i in range(n) if a[i] == 0):
        return SpecialCaseResult(True, pivot, False, None)
    gaps = [Fraction(math.ceil(x)) - x for x in b]
    for i, j in combinations(range(n), 2):
        e = a[i] * gaps[j] - a[j] * gaps[i]
        if e.denominator != 1:
            return SpecialCaseResult(True, pivot, False, (i, j))
    return SpecialCaseResult(True, pivot, True, None)


@dataclass(frozen=True)
class MinorsViolation:
    rows: tuple[int, ...]
    cols_j: tuple[int, ...]
    cols_l: tuple[int, ...]
    gcd: int
    cofactor_sum: int


@dataclass(frozen=True)
class MinorsResult:
    passed: bool
    violations: tuple[MinorsViolation, ...]

    @property
    def certificate(self) -> MinorsViolation | None:
        return self.violations[0] if self.violations else None


def minors_necessary_condition(normals) -> MinorsResult:
    """Divisibility test on (n-1)-minors of the normal matrix.

    Eliminating an integral point on the tau-ray cut out by the rows I leaves,
    for each pair of column sets J, L differing in one index, a two-variable
    integer equation whose right side is an alternating cofactor sum; so
    gcd(|det U_IJ|, |det U_IL|) must divide that sum.  Any violation certifies
    that the ring is not Gorenstein on the punctured spectrum.  A (0, 0) gcd
    pair carries no constraint and passes.
    """
    u = _int_matrix(normals)
    n = len(u)
    if n < 2 or len(u[0]) != n:
        raise InputError("minors test needs a square matrix of size >= 2")
    violations = []
    for rows in combinations(range(n), n - 1):
        for cols_j in combinations(range(n), n - 1):
            (missing,) = set(range(n)) - set(cols_j)
            det_j = int(intlinalg.minor_det(u, rows, cols_j))
            for pos, col in enumerate(cols_j):
                cols_l = tuple(sorted(set(cols_j) - {col} | {missing}))
                det_l = int(intlinalg.minor_det(u, rows, cols_l))
                if det_j == 0 and det_l == 0:
                    continue
                reduced_cols = tuple(c for c in cols_j if c != col)
                total = 0
                for m, row in enumerate(rows):
                    reduced_rows = tuple(r for r in rows if r != row)
                    total += (-1) ** (m + pos) * int(
                        intlinalg.minor_det(u, reduced_rows, reduced_cols))
                g = math.gcd(abs(det_j), abs(det_l))
                if total % g != 0:
                    violations.append(MinorsViolation(rows, cols_j, cols_l, g, total))
    return MinorsResult(not violations, tuple(violations))


@dataclass(frozen=True)
class ConeClassification:
    cone_point: FracVector
    gorenstein: bool
    ray_reports: tuple[RayIntegralityReport, ...]
    integral_ray_count: int
    height_lower_bound: int
    punctured_gorenstein: bool
    minors: MinorsResult


def classify_cone(cone: SimplicialCone) -> ConeClassification:
    """Run the cone-point, per-ray and minors tests and combine the verdicts."""
    b = cone_point(cone.normals)
    gorenstein = _as_integral_point(b) is not None
    reports = tuple(ray_integral_point(AffineRay(b, a)) for a in cone.rays)
    r = sum(1 for rep in reports if rep.has_integral_point)
    minors = minors_necessary_condition(cone.normals)
    punctured = r == cone.dim
    if not minors.passed and punctured:
        raise VerificationError("minors violation contradicts per-ray integral points")
    if gorenstein and not punctured:
        raise VerificationError("integral cone point but some ray has no integral point")
    return ConeClassification(
        cone_point=b,
        gorenstein=gorenstein,
        ray_reports=reports,
        integral_ray_count=r,
        height_lower_bound=r,
        punctured_gorenstein=punctured,
        minors=minors,
    )


@dataclass(frozen=True)
class MembershipReport:
    in_ring: bool
    in_canonical: bool
    in_anticanonical: bool
    in_trace: bool | None
    canonical_part: IntVector | None
    anticanonical_part: IntVector | None


def membership(cone: SimplicialCone, v, trace: bool = True) -> MembershipReport:
    """Module memberships of an integer vector by normal pairings.

    Canonical membership needs all pairings >= 1, anticanonical >= -1.  Trace
    membership looks for a canonical summand v1 with pairing vector p in the
    box [1, <v,u_i>+1]^n and U^-1 * p integral; the complement is then
    anticanonical by construction.  The trace query requires v in sigma.
    """
    v = tuple(int(x) for x in v)
    pair = cone.pairings(v)
    in_ring = all(p >= 0 for p in pair)
    report = MembershipReport(
        in_ring=in_ring,
        in_canonical=all(p >= 1 for p in pair),
        in_anticanonical=all(p >= -1 for p in pair),
        in_trace=None,
        canonical_part=None,
        anticanonical_part=None,
    )
    if not trace:
        return report
    if not in_ring:
        raise InputError(f"{v} is outside the cone; trace membership undefined")
    inv = intlinalg.inverse(cone.normals)
    for p in product(*(range(1, q + 2) for q in pair)):
        v1 = intlinalg.matvec(inv, p)
        v1_int = _as_integral_point(v1)
        if v1_int is not None:
            v2 = tuple(x - y for x, y in zip(v, v1_int))
            return MembershipReport(in_ring, report.in_canonical,
                                    report.in_anticanonical, True, v1_int, v2)
    return MembershipReport(in_ring, report.in_canonical,
                            report.in_anticanonical, False, None, None)


def dual_witness(cone: SimplicialCone, i: int) -> IntVector:
    """An integer m2 with <m2, u_i> = 1 and <m2, u_j> >= 1 for j != i.

    Starts from a Bezout combination for u_i and corrects by (1 - c) times the
    sum of the rays paired with the violated normals, which leaves the pivot
    pairing untouched.
    """
    u = cone.normals[i]
    m = intlinalg.bezout_for_vector(u)
    if dot(m, u) != 1:
        raise VerificationError("Bezout combination did not reach 1 for a primitive row")
    others = [j for j in range(cone.dim) if j != i]
    low = [j for j in others if dot(m, cone.normals[j]) <= 0]
    if low:
        c = min(dot(m, cone.normals[j]) for j in low)
        shift = [0] * cone.dim
        for j in low:
            shift = [s + a for s, a in zip(shift, cone.rays[j])]
        m = tuple(x + (1 - c) * s for x, s in zip(m, shift))
    if dot(m, u) != 1 or any(dot(m, cone.normals[j]) < 1 for j in others):
        raise VerificationError("dual witness construction failed its postconditions")
    return tuple(m)
