"""The Hibi ring K[P] of a finite poset: graded slices of the canonical module,
anticanonical module and trace ideal, Gorenstein-type classification, levelness,
and the dimension of the non-Gorenstein locus via face enumeration.

Exponent vectors are tuples ``(m(-inf), m(v_1), ..., m(v_n))`` in the element
order of the poset; the value at +inf is identically 0 and not stored.  The
first coordinate is the t-exponent, which is the degree in the standard
grading.
"""

from __future__ import annotations

from dataclasses import dataclass
from enum import Enum
from functools import lru_cache

from .errors import DomainError, InputError, ResourceError, VerificationError
from .poset import Poset, PosetHat, connected_components, is_pure, poset_rank

Exponent = tuple[int, ...]


@dataclass(frozen=True)
class GradedSlice:
    """All exponent vectors of one graded piece (t-exponent = degree)."""

    degree: int
    exponents: frozenset[Exponent]

    def __len__(self) -> int:
        return len(self.exponents)

    def __iter__(self):
        return iter(sorted(self.exponents))

    def __contains__(self, vec) -> bool:
        return tuple(vec) in self.exponents


class GorensteinStatus(str, Enum):
    GORENSTEIN = "Gorenstein"
    NEARLY_GORENSTEIN = "NearlyGorenstein"
    PUNCTURED_GORENSTEIN = "PuncturedGorenstein"
    NEITHER = "Neither"


@dataclass(frozen=True)
class ComponentInfo:
    elements: tuple[str, ...]
    size: int
    rank: int
    pure: bool
    a_invariant: int


@dataclass(frozen=True)
class HibiClassification:
    dimension: int
    components: tuple[ComponentInfo, ...]
    trace_power: int  # N = max rank spread; tr = m^N when all components are pure
    status: GorensteinStatus
    trace_is_unit: bool
    slice_checked_to: int
    impure_witness: str | None


@dataclass(frozen=True)
class ModuleGenerators:
    generators: tuple[tuple[int, Exponent], ...]  # (degree, exponent) pairs
    alpha: int
    beta: int
    stabilized_by_heuristic: bool

    @property
    def exponents(self) -> tuple[Exponent, ...]:
        return tuple(g for _, g in self.generators)

    @property
    def degrees(self) -> tuple[int, ...]:
        return tuple(d for d, _ in self.generators)


@dataclass(frozen=True)
class LocusReport:
    dimension: int
    locus_dimension: int
    trace_height: int
    trace_is_unit: bool
    trace_generators: tuple[Exponent, ...]
    stabilized_by_heuristic: bool


@dataclass(frozen=True)
class TraceMembership:
    member: bool
    canonical_part: Exponent | None
    anticanonical_part: Exponent | None


def _require_nonempty(poset: Poset):
    if poset.n == 0:
        raise InputError("the empty poset has no Hibi ring")


@lru_cache(maxsize=4096)
def _hat(poset: Poset) -> PosetHat:
    return PosetHat(poset)


def canonical_alpha(poset: Poset) -> int:
    """Least degree of a nonzero canonical slice (= rank of P^)."""
    return _hat(poset).rank_to_top(0)


def anticanonical_alpha(poset: Poset) -> int:
    """Least degree of a nonzero anticanonical slice (= -dist(-inf, +inf))."""
    return -_hat(poset).dist_to_top(0)


def _feasible(poset: Poset, vec, shift: int) -> bool:
    """Check m(u) >= m(v) + shift on every cover of P^ (value at +inf is 0)."""
    hat = _hat(poset)
    top = hat.top

    def val(i):
        return 0 if i == top else vec[i]

    return all(val(i) >= val(j) + shift for i, j in hat.cover_index_pairs())


def canonical_feasible(poset: Poset, vec) -> bool:
    return _feasible(poset, vec, 1)


def anticanonical_feasible(poset: Poset, vec) -> bool:
    return _feasible(poset, vec, -1)


def ring_feasible(poset: Poset, vec) -> bool:
    return _feasible(poset, vec, 0)


@lru_cache(maxsize=8192)
def _slice_set(poset: Poset, degree: int, shift: int) -> frozenset[Exponent]:
    """Enumerate one graded slice by descending assignment over P^.

    Nodes are processed top-down (reverse topological order), so each node's
    lower bound comes from its upper covers; the upper bound comes from the
    longest (shift=1) or shortest (shift=-1) chain down to -inf, whose value
    is pinned to the degree.
    """
    hat = _hat(poset)
    n = poset.n
    top = hat.top

    if n == 0:
        return frozenset([(degree,)]) if degree >= shift else frozenset()

    order = [i for i in reversed(hat.topological_order()) if 0 < i < top]
    values = [0] * (n + 2)
    values[0] = degree
    out: list[Exponent] = []

    def upper_bound(i: int) -> int:
        if shift == 1:
            return degree - hat.rank_from_bottom(i)
        if shift == -1:
            return degree + hat.dist_from_bottom(i)
        return degree

    def assign(pos: int):
        if pos == len(order):
            if all(degree >= values[j] + shift for j in hat.up_covers(0)):
                out.append((degree, *values[1:n + 1]))
            return
        i = order[pos]
        lb = max((values[j] if j != top else 0) + shift for j in hat.up_covers(i))
        for v in range(lb, upper_bound(i) + 1):
            values[i] = v
            assign(pos + 1)

    assign(0)
    return frozenset(out)


def canonical_slice(poset: Poset, degree: int) -> GradedSlice:
    """Exponents with m(u) >= m(v) + 1 on covers of P^ and t-exponent = degree."""
    _require_nonempty(poset)
    return GradedSlice(degree, _slice_set(poset, degree, 1))


def anticanonical_slice(poset: Poset, degree: int) -> GradedSlice:
    """Exponents with m(u) >= m(v) - 1 on covers of P^; degree may be negative."""
    _require_nonempty(poset)
    return GradedSlice(degree, _slice_set(poset, degree, -1))


def ring_slice(poset: Poset, degree: int) -> GradedSlice:
    """Degree-k monomials of K[P] itself (m(u) >= m(v) >= 0 on covers)."""
    _require_nonempty(poset)
    return GradedSlice(degree, _slice_set(poset, degree, 0))


def maximal_ideal_power_slice(poset: Poset, power: int, degree: int) -> GradedSlice:
    """Degree-k slice of m^power.

    K[P] is standard graded and generated in degree 1, so (m^N)_k is the full
    ring slice for k >= N and zero below.
    """
    _require_nonempty(poset)
    if degree < power:
        return GradedSlice(degree, frozenset())
    return ring_slice(poset, degree)


def add_exponents(a: Exponent, b: Exponent) -> Exponent:
    return tuple(x + y for x, y in zip(a, b, strict=True))


def sub_exponents(a: Exponent, b: Exponent) -> Exponent:
    return tuple(x - y for x, y in zip(a, b, strict=True))


def trace_slice(poset: Poset, degree: int) -> GradedSlice:
    """Degree-k slice of tr(omega) as the sumset over canonical x anticanonical
    pieces with degrees summing to k."""
    _require_nonempty(poset)
    lo = canonical_alpha(poset)
    hi = degree - anticanonical_alpha(poset)
    out: set[Exponent] = set()
    for i in range(lo, hi + 1):
        can = _slice_set(poset, i, 1)
        if not can:
            continue
        anti = _slice_set(poset, degree - i, -1)
        if not anti:
            continue
        for m in can:
            for mp in anti:
                out.add(add_exponents(m, mp))
    return GradedSlice(degree, frozenset(out))


def trace_membership(poset: Poset, vec) -> TraceMembership:
    """Decide whether a semigroup exponent lies in tr(omega), with a witness.

    The canonical summand is confined to degrees between rank(P^) and
    deg(vec) + dist(-inf, +inf), since the anticanonical complement needs
    m'(v) >= -dist(v, +inf) at every coordinate.
    """
    _require_nonempty(poset)
    vec = tuple(vec)
    if len(vec) != poset.n + 1:
        raise InputError(f"exponent needs {poset.n + 1} coordinates, got {len(vec)}")
    if not ring_feasible(poset, vec) or any(x < 0 for x in vec):
        raise InputError("exponent is not a monomial of the Hibi ring")
    for i in range(canonical_alpha(poset), vec[0] - anticanonical_alpha(poset) + 1):
        for m in sorted(_slice_set(poset, i, 1)):
            rest = sub_exponents(vec, m)
            if anticanonical_feasible(poset, rest):
                return TraceMembership(True, m, rest)
    return TraceMembership(False, None, None)


def split_ring_element(poset: Poset, vec, part_degree: int) -> tuple[Exponent, Exponent]:
    """Split a degree-d ring exponent into feasible pieces of degrees a and d-a.

    Uses the staircase decomposition: the degree-a part takes min(m(v), a)
    at each element.  Both parts are checked for feasibility.
    """
    vec = tuple(vec)
    a = part_degree
    if not (0 <= a <= vec[0]):
        raise DomainError(f"part degree {a} outside [0, {vec[0]}]")
    first = (a, *(min(x, a) for x in vec[1:]))
    second = sub_exponents(vec, first)
    if not (ring_feasible(poset, first) and ring_feasible(poset, second)):
        raise VerificationError("staircase split produced an infeasible part")
    return first, second


def dimension_and_a_invariants(poset: Poset) -> tuple[int, tuple[int, ...]]:
    """dim K[P] = |P| + 1 and per-component a-invariants -(rank P_i + 2)."""
    _require_nonempty(poset)
    comps = connected_components(poset)
    dims = [c.n + 1 for c in comps]
    a_invs = tuple(-(poset_rank(c) + 2) for c in comps)
    total = sum(dims) - (len(comps) - 1)
    return total, a_invs


def _module_generators(poset: Poset, shift: int, degree_bound: int | None) -> ModuleGenerators:
    _require_nonempty(poset)
    hat = _hat(poset)
    rank_hat = hat.rank_to_top(0)
    alpha = canonical_alpha(poset) if shift == 1 else anticanonical_alpha(poset)
    if degree_bound is not None and degree_bound < alpha:
        raise DomainError(f"degree bound {degree_bound} is below alpha = {alpha}")
    hard_cap = alpha + rank_hat + 64
    sweep_to = degree_bound if degree_bound is not None else hard_cap

    degree_one = _slice_set(poset, 1, 0)
    gens: list[tuple[int, Exponent]] = []
    prev: frozenset[Exponent] = frozenset()
    empty_run = 0
    k = alpha
    while True:
        cur = _slice_set(poset, k, shift)
        reducible = {add_exponents(p, r) for p in prev for r in degree_one}
        new = sorted(cur - reducible)
        gens.extend((k, g) for g in new)
        empty_run = empty_run + 1 if not new else 0
        if empty_run >= 2 and k > alpha + rank_hat + 1:
            heuristic = True
            break
        if k >= sweep_to:
            partial = ModuleGenerators(tuple(gens), alpha,
                                       max((d for d, _ in gens), default=alpha), False)
            raise ResourceError(
                f"generator search reached degree {k} without stabilizing",
                partial=partial,
            )
        prev = cur
        k += 1
    beta = max(d for d, _ in gens)
    return ModuleGenerators(tuple(gens), alpha, beta, heuristic)


def minimal_canonical_generators(poset: Poset, degree_bound: int | None = None) -> ModuleGenerators:
    """Minimal generators of the canonical module, by stabilized degree sweep.

    A slice element is a generator iff it is not a degree-1 ring element plus
    a module element one degree down (K[P] is generated in degree 1).  The
    sweep stops after two consecutive generator-free degrees past
    alpha + rank(P^) + 1; that cutoff is a heuristic and is flagged.
    """
    return _module_generators(poset, 1, degree_bound)


def minimal_anticanonical_generators(poset: Poset, degree_bound: int | None = None) -> ModuleGenerators:
    return _module_generators(poset, -1, degree_bound)


def is_level(poset: Poset) -> bool:
    """True iff all minimal generators of the canonical module share one degree."""
    gens = minimal_canonical_generators(poset)
    return len(set(gens.degrees)) == 1


def _impure_witness(poset: Poset) -> str | None:
    hat = _hat(poset)
    for i in range(1, poset.n + 1):
        if hat.rank_to_top(i) != hat.dist_to_top(i):
            return poset.elements[i - 1]
    return None


def classify(poset: Poset, slice_bound: int | None = None) -> HibiClassification:
    """Gorenstein-type status of K[P] from purity of the components.

    When every component is pure the theorem gives tr(omega) = m^N with
    N the rank spread; the slice identity is re-verified degree by degree up
    to ``slice_bound`` (default N + rank(P^) + 2) against the sumset trace.
    """
    _require_nonempty(poset)
    comps = connected_components(poset)
    infos = []
    for c in comps:
        infos.append(ComponentInfo(
            elements=c.elements,
            size=c.n,
            rank=poset_rank(c),
            pure=is_pure(c),
            a_invariant=-(poset_rank(c) + 2),
        ))
    ranks = [ci.rank for ci in infos]
    n_power = max(ranks) - min(ranks)
    all_pure = all(ci.pure for ci in infos)
    dimension = poset.n + 1

    if all_pure and n_power == 0:
        status = GorensteinStatus.GORENSTEIN
    elif all_pure and n_power <= 1:
        status = GorensteinStatus.NEARLY_GORENSTEIN
    elif all_pure:
        status = GorensteinStatus.PUNCTURED_GORENSTEIN
    else:
        status = GorensteinStatus.NEITHER

    # Hibi's criterion: Gorenstein iff P is pure as a whole.
    if (status is GorensteinStatus.GORENSTEIN) != is_pure(poset):
        raise VerificationError("purity criterion disagreed with component ranks")

    checked_to = -1
    if all_pure:
        if slice_bound is None:
            slice_bound = n_power + _hat(poset).rank_to_top(0) + 2
        for k in range(slice_bound + 1):
            expected = maximal_ideal_power_slice(poset, n_power, k)
            got = trace_slice(poset, k)
            if got.exponents != expected.exponents:
                raise VerificationError(
                    f"trace slice at degree {k} differs from (m^{n_power})_{k}"
                )
        checked_to = slice_bound

    return HibiClassification(
        dimension=dimension,
        components=tuple(infos),
        trace_power=n_power,
        status=status,
        trace_is_unit=(status is GorensteinStatus.GORENSTEIN),
        slice_checked_to=checked_to,
        impure_witness=None if all_pure else _impure_witness(poset),
    )


def _scc_partition(n_nodes: int, edges) -> list[int]:
    """Strongly connected components by Kosaraju; returns node -> class id."""
    fwd = [[] for _ in range(n_nodes)]
    rev = [[] for _ in range(n_nodes)]
    for i, j in edges:
        fwd[i].append(j)
        rev[j].append(i)

    seen = [False] * n_nodes
    order: list[int] = []
    for start in range(n_nodes):
        if seen[start]:
            continue
        stack = [(start, 0)]
        seen[start] = True
        while stack:
            node, idx = stack.pop()
            if idx < len(fwd[node]):
                stack.append((node, idx + 1))
                nxt = fwd[node][idx]
                if not seen[nxt]:
                    seen[nxt] = True
                    stack.append((nxt, 0))
            else:
                order.append(node)

    comp = [-1] * n_nodes
    label = 0
    for start in reversed(order):
        if comp[start] != -1:
            continue
        stack = [start]
        comp[start] = label
        while stack:
            node = stack.pop()
            for nxt in rev[node]:
                if comp[nxt] == -1:
                    comp[nxt] = label
                    stack.append(nxt)
        label += 1
    return comp


MAX_FACE_SUBSETS = 1 << 22


def non_gorenstein_locus_dimension(poset: Poset,
                                   gen_degree_bound: int | None = None) -> LocusReport:
    """Dimension of V(tr(omega)) by face enumeration of the Hibi cone.

    Faces come from turning subsets of the cover inequalities of P^ into
    equalities; forcing is resolved by contracting strongly connected
    components of the cover digraph with the chosen edges doubled.  A face
    avoids the trace ideal iff no generator exponent is constant on every
    contracted class; the locus dimension is the largest dimension of such a
    face, and the trace height is dim K[P] minus it.
    """
    _require_nonempty(poset)
    can = minimal_canonical_generators(poset, gen_degree_bound)
    anti = minimal_anticanonical_generators(poset, gen_degree_bound)
    trace_gens = sorted({add_exponents(g, h)
                         for g in can.exponents for h in anti.exponents})

    hat = _hat(poset)
    covers = hat.cover_index_pairs()
    n_nodes = hat.n_nodes
    if 1 << len(covers) > MAX_FACE_SUBSETS:
        raise ResourceError(
            f"face enumeration over 2^{len(covers)} subsets exceeds the cap; "
            "use the theorem-based classification instead"
        )

    # Full value vectors with the +inf coordinate appended (always 0).
    gen_vectors = [g + (0,) for g in trace_gens]
    dimension = poset.n + 1
    best = -1
    for mask in range(1 << len(covers)):
        edges = list(covers)
        edges.extend((j, i) for idx, (i, j) in enumerate(covers) if mask >> idx & 1)
        classes = _scc_partition(n_nodes, edges)
        n_classes = max(classes) + 1
        face_dim = n_classes - 1
        if face_dim <= best:
            continue
        contains_generator = False
        for g in gen_vectors:
            rep: dict[int, int] = {}
            ok = True
            for node, cls in enumerate(classes):
                if cls in rep:
                    if rep[cls] != g[node]:
                        ok = False
                        break
                else:
                    rep[cls] = g[node]
            if ok:
                contains_generator = True
                break
        if not contains_generator:
            best = face_dim

    if best == -1:
        return LocusReport(dimension, 0, dimension, True, tuple(trace_gens),
                           can.stabilized_by_heuristic or anti.stabilized_by_heuristic)
    return LocusReport(dimension, best, dimension - best, False, tuple(trace_gens),
                       can.stabilized_by_heuristic or anti.stabilized_by_heuristic)


def monomial_string(poset: Poset, vec) -> str:
    """Render an exponent vector as a monomial in t and x_<label>."""
    vec = tuple(vec)
    parts = []
    if vec[0] == 1:
        parts.append("t")
    elif vec[0] != 0:
        parts.append(f"t^{vec[0]}")
    for label, e in zip(poset.elements, vec[1:]):
        if e == 1:
            parts.append(f"x_{label}")
        elif e != 0:
            parts.append(f"x_{label}^{e}")
    return "*".join(parts) if parts else "1"


def exponent_from_mapping(poset: Poset, mapping) -> Exponent:
    """Build an exponent tuple from a {label: value} mapping plus the t value.

    The t-exponent is looked up under the key "t".
    """
    vec = [mapping.get("t", 0)]
    vec.extend(mapping.get(e, 0) for e in poset.elements)
    return tuple(vec)
