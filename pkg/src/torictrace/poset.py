"""Finite posets stored as Hasse diagrams, plus the constructions feeding Hibi rings.

A :class:`Poset` keeps an ordered tuple of opaque string labels and the set of
cover relations ``u <. v``.  Arbitrary order generators are accepted and
canonicalized to the transitive reduction, because everything downstream
(canonical-module inequalities, face enumeration) quantifies over covers of
the bounded poset P^ = P + {-inf, +inf}.
"""

from __future__ import annotations

from itertools import product

from .errors import DomainError, InputError, ResourceError

DEFAULT_IDEAL_LIMIT = 20


class _Sentinel:
    __slots__ = ("_name",)

    def __init__(self, name: str):
        self._name = name

    def __repr__(self) -> str:
        return self._name


#: Adjoined global minimum / maximum of the bounded poset P^.
MINUS_INF = _Sentinel("-inf")
PLUS_INF = _Sentinel("+inf")


class Poset:
    """Immutable finite poset; ``covers`` is always the transitive reduction."""

    __slots__ = ("elements", "covers", "_index", "_above", "_up_covers", "_down_covers")

    def __init__(self, elements, relations=()):
        elements = tuple(str(e) for e in elements)
        index: dict[str, int] = {}
        for label in elements:
            if label in index:
                raise InputError(f"duplicate element label {label!r}")
            index[label] = len(index)
        n = len(elements)

        succ = [set() for _ in range(n)]
        for u, v in relations:
            u, v = str(u), str(v)
            if u not in index or v not in index:
                missing = u if u not in index else v
                raise InputError(f"relation mentions unknown element {missing!r}")
            if u == v:
                raise InputError(f"malformed poset: cycle through {[u, u]}")
            succ[index[u]].add(index[v])

        above = _transitive_closure(succ, elements)
        covers = []
        for i in range(n):
            for j in sorted(above[i]):
                if not any(j in above[w] for w in above[i]):
                    covers.append((elements[i], elements[j]))
        covers.sort(key=lambda uv: (index[uv[0]], index[uv[1]]))

        object.__setattr__(self, "elements", elements)
        object.__setattr__(self, "covers", tuple(covers))
        object.__setattr__(self, "_index", index)
        object.__setattr__(self, "_above", tuple(frozenset(s) for s in above))
        up = [[] for _ in range(n)]
        down = [[] for _ in range(n)]
        for u, v in covers:
            up[index[u]].append(index[v])
            down[index[v]].append(index[u])
        object.__setattr__(self, "_up_covers", tuple(tuple(x) for x in up))
        object.__setattr__(self, "_down_covers", tuple(tuple(x) for x in down))

    def __setattr__(self, name, value):
        raise AttributeError("Poset instances are immutable")

    @property
    def n(self) -> int:
        return len(self.elements)

    def index(self, label: str) -> int:
        try:
            return self._index[label]
        except KeyError:
            raise InputError(f"unknown element {label!r}") from None

    def less(self, u: str, v: str) -> bool:
        """Strict order comparison u < v."""
        return self.index(v) in self._above[self.index(u)]

    def leq(self, u: str, v: str) -> bool:
        return u == v or self.less(u, v)

    def above_indices(self, i: int) -> frozenset[int]:
        return self._above[i]

    def up_cover_indices(self, i: int) -> tuple[int, ...]:
        return self._up_covers[i]

    def down_cover_indices(self, i: int) -> tuple[int, ...]:
        return self._down_covers[i]

    def maximal_elements(self) -> tuple[str, ...]:
        return tuple(e for i, e in enumerate(self.elements) if not self._up_covers[i])

    def minimal_elements(self) -> tuple[str, ...]:
        return tuple(e for i, e in enumerate(self.elements) if not self._down_covers[i])

    def linear_extension(self) -> tuple[int, ...]:
        """Indices in a topological order of the cover DAG (stable by label order)."""
        indeg = [len(self._down_covers[i]) for i in range(self.n)]
        order = []
        ready = [i for i in range(self.n) if indeg[i] == 0]
        while ready:
            i = ready.pop(0)
            order.append(i)
            for j in self._up_covers[i]:
                indeg[j] -= 1
                if indeg[j] == 0:
                    ready.append(j)
        return tuple(order)

    def __eq__(self, other) -> bool:
        return (
            isinstance(other, Poset)
            and self.elements == other.elements
            and self.covers == other.covers
        )

    def __hash__(self) -> int:
        return hash((self.elements, self.covers))

    def __repr__(self) -> str:
        rels = ", ".join(f"{u}<{v}" for u, v in self.covers)
        return f"Poset({list(self.elements)!r}, [{rels}])"


def _transitive_closure(succ, elements):
    """Strict-order closure of a successor relation; raises on directed cycles."""
    n = len(succ)
    above = [set() for _ in range(n)]
    state = [0] * n  # 0 unvisited, 1 on stack, 2 done
    path: list[int] = []

    def visit(i: int):
        state[i] = 1
        path.append(i)
        for j in succ[i]:
            if state[j] == 1:
                cycle = path[path.index(j):] + [j]
                labels = [elements[k] for k in cycle]
                raise InputError(f"malformed poset: cycle through {labels}")
            if state[j] == 0:
                visit(j)
            above[i].add(j)
            above[i] |= above[j]
        path.pop()
        state[i] = 2

    for i in range(n):
        if state[i] == 0:
            visit(i)
    return above


def parse_poset(text: str) -> Poset:
    """Parse the poset text format.

    Each line holds comma-separated items; an item is either a relation
    ``u < v`` or a single token declaring an isolated element.  ``#`` starts a
    comment, blank lines are ignored.  Relations may be non-reduced; the result
    is always transitively reduced.
    """
    elements: list[str] = []
    seen: set[str] = set()
    relations: list[tuple[str, str]] = []

    def note(label: str):
        if label not in seen:
            seen.add(label)
            elements.append(label)

    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        for item in line.split(","):
            item = item.strip()
            if not item:
                continue
            if "<" in item:
                parts = [p.strip() for p in item.split("<")]
                if len(parts) != 2 or not parts[0] or not parts[1]:
                    raise InputError(f"line {lineno}: cannot parse relation {item!r}")
                u, v = parts
                if u == v:
                    raise InputError(f"line {lineno}: malformed poset: cycle through {[u, u]}")
                note(u)
                note(v)
                relations.append((u, v))
            else:
                if " " in item:
                    raise InputError(f"line {lineno}: cannot parse item {item!r}")
                note(item)
    return Poset(elements, relations)


def poset_to_text(poset: Poset) -> str:
    lines = [f"{u} < {v}" for u, v in poset.covers]
    used = {u for uv in poset.covers for u in uv}
    lines.extend(e for e in poset.elements if e not in used)
    return "\n".join(lines) + "\n"


def connected_components(poset: Poset) -> list[Poset]:
    """Components of the comparability graph, ordered by least element label."""
    n = poset.n
    parent = list(range(n))

    def find(i):
        while parent[i] != i:
            parent[i] = parent[parent[i]]
            i = parent[i]
        return i

    for u, v in poset.covers:
        a, b = find(poset.index(u)), find(poset.index(v))
        if a != b:
            parent[a] = b

    groups: dict[int, list[int]] = {}
    for i in range(n):
        groups.setdefault(find(i), []).append(i)

    comps = []
    for members in groups.values():
        members.sort()
        labels = [poset.elements[i] for i in members]
        member_set = set(labels)
        rels = [(u, v) for u, v in poset.covers if u in member_set]
        comps.append(Poset(labels, rels))
    comps.sort(key=lambda c: min(c.elements))
    return comps


class PosetHat:
    """P with adjoined -inf below everything and +inf above everything.

    Hat nodes are indexed 0 (= -inf), 1..n (base elements in order), n+1 (= +inf).
    """

    __slots__ = ("base", "_covers", "_up", "_down", "_rank_from_bottom",
                 "_dist_from_bottom", "_rank_to_top", "_dist_to_top")

    def __init__(self, base: Poset):
        self.base = base
        n = base.n
        covers = [(0, n + 1)] if n == 0 else []
        for e in base.minimal_elements():
            covers.append((0, base.index(e) + 1))
        for u, v in base.covers:
            covers.append((base.index(u) + 1, base.index(v) + 1))
        for e in base.maximal_elements():
            covers.append((base.index(e) + 1, n + 1))
        covers.sort()
        self._covers = tuple(covers)

        up = [[] for _ in range(n + 2)]
        down = [[] for _ in range(n + 2)]
        for i, j in covers:
            up[i].append(j)
            down[j].append(i)
        self._up = tuple(tuple(x) for x in up)
        self._down = tuple(tuple(x) for x in down)

        order = self.topological_order()
        self._rank_from_bottom = self._longest_from(0, order, self._up)
        self._rank_to_top = self._longest_from(n + 1, tuple(reversed(order)), self._down)
        self._dist_from_bottom = self._shortest_from(0, order, self._up)
        self._dist_to_top = self._shortest_from(n + 1, tuple(reversed(order)), self._down)

    @property
    def n_nodes(self) -> int:
        return self.base.n + 2

    @property
    def top(self) -> int:
        return self.base.n + 1

    def cover_index_pairs(self) -> tuple[tuple[int, int], ...]:
        return self._covers

    def up_covers(self, i: int) -> tuple[int, ...]:
        return self._up[i]

    def node_index(self, x) -> int:
        if x is MINUS_INF:
            return 0
        if x is PLUS_INF:
            return self.top
        return self.base.index(x) + 1

    def node_label(self, i: int):
        if i == 0:
            return MINUS_INF
        if i == self.top:
            return PLUS_INF
        return self.base.elements[i - 1]

    def topological_order(self) -> tuple[int, ...]:
        indeg = [len(self._down[i]) for i in range(self.n_nodes)]
        ready = [i for i in range(self.n_nodes) if indeg[i] == 0]
        order = []
        while ready:
            i = ready.pop(0)
            order.append(i)
            for j in self._up[i]:
                indeg[j] -= 1
                if indeg[j] == 0:
                    ready.append(j)
        return tuple(order)

    def _longest_from(self, source, order, forward):
        vals = [None] * self.n_nodes
        vals[source] = 0
        for i in order:
            if vals[i] is None:
                continue
            for j in forward[i]:
                if vals[j] is None or vals[j] < vals[i] + 1:
                    vals[j] = vals[i] + 1
        return tuple(vals)

    def _shortest_from(self, source, order, forward):
        vals = [None] * self.n_nodes
        vals[source] = 0
        for i in order:
            if vals[i] is None:
                continue
            for j in forward[i]:
                if vals[j] is None or vals[j] > vals[i] + 1:
                    vals[j] = vals[i] + 1
        return tuple(vals)

    def rank_from_bottom(self, i: int) -> int:
        return self._rank_from_bottom[i]

    def dist_from_bottom(self, i: int) -> int:
        return self._dist_from_bottom[i]

    def rank_to_top(self, i: int) -> int:
        return self._rank_to_top[i]

    def dist_to_top(self, i: int) -> int:
        return self._dist_to_top[i]

    def rank_and_dist(self, u, v) -> tuple[int, int]:
        """(longest, shortest) chain length from u to v; error if u is not <= v."""
        i, j = self.node_index(u), self.node_index(v)
        if i == j:
            return (0, 0)
        longest = [None] * self.n_nodes
        shortest = [None] * self.n_nodes
        longest[i] = shortest[i] = 0
        for w in self.topological_order():
            if longest[w] is None:
                continue
            for x in self._up[w]:
                if longest[x] is None or longest[x] < longest[w] + 1:
                    longest[x] = longest[w] + 1
                if shortest[x] is None or shortest[x] > shortest[w] + 1:
                    shortest[x] = shortest[w] + 1
        if longest[j] is None:
            raise InputError(f"elements {u!r} and {v!r} are incomparable")
        return (longest[j], shortest[j])


def rank_and_dist(hat: PosetHat, u, v) -> tuple[int, int]:
    return hat.rank_and_dist(u, v)


def hat_rank(poset: Poset) -> int:
    """Longest chain length from -inf to +inf in P^ (= rank P + 2 when P is graded)."""
    return PosetHat(poset).rank_to_top(0)


def poset_rank(poset: Poset) -> int:
    """Maximal chain length within P itself."""
    if poset.n == 0:
        raise InputError("rank of the empty poset is undefined")
    return hat_rank(poset) - 2


def is_pure(poset: Poset) -> bool:
    """True iff all maximal chains of P have equal length.

    Maximal chains of P correspond to -inf..+inf cover paths of P^, so purity
    is equivalent to rank = dist between the adjoined bounds.
    """
    if poset.n == 0:
        raise InputError("purity of the empty poset is undefined")
    hat = PosetHat(poset)
    return hat.rank_to_top(0) == hat.dist_to_top(0)


def order_ideal_masks(poset: Poset, limit: int = DEFAULT_IDEAL_LIMIT) -> list[int]:
    """Bitmasks of all order ideals, built by extension along a linear extension."""
    if poset.n > limit:
        raise ResourceError(
            f"order-ideal enumeration limited to {limit} elements, got {poset.n}"
        )
    below = [0] * poset.n
    for i in range(poset.n):
        for j in poset.above_indices(i):
            below[j] |= 1 << i
    masks = [0]
    for i in poset.linear_extension():
        need = below[i]
        masks += [m | (1 << i) for m in masks if m & need == need]
    masks.sort()
    return masks


def enumerate_order_ideals(poset: Poset, limit: int = DEFAULT_IDEAL_LIMIT) -> list[frozenset[str]]:
    """All downward-closed subsets, deterministically ordered, including {} and P."""
    out = []
    for mask in order_ideal_masks(poset, limit):
        out.append(frozenset(poset.elements[i] for i in range(poset.n) if mask >> i & 1))
    return out


def order_ideal_count(poset: Poset, limit: int = DEFAULT_IDEAL_LIMIT) -> int:
    return len(order_ideal_masks(poset, limit))


def chain(n: int, prefix: str = "v") -> Poset:
    labels = [f"{prefix}{i + 1}" for i in range(n)]
    return Poset(labels, [(labels[i], labels[i + 1]) for i in range(n - 1)])


def antichain(n: int, prefix: str = "v") -> Poset:
    return Poset([f"{prefix}{i + 1}" for i in range(n)])


def disjoint_union(*posets: Poset) -> Poset:
    elements: list[str] = []
    seen: set[str] = set()
    relations: list[tuple[str, str]] = []
    for p in posets:
        for e in p.elements:
            if e in seen:
                raise InputError(f"overlapping label {e!r} in disjoint union")
            seen.add(e)
            elements.append(e)
        relations.extend(p.covers)
    return Poset(elements, relations)


def _fresh_label(taken, base: str = "z") -> str:
    if base not in taken:
        return base
    i = 1
    while f"{base}{i}" in taken:
        i += 1
    return f"{base}{i}"


def bar(poset: Poset, label: str | None = None) -> Poset:
    """Adjoin a new minimum below every element of the poset."""
    if label is None:
        label = _fresh_label(set(poset.elements))
    elif label in poset.elements:
        raise InputError(f"bar label {label!r} collides with an existing element")
    relations = list(poset.covers) + [(label, m) for m in poset.minimal_elements()]
    return Poset([label, *poset.elements], relations)


def ordinal_sum(p1: Poset, p2: Poset, adjoin_min: bool = False,
                adjoin_label: str | None = None) -> Poset:
    """P1 (+) P2: everything in P1 below everything in P2.

    With ``adjoin_min`` the second summand is first replaced by bar(P2).
    """
    if adjoin_min:
        taken = set(p1.elements) | set(p2.elements)
        p2 = bar(p2, adjoin_label if adjoin_label is not None else _fresh_label(taken))
    overlap = set(p1.elements) & set(p2.elements)
    if overlap:
        raise InputError(f"overlapping labels in ordinal sum: {sorted(overlap)}")
    relations = list(p1.covers) + list(p2.covers)
    relations += list(product(p1.maximal_elements(), p2.minimal_elements()))
    return Poset(list(p1.elements) + list(p2.elements), relations)


def dual(poset: Poset) -> Poset:
    return Poset(poset.elements, [(v, u) for u, v in poset.covers])


def relabel(poset: Poset, mapping) -> Poset:
    labels = [mapping[e] for e in poset.elements]
    return Poset(labels, [(mapping[u], mapping[v]) for u, v in poset.covers])


def construct_height_dim_poset(a: int, b: int) -> Poset:
    """Connected poset whose Hibi ring has trace height a and dimension b.

    The construction is chain(b-a-1) (+) bar(chain(a-2) + point); it needs
    4 <= a < b.
    """
    if not (4 <= a < b):
        raise DomainError(f"need 4 <= a < b, got a={a}, b={b}")
    p1 = chain(b - a - 1, prefix="p")
    p2 = disjoint_union(chain(a - 2, prefix="q"), antichain(1, prefix="r"))
    return ordinal_sum(p1, p2, adjoin_min=True, adjoin_label="z")
