"""Exhaustive poset generation, labeled and up to isomorphism.

Posets on k elements are encoded as tuples of strict down-set bitmasks.
Labeled enumeration extends a poset by one element whose down-set D is
down-closed and whose up-set U is up-closed with D already below U, which
produces each labeled poset exactly once.  Isomorphism-free lists come from a
canonical form: the minimum mask encoding over all permutations that respect
element invariants.
"""

from __future__ import annotations

from itertools import permutations

from .poset import Poset

Masks = tuple[int, ...]


def _bits(mask: int):
    i = 0
    while mask:
        if mask & 1:
            yield i
        mask >>= 1
        i += 1


def _above_masks(below: Masks) -> Masks:
    n = len(below)
    above = [0] * n
    for j in range(n):
        for i in _bits(below[j]):
            above[i] |= 1 << j
    return tuple(above)


def _extensions(below: Masks):
    """All ways to add one element: (down-set, up-set) pairs."""
    k = len(below)
    above = _above_masks(below)
    down_closed = [d for d in range(1 << k)
                   if all(below[i] & d == below[i] for i in _bits(d))]
    for d in down_closed:
        allowed = [u for u in range(k) if not d >> u & 1 and below[u] & d == d]
        allowed_mask = sum(1 << u for u in allowed)
        up_sets = [u for u in _submasks(allowed_mask)
                   if all(above[i] & allowed_mask & ~u == 0 for i in _bits(u))]
        for u in up_sets:
            yield d, u


def _submasks(mask: int):
    sub = mask
    while True:
        yield sub
        if sub == 0:
            return
        sub = (sub - 1) & mask


def _extend(below: Masks, down: int, up: int) -> Masks:
    k = len(below)
    new = list(below)
    for u in _bits(up):
        new[u] |= 1 << k
    new.append(down)
    return tuple(new)


def labeled_posets(n: int):
    """Yield the strict-order masks of every labeled poset on n elements."""
    if n == 0:
        yield ()
        return
    for smaller in labeled_posets(n - 1):
        for d, u in _extensions(smaller):
            yield _extend(smaller, d, u)


def count_labeled_posets(n: int) -> int:
    return sum(1 for _ in labeled_posets(n))


def _refined_keys(below: Masks, above: Masks):
    """Element invariants sharpened by Weisfeiler-Leman style rounds."""
    n = len(below)
    keys = [(bin(below[i]).count("1"), bin(above[i]).count("1")) for i in range(n)]
    while True:
        ids = {k: c for c, k in enumerate(sorted(set(keys)))}
        colored = [ids[k] for k in keys]
        new = [(colored[i],
                tuple(sorted(colored[j] for j in _bits(below[i]))),
                tuple(sorted(colored[j] for j in _bits(above[i]))))
               for i in range(n)]
        if len(set(new)) == len(set(keys)):
            return keys
        keys = new


def canonical_form(below: Masks) -> Masks:
    """Minimum encoding over invariant-respecting relabelings."""
    n = len(below)
    above = _above_masks(below)
    keys = _refined_keys(below, above)
    groups: dict = {}
    for i in range(n):
        groups.setdefault(keys[i], []).append(i)
    ordered_groups = [groups[k] for k in sorted(groups)]

    best = None
    for perm_parts in _product_permutations(ordered_groups):
        # position j of the new labeling is taken by old element perm_flat[j]
        perm_flat = [i for part in perm_parts for i in part]
        place = [0] * n
        for new_pos, old in enumerate(perm_flat):
            place[old] = new_pos
        enc = [0] * n
        for old in range(n):
            m = 0
            for b in _bits(below[old]):
                m |= 1 << place[b]
            enc[place[old]] = m
        enc = tuple(enc)
        if best is None or enc < best:
            best = enc
    return best if best is not None else ()


def _product_permutations(groups):
    if not groups:
        yield []
        return
    head, *rest = groups
    for tail in _product_permutations(rest):
        for perm in permutations(head):
            yield [list(perm), *tail]


def _is_connected(below: Masks) -> bool:
    n = len(below)
    if n == 0:
        return False
    above = _above_masks(below)
    seen = 1
    frontier = [0]
    while frontier:
        i = frontier.pop()
        for j in _bits(below[i] | above[i]):
            if not seen >> j & 1:
                seen |= 1 << j
                frontier.append(j)
    return seen == (1 << n) - 1


def posets_up_to_iso(n: int) -> list[Masks]:
    """Canonical forms of all posets on exactly n unlabeled elements."""
    reps = [()]
    for _ in range(n):
        seen = set()
        for rep in reps:
            for d, u in _extensions(rep):
                seen.add(canonical_form(_extend(rep, d, u)))
        reps = sorted(seen)
    return reps


def connected_posets_up_to_iso(n: int) -> list[Masks]:
    return [rep for rep in posets_up_to_iso(n) if _is_connected(rep)]


def masks_to_poset(below: Masks, prefix: str = "v") -> Poset:
    """Convert a mask encoding to a Poset (covers recovered by reduction)."""
    n = len(below)
    labels = [f"{prefix}{i + 1}" for i in range(n)]
    relations = [(labels[i], labels[j]) for j in range(n) for i in _bits(below[j])]
    return Poset(labels, relations)
