"""Finite permutation groups by full enumeration.

Desk-scale engine: groups are closed breadth-first from their generators
(capped at 10**5 elements) and stored as explicit element tuples, which
keeps every later query (cosets, double cosets, cores, conjugacy of
subgroups) simple and deterministic.  Composition is left-to-right:
(p * q) means apply p, then q, so that right actions satisfy
x.(pq) = (x.p).q without any flipping.

Canonical subgroup labels: for a subgroup H of G, the key is the sorted
element tuple of the lexicographically least G-conjugate of H; two
subgroups are conjugate in G exactly when their keys coincide.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache
from typing import Iterable, Optional, Sequence

from .errors import CapExceeded, ValidationError

GROUP_ORDER_CAP = 100_000


class Perm:
    """A permutation of {0..k-1}, stored as the tuple of images."""

    __slots__ = ("images",)

    def __init__(self, images: Sequence[int]):
        images = tuple(images)
        if sorted(images) != list(range(len(images))):
            raise ValidationError(f"not a permutation: {images!r}")
        self.images = images

    @classmethod
    def identity(cls, degree: int) -> "Perm":
        return cls(range(degree))

    @classmethod
    def from_cycles(cls, degree: int, cycles: Sequence[Sequence[int]]) -> "Perm":
        images = list(range(degree))
        for cyc in cycles:
            for a, b in zip(cyc, cyc[1:] + type(cyc)([cyc[0]])):
                images[a] = b
        return cls(images)

    @property
    def degree(self) -> int:
        return len(self.images)

    def __call__(self, point: int) -> int:
        return self.images[point]

    def __mul__(self, other: "Perm") -> "Perm":
        # apply self first, then other
        if self.degree != other.degree:
            raise ValidationError("degree mismatch in composition")
        return Perm(tuple(other.images[i] for i in self.images))

    def inverse(self) -> "Perm":
        out = [0] * self.degree
        for i, img in enumerate(self.images):
            out[img] = i
        return Perm(out)

    def is_identity(self) -> bool:
        return all(i == img for i, img in enumerate(self.images))

    def cycles(self) -> list[tuple[int, ...]]:
        seen = [False] * self.degree
        out = []
        for start in range(self.degree):
            if seen[start] or self.images[start] == start:
                seen[start] = True
                continue
            cyc = [start]
            seen[start] = True
            nxt = self.images[start]
            while nxt != start:
                cyc.append(nxt)
                seen[nxt] = True
                nxt = self.images[nxt]
            out.append(tuple(cyc))
        return out

    def __eq__(self, other):
        return isinstance(other, Perm) and self.images == other.images

    def __lt__(self, other):
        return self.images < other.images

    def __le__(self, other):
        return self.images <= other.images

    def __hash__(self):
        return hash(self.images)

    def __repr__(self):
        cyc = self.cycles()
        if not cyc:
            return "()"
        return "".join("(" + " ".join(map(str, c)) + ")" for c in cyc)


class PermGroup:
    """A finite permutation group with its fully enumerated element set."""

    def __init__(self, degree: int, generators: Sequence[Perm], elements: Sequence[Perm]):
        self.degree = degree
        self.generators = tuple(generators)
        self.elements = tuple(elements)
        self.order = len(self.elements)
        self._index = {g: i for i, g in enumerate(self.elements)}
        self._subgroup_keys: dict[frozenset, tuple] = {}

    @property
    def identity(self) -> Perm:
        return Perm.identity(self.degree)

    def __contains__(self, g: Perm) -> bool:
        return g in self._index

    def __iter__(self):
        return iter(self.elements)

    def __len__(self):
        return self.order

    def element_set(self) -> frozenset[Perm]:
        return frozenset(self.elements)

    def __repr__(self):
        return f"PermGroup(degree={self.degree}, order={self.order})"

    def conjugacy_classes(self) -> list[tuple[Perm, ...]]:
        """Conjugacy classes of elements, each sorted, in order of least member."""
        remaining = set(self.elements)
        classes = []
        for g in self.elements:
            if g not in remaining:
                continue
            cls = {x.inverse() * g * x for x in self.elements}
            remaining -= cls
            classes.append(tuple(sorted(cls)))
        return sorted(classes, key=lambda c: c[0].images)


def group_closure(degree: int, generators: Iterable[Perm],
                  cap: int = GROUP_ORDER_CAP) -> PermGroup:
    """Close the generators breadth-first; deterministic element order."""
    gens = [g if isinstance(g, Perm) else Perm(g) for g in generators]
    for g in gens:
        if g.degree != degree:
            raise ValidationError("generator degree mismatch")
    identity = Perm.identity(degree)
    elements = [identity]
    seen = {identity}
    frontier = [identity]
    while frontier:
        new_frontier = []
        for x in frontier:
            for g in gens:
                y = x * g
                if y not in seen:
                    seen.add(y)
                    elements.append(y)
                    new_frontier.append(y)
                    if len(elements) > cap:
                        raise CapExceeded(
                            f"group order exceeds the enumeration cap {cap}"
                        )
        frontier = new_frontier
    return PermGroup(degree, gens, elements)


# -- standard groups ---------------------------------------------------------

def symmetric_group(n: int) -> PermGroup:
    if n < 1:
        raise ValidationError("need n >= 1")
    gens = []
    if n >= 2:
        gens.append(Perm.from_cycles(n, [(0, 1)]))
    if n >= 3:
        gens.append(Perm.from_cycles(n, [tuple(range(n))]))
    return group_closure(n, gens)


def alternating_group(n: int) -> PermGroup:
    if n < 3:
        return group_closure(max(n, 1), [])
    gens = [Perm.from_cycles(n, [(i, i + 1, i + 2)]) for i in range(n - 2)]
    return group_closure(n, gens)


def cyclic_group(n: int) -> PermGroup:
    if n < 1:
        raise ValidationError("need n >= 1")
    if n == 1:
        return group_closure(1, [])
    return group_closure(n, [Perm.from_cycles(n, [tuple(range(n))])])


def dihedral_group(n: int) -> PermGroup:
    """Symmetries of the n-gon on points 0..n-1 (order 2n)."""
    if n < 3:
        raise ValidationError("need n >= 3")
    rot = Perm.from_cycles(n, [tuple(range(n))])
    refl = Perm(tuple((n - i) % n for i in range(n)))
    return group_closure(n, [rot, refl])


# -- subgroup machinery -------------------------------------------------------

def subgroup(G: PermGroup, generators: Iterable[Perm]) -> PermGroup:
    H = group_closure(G.degree, list(generators), cap=G.order)
    for h in H.elements:
        if h not in G:
            raise ValidationError("generators do not lie in the ambient group")
    return H


def is_subgroup(G: PermGroup, H: PermGroup) -> bool:
    return H.degree == G.degree and all(h in G for h in H.elements)


def trivial_subgroup(G: PermGroup) -> PermGroup:
    return group_closure(G.degree, [])


def intersection(G: PermGroup, A: PermGroup, B: PermGroup) -> PermGroup:
    common = sorted(set(A.elements) & set(B.elements))
    return PermGroup(G.degree, tuple(common), tuple(_closure_order(common)))


def _closure_order(elements: Sequence[Perm]) -> list[Perm]:
    # deterministic ordering for an already-closed element set
    return sorted(elements)


def conjugate_subgroup(G: PermGroup, H: PermGroup, g: Perm) -> PermGroup:
    ginv = g.inverse()
    elems = sorted(ginv * h * g for h in H.elements)
    return PermGroup(G.degree, tuple(elems), tuple(elems))


def right_cosets(G: PermGroup, H: PermGroup) -> list[tuple[Perm, ...]]:
    """Right cosets Hg, each as a sorted tuple, ordered by least member."""
    _require_subgroup(G, H)
    hset = set(H.elements)
    seen: set[Perm] = set()
    cosets = []
    for g in G.elements:
        if g in seen:
            continue
        coset = sorted(h * g for h in hset)
        seen.update(coset)
        cosets.append(tuple(coset))
    return sorted(cosets, key=lambda c: c[0].images)


def double_cosets(G: PermGroup, H1: PermGroup, H2: PermGroup) -> list[dict]:
    """(H1, H2)-double cosets, each with its least-element representative."""
    _require_subgroup(G, H1)
    _require_subgroup(G, H2)
    seen: set[Perm] = set()
    out = []
    for g in G.elements:
        if g in seen:
            continue
        block = {a * g * b for a in H1.elements for b in H2.elements}
        seen.update(block)
        members = tuple(sorted(block))
        out.append({"representative": members[0], "elements": members,
                    "size": len(members)})
    out.sort(key=lambda d: d["representative"].images)
    return out


def core(G: PermGroup, H: PermGroup) -> PermGroup:
    """Intersection of all G-conjugates of H; trivial iff H is corefree."""
    _require_subgroup(G, H)
    common = set(H.elements)
    for g in G.elements:
        ginv = g.inverse()
        common &= {ginv * h * g for h in H.elements}
        if len(common) == 1:
            break
    elems = sorted(common)
    return PermGroup(G.degree, tuple(elems), tuple(elems))


def is_normal(G: PermGroup, H: PermGroup) -> bool:
    hset = set(H.elements)
    return all(
        (g.inverse() * h * g) in hset for g in G.generators or G.elements for h in H.elements
    )


def subgroup_class_key(G: PermGroup, H: PermGroup) -> tuple:
    """Canonical conjugacy-class label: sorted elements of the least conjugate."""
    _require_subgroup(G, H)
    hkey = frozenset(H.elements)
    cached = G._subgroup_keys.get(hkey)
    if cached is not None:
        return cached
    best: Optional[tuple] = None
    for g in G.elements:
        ginv = g.inverse()
        conj = tuple(sorted((ginv * h * g).images for h in H.elements))
        if best is None or conj < best:
            best = conj
    key = ("subgroup-class", len(H.elements), best)
    G._subgroup_keys[hkey] = key
    return key


@dataclass(frozen=True)
class SubgroupClass:
    """A conjugacy class of subgroups, with its canonical representative."""

    key: tuple
    representative: PermGroup

    @property
    def order(self) -> int:
        return self.representative.order

    def __eq__(self, other):
        return isinstance(other, SubgroupClass) and self.key == other.key

    def __hash__(self):
        return hash(self.key)


def subgroup_class(G: PermGroup, H: PermGroup) -> SubgroupClass:
    key = subgroup_class_key(G, H)
    elems = tuple(Perm(images) for images in key[2])
    rep = PermGroup(G.degree, elems, elems)
    return SubgroupClass(key=key, representative=rep)


def all_subgroups(G: PermGroup) -> list[PermGroup]:
    """Every subgroup of G, found by closing extensions; sorted by order."""
    triv = trivial_subgroup(G)
    found: dict[frozenset, PermGroup] = {triv.element_set(): triv}
    frontier = [triv]
    while frontier:
        new_frontier = []
        for H in frontier:
            for g in G.elements:
                if g in H.element_set():
                    continue
                K = group_closure(G.degree, list(H.generators) + [g], cap=G.order)
                kset = K.element_set()
                if kset not in found:
                    found[kset] = K
                    new_frontier.append(K)
        frontier = new_frontier
    return sorted(found.values(), key=lambda H: (H.order, tuple(h.images for h in H.elements)))


def min_core_conjugates(G: PermGroup, H: PermGroup, cap: int = 4096) -> int:
    """Least t such that some t conjugates of H intersect exactly in the core.

    Breadth-first over distinct intersections of conjugates; `cap` bounds
    the number of distinct intersections explored.
    """
    _require_subgroup(G, H)
    core_set = core(G, H).element_set()
    conjugates = []
    seen_conj = set()
    for g in G.elements:
        ginv = g.inverse()
        c = frozenset(ginv * h * g for h in H.elements)
        if c not in seen_conj:
            seen_conj.add(c)
            conjugates.append(c)
    level = set(conjugates)
    visited = set(level)
    t = 1
    while True:
        if core_set in level:
            return t
        nxt = set()
        for x in level:
            for c in conjugates:
                y = x & c
                if y not in visited:
                    visited.add(y)
                    nxt.add(y)
                    if len(visited) > cap:
                        raise CapExceeded("conjugate-intersection search cap exceeded")
        if not nxt:
            raise AssertionError("core not reached; core computation disagrees")
        level = nxt
        t += 1


def _require_subgroup(G: PermGroup, H: PermGroup) -> None:
    if not is_subgroup(G, H):
        raise ValidationError("not a subgroup of the ambient group")


# -- JSON --------------------------------------------------------------------

def group_to_json(G: PermGroup) -> dict:
    return {
        "degree": G.degree,
        "generators": [list(g.images) for g in G.generators],
    }


def group_from_json(obj: dict, cap: int = GROUP_ORDER_CAP) -> PermGroup:
    try:
        degree = obj["degree"]
        gens = obj["generators"]
    except (KeyError, TypeError):
        raise ValidationError('group JSON needs "degree" and "generators"')
    if not isinstance(degree, int) or degree < 1:
        raise ValidationError("degree must be a positive integer")
    perms = []
    for images in gens:
        if not isinstance(images, list):
            raise ValidationError("generators must be lists of images")
        perms.append(Perm(images))
    return group_closure(degree, perms, cap=cap)
