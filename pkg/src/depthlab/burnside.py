"""Finite G-sets and Burnside-ring depth bounds.

A GSet stores, for every group element, the full point map, so orbit
decomposition and point stabilizers are direct scans.  Transitive
constituents are labelled by canonical subgroup-class keys, which makes the
decomposition of a product G-set directly comparable with the Mackey
double-coset formula (`mackey_product_classes`), kept here as an
independent oracle.

Depth bounds: tensor powers of the coset G-set of a subgroup only ever
produce constituents labelled by intersections of conjugates of that
subgroup, so the chain of constituent-label sets of V, V + V^2, ...
stabilizes within finitely many steps.  The step count bounds the depth of
the permutation module over any ground field (G-set division implies
module division), and is reported as an upper bound, never as the depth.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Optional, Sequence, Union

from .errors import CapExceeded, ValidationError
from .matrix_depth import DepthReport
from .perm_group import (
    PermGroup,
    Perm,
    core,
    double_cosets,
    conjugate_subgroup,
    intersection,
    is_normal,
    right_cosets,
    subgroup_class_key,
    _require_subgroup,
)

TENSOR_DEGREE_CAP = 24


class GSet:
    """A finite right G-set: opaque point labels plus per-element point maps."""

    def __init__(self, group: PermGroup, points: Sequence, maps: Sequence[Sequence[int]]):
        self.group = group
        self.points = tuple(points)
        self.maps = tuple(tuple(m) for m in maps)
        if len(self.maps) != group.order:
            raise ValidationError("need one point map per group element")
        self._spot_check()

    def _spot_check(self):
        ident_idx = self.group._index[self.group.identity]
        npts = len(self.points)
        if self.maps[ident_idx] != tuple(range(npts)):
            raise ValidationError("identity does not act as the identity map")
        gens = self.group.generators or ()
        for g in gens:
            for h in gens:
                gh = g * h
                mg, mh, mgh = (
                    self.maps[self.group._index[g]],
                    self.maps[self.group._index[h]],
                    self.maps[self.group._index[gh]],
                )
                if tuple(mh[p] for p in mg) != mgh:
                    raise ValidationError("action is not compatible with composition")

    def __len__(self):
        return len(self.points)

    def act(self, point_index: int, g: Perm) -> int:
        return self.maps[self.group._index[g]][point_index]

    def orbits(self) -> list[list[int]]:
        gens = self.group.generators or ()
        gen_maps = [self.maps[self.group._index[g]] for g in gens]
        seen = [False] * len(self.points)
        orbits = []
        for start in range(len(self.points)):
            if seen[start]:
                continue
            orbit = [start]
            seen[start] = True
            queue = [start]
            for p in queue:
                for gm in gen_maps:
                    q = gm[p]
                    if not seen[q]:
                        seen[q] = True
                        orbit.append(q)
                        queue.append(q)
            orbits.append(sorted(orbit))
        return orbits

    def stabilizer(self, point_index: int) -> PermGroup:
        elems = sorted(
            g for g in self.group.elements
            if self.maps[self.group._index[g]][point_index] == point_index
        )
        return PermGroup(self.group.degree, tuple(elems), tuple(elems))

    def constituents(self) -> "BurnsideElement":
        """Multiset of stabilizer-class labels of the transitive constituents."""
        counts: dict[tuple, int] = {}
        reps: dict[tuple, PermGroup] = {}
        total = 0
        for orbit in self.orbits():
            stab = self.stabilizer(orbit[0])
            key = subgroup_class_key(self.group, stab)
            counts[key] = counts.get(key, 0) + 1
            reps.setdefault(key, stab)
            total += self.group.order // stab.order
        if total != len(self.points):
            raise AssertionError("orbit sizes do not add up to the point count")
        return BurnsideElement(self.group, counts, reps)

    def is_union_of_fixed_points(self) -> bool:
        return all(len(o) == 1 for o in self.orbits())


@dataclass
class BurnsideElement:
    """A nonnegative combination of subgroup-class labels."""

    group: PermGroup
    counts: dict
    representatives: dict

    def label_set(self) -> frozenset:
        return frozenset(self.counts)

    def total_points(self) -> int:
        return sum(
            mult * (self.group.order // self.representatives[key].order)
            for key, mult in self.counts.items()
        )

    def sorted_items(self) -> list[tuple[tuple, int]]:
        return sorted(self.counts.items())

    def __eq__(self, other):
        return isinstance(other, BurnsideElement) and self.counts == other.counts

    def describe(self) -> list[dict]:
        out = []
        for key, mult in self.sorted_items():
            rep = self.representatives[key]
            out.append({
                "stabilizer_order": rep.order,
                "orbit_size": self.group.order // rep.order,
                "multiplicity": mult,
            })
        return out


def coset_gset(G: PermGroup, H: PermGroup) -> GSet:
    """Right cosets of H with the right translation action; transitive."""
    cosets = right_cosets(G, H)
    index_of = {}
    for i, coset in enumerate(cosets):
        for g in coset:
            index_of[g] = i
    reps = [c[0] for c in cosets]
    maps = []
    for g in G.elements:
        maps.append(tuple(index_of[r * g] for r in reps))
    return GSet(G, reps, maps)


def gset_product(A: GSet, B: GSet) -> GSet:
    """Cartesian product with the diagonal action."""
    if A.group is not B.group and A.group.elements != B.group.elements:
        raise ValidationError("product needs G-sets over the same group")
    nb = len(B.points)
    points = [(pa, pb) for pa in A.points for pb in B.points]
    maps = []
    for k in range(A.group.order):
        ma, mb = A.maps[k], B.maps[k]
        maps.append(tuple(ma[i] * nb + mb[j] for i in range(len(A.points)) for j in range(nb)))
    return GSet(A.group, points, maps)


def restrict_gset(A: GSet, R: PermGroup) -> GSet:
    """The same points viewed as an R-set; realizes Mackey restriction."""
    _require_subgroup(A.group, R)
    maps = [A.maps[A.group._index[r]] for r in R.elements]
    return GSet(R, A.points, maps)


def mackey_product_classes(G: PermGroup, H1: PermGroup, H2: PermGroup) -> list[tuple]:
    """Constituent classes of (H1\\G) x (H2\\G) via double cosets.

    One constituent with stabilizer class [d^-1 H1 d intersect H2] per
    (H1, H2)-double coset representative d; independent of gset_product.
    """
    out = []
    for dc in double_cosets(G, H1, H2):
        d = dc["representative"]
        stab = intersection(G, conjugate_subgroup(G, H1, d), H2)
        out.append(subgroup_class_key(G, stab))
    return sorted(out)


def conjugate_intersection_classes(G: PermGroup, H: PermGroup) -> set[tuple]:
    """Classes of all intersections of conjugates of H (the index set I)."""
    _require_subgroup(G, H)
    conjugates = []
    seen = set()
    for g in G.elements:
        c = conjugate_subgroup(G, H, g)
        cset = c.element_set()
        if cset not in seen:
            seen.add(cset)
            conjugates.append(c)
    pool: dict[frozenset, PermGroup] = {c.element_set(): c for c in conjugates}
    frontier = list(pool.values())
    while frontier:
        new = []
        for x in frontier:
            for c in conjugates:
                y = intersection(G, x, c)
                yset = y.element_set()
                if yset not in pool:
                    pool[yset] = y
                    new.append(y)
        frontier = new
    return {subgroup_class_key(G, sub) for sub in pool.values()}


def burnside_module_depth_bound(
    G: PermGroup,
    H: PermGroup,
    over: Union[PermGroup, None] = None,
    degree_cap: int = TENSOR_DEGREE_CAP,
) -> tuple[DepthReport, list[frozenset]]:
    """Upper bound for the depth of the coset permutation module.

    `over` selects the acting group: None means G itself, a subgroup R
    restricts the G-set to R-orbits first.  Returns the report plus the
    chain of accumulated constituent-label sets, one entry per tensor
    power.  The bound holds over every ground field; it is never exact.
    """
    _require_subgroup(G, H)
    V = coset_gset(G, H)
    group = G
    if over is not None and over.element_set() != G.element_set():
        _require_subgroup(G, over)
        V = restrict_gset(V, over)
        group = over

    if V.is_union_of_fixed_points():
        return (
            DepthReport(
                quantity="module_depth_bound", value=0, exact=False,
                stabilization_step=0,
                method="disjoint union of fixed points: trivial permutation module",
            ),
            [frozenset()],
        )

    first = V.constituents()
    labels = set(first.label_set())
    reps = dict(first.representatives)
    chain = [frozenset(labels)]
    current = first
    n = 1
    while True:
        if n >= degree_cap:
            raise CapExceeded(f"tensor degree cap {degree_cap} hit in the Burnside chain")
        # decompose (V^n) (x) V constituent by constituent, sets only
        next_counts: dict[tuple, int] = {}
        next_reps: dict[tuple, PermGroup] = {}
        for key in sorted(current.counts):
            piece = coset_gset(group, reps[key] if key in reps else current.representatives[key])
            prod = gset_product(piece, V).constituents()
            for k2, rep2 in prod.representatives.items():
                next_counts[k2] = next_counts.get(k2, 0) + prod.counts[k2]
                next_reps.setdefault(k2, rep2)
        new_labels = set(next_counts)
        if new_labels <= labels:
            break
        labels |= new_labels
        for k2, rep2 in next_reps.items():
            reps.setdefault(k2, rep2)
        chain.append(frozenset(labels))
        current = BurnsideElement(group, next_counts, next_reps)
        n += 1
    return (
        DepthReport(
            quantity="module_depth_bound", value=n, exact=False,
            stabilization_step=n,
            method="stabilization of constituent classes of coset-set tensor powers",
        ),
        chain,
    )


@dataclass
class SubgroupDepthBounds:
    """Depth bounds for a group-algebra pair, over any ground field."""

    depth_interval: DepthReport
    h_depth_bound: DepthReport
    normal: bool
    normal_shortcut: Optional[DepthReport]
    chain_over_subgroup: list[frozenset]
    chain_over_group: list[frozenset]

    def to_json(self) -> dict:
        return {
            "depth_interval": self.depth_interval.to_json(),
            "h_depth_bound": self.h_depth_bound.to_json(),
            "normal": self.normal,
            "normal_shortcut": self.normal_shortcut.to_json() if self.normal_shortcut else None,
        }


def subgroup_depth_bound(G: PermGroup, H: PermGroup) -> SubgroupDepthBounds:
    """Bounds for the depth of the subgroup algebra pair k[H] in k[G]."""
    over_h, chain_h = burnside_module_depth_bound(G, H, over=H)
    over_g, chain_g = burnside_module_depth_bound(G, H, over=None)
    b = over_h.value
    interval = DepthReport(
        quantity="depth_interval",
        value=(2 * b + 1, 2 * b + 2),
        exact=False,
        stabilization_step=over_h.stabilization_step,
        method="even depth at most 2b+2 for b the Burnside chain bound over the subgroup",
    )
    hbound = DepthReport(
        quantity="h_depth_bound",
        value=2 * over_g.value + 1,
        exact=False,
        stabilization_step=over_g.stabilization_step,
        method="h-depth at most 2b+1 for b the Burnside chain bound over the group",
    )
    normal = is_normal(G, H)
    shortcut = None
    if normal:
        shortcut = DepthReport(
            quantity="depth_interval",
            value=(1, 2) if H.order == G.order else (2, 2),
            exact=H.order == G.order,
            stabilization_step=0,
            method="normal subgroup: depth at most 2",
        )
    return SubgroupDepthBounds(
        depth_interval=interval,
        h_depth_bound=hbound,
        normal=normal,
        normal_shortcut=shortcut,
        chain_over_subgroup=chain_h,
        chain_over_group=chain_g,
    )


@dataclass(frozen=True)
class EtaProfile:
    """Fixed-point counts of the coset action, one per conjugacy class."""

    values: tuple[int, ...]
    class_sizes: tuple[int, ...]
    distinct_values: int
    corefree: bool

    @property
    def m(self) -> int:
        return self.distinct_values


def eta_profile(G: PermGroup, H: PermGroup) -> tuple[EtaProfile, Optional[DepthReport]]:
    """Fixed-coset counts per conjugacy class, plus the corefree value bound.

    When the core of H is trivial the number m of distinct counts bounds
    the permutation-module depth by m - 1 (and the complex subgroup depth
    by 2m); the bound is withheld otherwise.
    """
    _require_subgroup(G, H)
    V = coset_gset(G, H)
    values = []
    sizes = []
    for cls in G.conjugacy_classes():
        g = cls[0]
        gmap = V.maps[G._index[g]]
        values.append(sum(1 for p, q in enumerate(gmap) if p == q))
        sizes.append(len(cls))
    corefree = core(G, H).order == 1
    profile = EtaProfile(
        values=tuple(values),
        class_sizes=tuple(sizes),
        distinct_values=len(set(values)),
        corefree=corefree,
    )
    report = None
    if corefree:
        report = DepthReport(
            quantity="module_depth_bound",
            value=profile.m - 1,
            exact=False,
            stabilization_step=profile.m - 1,
            method="value-count bound for the faithful induced principal character; "
                   f"subgroup depth over the complex field at most {2 * profile.m}",
        )
    return profile, report
