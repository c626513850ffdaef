"""Relative cochain complexes on tensor powers of the quotient module.

The degree-n cochain space of a Hopf subalgebra pair (H, R) with
coefficients in an H-H-bimodule M is realized here as the space of linear
maps f from the (n+1)-fold tensor power of V = H/(aug R)H into M that are
right H-linear for the diagonal action on the source and the right adjoint
action m.h = S(h_1) m h_2 on the target.  Degree 0 is then canonically the
centralizer of R in M, via f -> f(coset of 1); the differential is the
alternating sum of counit evaluations with one tensorand deleted, and it
matches the classical commutator formula in lowest degree.

Everything is solved as an exact linear system (sparse elimination over
the cyclotomic field), capped at SOLVER_UNKNOWN_CAP unknowns.

`group_chain_iso` checks, over a finite group, the classical change of
variables between the homogeneous and inhomogeneous bar complexes
([g1|...|gn] -> [g1...gn | g2...gn | ... | gn]) together with its inverse
and the chain-map squares.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from fractions import Fraction
from typing import Optional, Sequence

from .errors import CapExceeded, ValidationError
from .exact_matrix import CoordSpan, kernel_sparse
from .hopf_algebra import (
    HopfAlgebra,
    HopfSubalgebra,
    ModuleRep,
    Vec,
    _add_into,
    _mat_mul,
    _mat_vec,
    _vec_equal,
    quotient_module_V,
    tensor_module,
)
from .perm_group import PermGroup
from .scalars import as_scalar

SOLVER_UNKNOWN_CAP = 4096


class Bimodule:
    """An H-H-bimodule by action matrices; elements are row vectors.

    `left[j]` and `right[j]` are the matrices of the two actions of basis
    element j, both applied on the right of row vectors; the axioms
    (anti-multiplicativity on the left, multiplicativity on the right,
    commuting sides) are validated on basis pairs.
    """

    def __init__(self, algebra: HopfAlgebra, dim: int, left, right, name="bimodule"):
        self.algebra = algebra
        self.dim = dim
        self.left = tuple(tuple(dict(r) for r in rows) for rows in left)
        self.right = tuple(tuple(dict(r) for r in rows) for rows in right)
        self.name = name
        self._validate()

    def _validate(self):
        alg = self.algebra
        ident = [{i: Fraction(1)} for i in range(self.dim)]
        for mats, anti in ((self.left, True), (self.right, False)):
            unit_mat = [dict() for _ in range(self.dim)]
            for j, c in alg.unit.items():
                for r in range(self.dim):
                    _add_into(unit_mat[r], mats[j][r], c)
            if not all(_vec_equal(unit_mat[r], ident[r]) for r in range(self.dim)):
                raise ValidationError("unit does not act as identity on the bimodule")
            for i in range(alg.dim):
                for j in range(alg.dim):
                    via_product = [dict() for _ in range(self.dim)]
                    for k, c in alg.mult[i][j].items():
                        for r in range(self.dim):
                            _add_into(via_product[r], mats[k][r], c)
                    # left action applies j before i: (e_i e_j).m = e_i.(e_j.m)
                    composed = _mat_mul(mats[j], mats[i]) if anti else _mat_mul(mats[i], mats[j])
                    if not all(_vec_equal(via_product[r], composed[r])
                               for r in range(self.dim)):
                        raise ValidationError("bimodule action law fails")
        for i in range(self.algebra.dim):
            for j in range(self.algebra.dim):
                lhs = _mat_mul(self.left[i], self.right[j])
                rhs = _mat_mul(self.right[j], self.left[i])
                if not all(_vec_equal(a, b) for a, b in zip(lhs, rhs)):
                    raise ValidationError("left and right actions do not commute")

    def adjoint_action(self, j: int) -> list[Vec]:
        """Matrix of the right adjoint action of basis j: m -> S(j_1) m j_2."""
        alg = self.algebra
        rows = [dict() for _ in range(self.dim)]
        for (a, b), c in alg.coproduct[j].items():
            # left-multiply by S(e_a), right-multiply by e_b
            step = [dict() for _ in range(self.dim)]
            for k, ck in alg.antipode[a].items():
                for r in range(self.dim):
                    _add_into(step[r], self.left[k][r], ck)
            step = _mat_mul(step, self.right[b])
            for r in range(self.dim):
                _add_into(rows[r], step[r], c)
        return rows


def adjoint_bimodule(H: HopfAlgebra) -> Bimodule:
    """H as a bimodule over itself by left/right multiplication."""
    left = [H.left_mult_rows(j) for j in range(H.dim)]
    right = [H.right_mult_rows(j) for j in range(H.dim)]
    return Bimodule(H, H.dim, left, right, name=f"{H.name} (regular bimodule)")


@dataclass
class CochainSpace:
    """Equivariant maps V^(x (degree+1)) -> M, solved exactly.

    Each basis cochain is a (source dim) x (dim M) matrix stored as
    row-sparse rows; `source_dim` is dim V ** (degree + 1).
    """

    degree: int
    source_dim: int
    target_dim: int
    basis: list[list[Vec]]
    pair: tuple
    counit_source: tuple

    @property
    def dim(self) -> int:
        return len(self.basis)


@dataclass
class Differential:
    """Matrix of the degree -> degree+1 differential in the solved bases."""

    degree: int
    matrix: list[Vec]  # rows: basis of the lower space
    rows: int
    cols: int

    def compose_is_zero(self, nxt: "Differential") -> bool:
        prod = _mat_mul(self.matrix, nxt.matrix)
        return all(not row for row in prod)

    def rank(self) -> int:
        span = CoordSpan(max(self.cols, 1))
        count = 0
        for row in self.matrix:
            if span.add(row):
                count += 1
        return count


class CochainComplex:
    """Caches V, its tensor powers, and the solved spaces for one pair."""

    def __init__(self, H: HopfAlgebra, R: HopfSubalgebra, M: Bimodule,
                 V: Optional[ModuleRep] = None,
                 unknown_cap: int = SOLVER_UNKNOWN_CAP):
        if M.algebra is not H:
            raise ValidationError("bimodule is not over the given algebra")
        self.H = H
        self.R = R
        self.M = M
        self.V = V if V is not None else quotient_module_V(H, R)
        self.unknown_cap = unknown_cap
        self._powers: dict[int, ModuleRep] = {1: self.V}
        self._spaces: dict[int, CochainSpace] = {}
        self._adjoint = [M.adjoint_action(j) for j in range(H.dim)]

    def power(self, n: int) -> ModuleRep:
        if n not in self._powers:
            self._powers[n] = tensor_module(self.power(n - 1), self.V)
        return self._powers[n]

    def power_counit(self, n: int) -> tuple:
        eps = self.V.counit
        out = []
        for combo in itertools.product(range(self.V.dim), repeat=n):
            val = as_scalar(1)
            for t in combo:
                val = val * eps[t]
            out.append(val)
        return tuple(out)

    def space(self, degree: int) -> CochainSpace:
        if degree in self._spaces:
            return self._spaces[degree]
        n_legs = degree + 1
        source = self.power(n_legs)
        sdim, mdim = source.dim, self.M.dim
        unknowns = sdim * mdim
        if unknowns > self.unknown_cap:
            raise CapExceeded(
                f"cochain solve needs {unknowns} unknowns, cap {self.unknown_cap}"
            )
        rows = []
        for j in range(self.H.dim):
            dj = source.action[j]
            adj = self._adjoint[j]
            adj_t: list[Vec] = [dict() for _ in range(mdim)]
            for s in range(mdim):
                for q, v in adj[s].items():
                    adj_t[q][s] = v
            for r in range(sdim):
                drow = dj[r]
                for q in range(mdim):
                    eqn: Vec = {}
                    for p, v in drow.items():
                        eqn[p * mdim + q] = v
                    for s, v in adj_t[q].items():
                        key = r * mdim + s
                        newval = eqn.get(key, 0) - v
                        if newval:
                            eqn[key] = newval
                        else:
                            eqn.pop(key, None)
                    if eqn:
                        rows.append(eqn)
        basis = []
        for flat in kernel_sparse(rows, unknowns):
            mat: list[Vec] = [dict() for _ in range(sdim)]
            for key, v in flat.items():
                p, q = divmod(key, mdim)
                mat[p][q] = v
            basis.append(mat)
        space = CochainSpace(
            degree=degree,
            source_dim=sdim,
            target_dim=mdim,
            basis=basis,
            pair=(self.H.name, self.R.name, self.M.name),
            counit_source=self.power_counit(n_legs),
        )
        self._spaces[degree] = space
        return space

    def boundary_of(self, space: CochainSpace, mat: list[Vec]) -> list[Vec]:
        """Apply the alternating counit-deletion differential to one cochain."""
        n_legs = space.degree + 1
        vdim = self.V.dim
        eps = self.V.counit
        out: list[Vec] = [dict() for _ in range(vdim ** (n_legs + 1))]
        for combo in itertools.product(range(vdim), repeat=n_legs + 1):
            flat = 0
            for t in combo:
                flat = flat * vdim + t
            row = out[flat]
            for i in range(n_legs + 1):
                e = eps[combo[i]]
                if e == 0:
                    continue
                rest = 0
                for t in combo[:i] + combo[i + 1:]:
                    rest = rest * vdim + t
                sign = 1 if i % 2 == 0 else -1
                _add_into(row, mat[rest], sign * e)
        return out

    def differential(self, degree: int) -> Differential:
        lower = self.space(degree)
        upper = self.space(degree + 1)
        span = CoordSpan(upper.source_dim * upper.target_dim)
        for mat in upper.basis:
            flat = {}
            for p, row in enumerate(mat):
                for q, v in row.items():
                    flat[p * upper.target_dim + q] = v
            span.add(flat)
        rows = []
        for mat in lower.basis:
            image = self.boundary_of(lower, mat)
            flat = {}
            for p, row in enumerate(image):
                for q, v in row.items():
                    flat[p * upper.target_dim + q] = v
            residual, comb = span.reduce(flat)
            if residual:
                raise AssertionError(
                    "differential image left the equivariant subspace"
                )
            rows.append({g: c for g, c in comb.items()})
        return Differential(degree=degree, matrix=rows,
                            rows=lower.dim, cols=upper.dim)

    def unit_coset_values(self, space: CochainSpace) -> list[Vec]:
        """Evaluate each basis cochain at the coset of 1 (degree 0 only)."""
        if space.degree != 0:
            raise ValidationError("unit-coset evaluation works in degree 0 only")
        one = self.V.proj(self.H.unit)
        return [_mat_vec(one, mat) for mat in space.basis]


def cochain_space(H: HopfAlgebra, R: HopfSubalgebra, M: Bimodule, n: int,
                  V: Optional[ModuleRep] = None) -> CochainSpace:
    """Degree-n cochains: equivariant maps on the (n+1)-st power of V."""
    if not 0 <= n <= 3:
        raise ValidationError("cochain degree is capped at 3")
    return CochainComplex(H, R, M, V=V).space(n)


def differential(complex_or_pair, degree: int) -> Differential:
    """The differential out of the given degree (complex caches the spaces)."""
    if not isinstance(complex_or_pair, CochainComplex):
        raise ValidationError("pass a CochainComplex")
    return complex_or_pair.differential(degree)


def centralizer_dimension(H: HopfAlgebra, R: HopfSubalgebra, M: Bimodule) -> int:
    """dim {m : r m = m r for all r in R}, computed directly.

    Serves as the independent cross-check for the degree-0 cochain space.
    """
    # unknown row vector m: for each r in R and output coordinate c,
    # sum_s m_s * (L_r - R_r)[s][c] = 0
    eqns: dict[tuple, Vec] = {}
    for i in range(R.dim):
        emb = R.embedding[i]
        mat = [dict() for _ in range(M.dim)]
        for j, c in emb.items():
            for s in range(M.dim):
                _add_into(mat[s], M.left[j][s], c)
                _add_into(mat[s], M.right[j][s], -c)
        for s in range(M.dim):
            for c2, v in mat[s].items():
                eqns.setdefault((i, c2), {})[s] = v
    basis = kernel_sparse(list(eqns.values()), M.dim)
    return len(basis)


# -- the group-case chain isomorphism -----------------------------------------

@dataclass
class ChainIsoRecord:
    group_order: int
    max_degree: int
    roundtrip_ok: bool
    chain_map_ok: bool

    @property
    def ok(self) -> bool:
        return self.roundtrip_ok and self.chain_map_ok


def _bar_boundary(t: tuple, mul) -> dict:
    # interior-multiplication boundary of the inhomogeneous bar complex
    out: dict = {}
    n = len(t)
    for i in range(n - 1):
        merged = t[:i] + (mul(t[i], t[i + 1]),) + t[i + 2:]
        sign = 1 if i % 2 == 0 else -1
        out[merged] = out.get(merged, 0) + sign
        if out[merged] == 0:
            del out[merged]
    return out


def _prime_boundary(t: tuple) -> dict:
    # deletion boundary on (h, v_1, ..., v_(n-1)); group counits are all 1
    out: dict = {}
    n = len(t)
    for i in range(1, n):
        deleted = t[:i] + t[i + 1:]
        sign = 1 if (i - 1) % 2 == 0 else -1
        out[deleted] = out.get(deleted, 0) + sign
        if out[deleted] == 0:
            del out[deleted]
    return out


def group_chain_iso(G: PermGroup, n: int) -> ChainIsoRecord:
    """Homogeneous/inhomogeneous bar translation over a finite group.

    Forward: [g1|...|gn] -> [g1...gn | g2...gn | ... | gn]; inverse:
    [h1|...|hn] -> [h1 h2^(-1) | h2 h3^(-1) | ... | hn].  Checks the exact
    roundtrips on all |G|^k tuples for k <= n and the chain-map squares
    against the two boundaries.
    """
    if G.order > 24:
        raise ValidationError("group order capped at 24 for the exhaustive check")
    if not 1 <= n <= 4:
        raise ValidationError("degree capped at 4")

    def forward(t: tuple) -> tuple:
        out = []
        for i in range(len(t)):
            suffix = t[i:]
            prod = suffix[0]
            for g in suffix[1:]:
                prod = prod * g
            out.append(prod)
        return tuple(out)

    def inverse(t: tuple) -> tuple:
        out = []
        for i in range(len(t) - 1):
            out.append(t[i] * t[i + 1].inverse())
        out.append(t[-1])
        return tuple(out)

    roundtrip_ok = True
    chain_map_ok = True
    for k in range(1, n + 1):
        for t in itertools.product(G.elements, repeat=k):
            ft = forward(t)
            if inverse(ft) != t or forward(inverse(t)) != t:
                roundtrip_ok = False
                break
        if not roundtrip_ok:
            break
    mul = lambda a, b: a * b
    for k in range(2, n + 1):
        for t in itertools.product(G.elements, repeat=k):
            lhs: dict = {}
            for merged, sign in _bar_boundary(t, mul).items():
                key = forward(merged)
                lhs[key] = lhs.get(key, 0) + sign
                if lhs[key] == 0:
                    del lhs[key]
            rhs = _prime_boundary(forward(t))
            if lhs != rhs:
                chain_map_ok = False
                break
        if not chain_map_ok:
            break
    return ChainIsoRecord(
        group_order=G.order, max_degree=n,
        roundtrip_ok=roundtrip_ok, chain_map_ok=chain_map_ok,
    )
