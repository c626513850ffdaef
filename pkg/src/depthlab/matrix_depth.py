"""Minimum depth of a semisimple inclusion from its inclusion matrix.

For an inclusion of split semisimple algebras with r-by-s inclusion matrix M
(rows: simples of the small algebra, columns: simples of the big one), the
minimum odd depth is read off the powers of S = M*M^t: it is 2n+1 for the
least n >= 0 such that S^n and S^(n+1) have the same zero pattern, with
S^0 = identity so that depth 1 (equal algebras) is representable.  The
minimum h-depth uses T = M^t*M the same way, starting at n = 1, with the
equal-algebra case detected separately (M a permutation matrix).

`module_depth_H` tracks instead how the support of the induced-trivial
character row grows under T; `bipartite_odd_depth` recomputes the odd depth
as 1 + the diameter of the row vertices in the bipartite support graph of M
and serves as an independent cross-check.  `branch_matrix` generates the
inclusion matrices of consecutive symmetric groups from the branching rule
on partitions.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Optional, Sequence, Union

from .errors import ValidationError
from .exact_matrix import IntMatrix, ZeroPattern, mat_mul, zero_pattern


@dataclass(frozen=True)
class InclusionData:
    """An inclusion matrix plus the optional data the depth engine can use.

    triv_row: row index of the trivial (counit) representation of the small
    algebra; dim_vector: dimensions of the small algebra's simples; index:
    the index [A:B] as an exact rational.
    """

    matrix: IntMatrix
    triv_row: Optional[int] = None
    dim_vector: Optional[tuple[int, ...]] = None
    index: Optional[Fraction] = None

    def __post_init__(self):
        m = self.matrix
        for i in range(m.rows):
            if all(e == 0 for e in m.row(i)):
                raise ValidationError(f"row {i} of the inclusion matrix is zero")
        for j in range(m.cols):
            if all(m.get(i, j) == 0 for i in range(m.rows)):
                raise ValidationError(f"column {j} of the inclusion matrix is zero")
        if self.triv_row is not None and not 0 <= self.triv_row < m.rows:
            raise ValidationError("triv_row out of range")
        if self.dim_vector is not None:
            object.__setattr__(self, "dim_vector", tuple(int(d) for d in self.dim_vector))
            if len(self.dim_vector) != m.rows or any(d < 1 for d in self.dim_vector):
                raise ValidationError("dim_vector must list positive dims per row")
        if self.index is not None:
            object.__setattr__(self, "index", Fraction(self.index))
            if self.index <= 0:
                raise ValidationError("index must be positive")


@dataclass(frozen=True)
class DepthReport:
    """One computed depth quantity.

    value is an int, or a (lo, hi) pair when quantity is an interval; exact
    is False when the value is only an upper bound; stabilization_step
    records the witnessing power n.
    """

    quantity: str
    value: Union[int, tuple[int, int]]
    exact: bool
    stabilization_step: int
    method: str = ""

    def __post_init__(self):
        if isinstance(self.value, tuple):
            lo, hi = self.value
            if hi - lo > 1:
                raise ValidationError("depth intervals have width at most 1")

    def to_json(self) -> dict:
        value = list(self.value) if isinstance(self.value, tuple) else self.value
        return {
            "quantity": self.quantity,
            "value": value,
            "exact": self.exact,
            "stabilization_step": self.stabilization_step,
            "method": self.method,
        }


def _stabilization_step(powers_start: IntMatrix, step_mat: IntMatrix,
                        start_n: int, cap: int) -> tuple[int, ZeroPattern]:
    """Least n >= start_n with pattern(A^n) == pattern(A^(n+1))."""
    current = powers_start
    pat = zero_pattern(current)
    n = start_n
    while n <= cap:
        nxt = mat_mul(current, step_mat)
        npat = zero_pattern(nxt)
        if npat == pat:
            return n, pat
        current, pat = nxt, npat
        n += 1
    raise AssertionError("zero pattern failed to stabilize within the bound")


def min_odd_depth(data: InclusionData) -> DepthReport:
    """Minimum odd depth 2n+1 from the zero patterns of powers of M*M^t."""
    m = data.matrix
    s = mat_mul(m, m.transpose())
    cap = m.rows * m.rows + 1
    n, _ = _stabilization_step(IntMatrix.identity(m.rows), s, 0, cap)
    return DepthReport(
        quantity="odd_depth",
        value=2 * n + 1,
        exact=True,
        stabilization_step=n,
        method="zero-pattern stabilization of powers of M*M^t; "
               "minimum depth may be this value minus 1",
    )


def _is_permutation_matrix(m: IntMatrix) -> bool:
    if m.rows != m.cols:
        return False
    for i in range(m.rows):
        if sorted(m.row(i)) != [0] * (m.cols - 1) + [1]:
            return False
    for j in range(m.cols):
        col = [m.get(i, j) for i in range(m.rows)]
        if sorted(col) != [0] * (m.rows - 1) + [1]:
            return False
    return True


def min_h_depth(data: InclusionData) -> DepthReport:
    """Minimum h-depth 2n+1 from the zero patterns of powers of M^t*M.

    A permutation matrix means equal algebras, the only way h-depth 1
    occurs for the pairs this engine targets; the power inspection starts
    at n = 1 otherwise.
    """
    m = data.matrix
    if _is_permutation_matrix(m):
        return DepthReport(
            quantity="h_depth", value=1, exact=True, stabilization_step=0,
            method="permutation inclusion matrix: equal algebras",
        )
    t = mat_mul(m.transpose(), m)
    cap = m.cols * m.cols + 1
    n, _ = _stabilization_step(t, t, 1, cap)
    return DepthReport(
        quantity="h_depth",
        value=2 * n + 1,
        exact=True,
        stabilization_step=n,
        method="zero-pattern stabilization of powers of M^t*M",
    )


def _support(vec: Sequence[int]) -> frozenset[int]:
    return frozenset(j for j, v in enumerate(vec) if v != 0)


def module_depth_H(data: InclusionData) -> DepthReport:
    """Depth of the induced-trivial module in the big algebra's category.

    The character of that module is the triv_row of M expressed in the
    simples of the big algebra; its tensor powers correspond to repeated
    multiplication by T = M^t*M, and the depth is where the support stops
    growing.  Cross-checked against (min_h_depth - 1) / 2, which the theory
    forces; a mismatch means the matrix is not realizable by a Hopf pair.
    """
    if data.triv_row is None:
        raise ValidationError("module_depth_H needs triv_row")
    m = data.matrix
    t = mat_mul(m.transpose(), m)
    v = list(m.row(data.triv_row))
    if len(_support(v)) == 1:
        depth, step = 0, 0
    else:
        step = 0
        current = v
        while True:
            nxt = [
                sum(current[i] * t.get(i, j) for i in range(t.rows))
                for j in range(t.cols)
            ]
            if _support(nxt) == _support(current):
                break
            current = nxt
            step += 1
            if step > t.rows * t.rows + 1:
                raise AssertionError("support failed to stabilize")
        depth = 1 + step
    h = min_h_depth(data).value
    if 2 * depth + 1 != h:
        raise ValidationError(
            "module depth inconsistent with h-depth: the inclusion matrix "
            "is not realizable by a Hopf subalgebra pair"
        )
    return DepthReport(
        quantity="module_depth_H",
        value=depth,
        exact=True,
        stabilization_step=step,
        method="support growth of the induced-trivial character row under M^t*M",
    )


def bipartite_odd_depth(data: InclusionData) -> DepthReport:
    """Odd depth as 1 + diameter of the row vertices of the support graph.

    Rows and columns of M are the two vertex classes, with an edge where
    the entry is positive; the graph must be connected.
    """
    m = data.matrix
    nverts = m.rows + m.cols  # rows first, then columns
    adj: list[list[int]] = [[] for _ in range(nverts)]
    for i in range(m.rows):
        for j in range(m.cols):
            if m.get(i, j) > 0:
                adj[i].append(m.rows + j)
                adj[m.rows + j].append(i)

    def bfs(start: int) -> list[int]:
        dist = [-1] * nverts
        dist[start] = 0
        queue = [start]
        for u in queue:
            for w in adj[u]:
                if dist[w] < 0:
                    dist[w] = dist[u] + 1
                    queue.append(w)
        return dist

    diameter = 0
    for i in range(m.rows):
        dist = bfs(i)
        if any(d < 0 for d in dist):
            raise ValidationError(
                "support graph is disconnected: split the matrix into "
                "connected blocks and compute each block separately"
            )
        diameter = max(diameter, max(dist[: m.rows]))
    return DepthReport(
        quantity="odd_depth",
        value=1 + diameter,
        exact=True,
        stabilization_step=diameter // 2,
        method="diameter of row vertices in the bipartite support graph",
    )


def check_perron(data: InclusionData) -> bool:
    """Whether S * dim_vector = index * dim_vector holds exactly."""
    if data.dim_vector is None or data.index is None:
        raise ValidationError("check_perron needs dim_vector and index")
    m = data.matrix
    s = mat_mul(m, m.transpose())
    for i in range(s.rows):
        lhs = sum(s.get(i, j) * data.dim_vector[j] for j in range(s.cols))
        if Fraction(lhs) != data.index * data.dim_vector[i]:
            return False
    return True


# -- symmetric group branching ----------------------------------------------

def partitions(n: int) -> list[tuple[int, ...]]:
    """Partitions of n as weakly decreasing tuples, reverse-lexicographic."""
    if n == 0:
        return [()]
    out: list[tuple[int, ...]] = []

    def build(remaining: int, maxpart: int, prefix: tuple[int, ...]):
        if remaining == 0:
            out.append(prefix)
            return
        for part in range(min(maxpart, remaining), 0, -1):
            build(remaining - part, part, prefix + (part,))

    build(n, n, ())
    return out


def _adds_one_box(small: tuple[int, ...], big: tuple[int, ...]) -> bool:
    padded = small + (0,) * (len(big) - len(small))
    if len(big) < len(small):
        return False
    diff = [b - a for a, b in zip(padded, big)]
    return all(d >= 0 for d in diff) and sum(diff) == 1


def branch_matrix(n: int) -> InclusionData:
    """Inclusion matrix of consecutive symmetric group algebras.

    Rows: partitions of n; columns: partitions of n+1, both in
    reverse-lexicographic order; entry 1 exactly when the column partition
    adds one box to the row partition.  triv_row points at the partition
    (n), dim_vector lists hook-length dimensions, index is n+1.
    """
    if not 1 <= n <= 8:
        raise ValidationError("branch_matrix supports 1 <= n <= 8")
    rows_p = partitions(n)
    cols_p = partitions(n + 1)
    entries = [
        1 if _adds_one_box(lam, mu) else 0 for lam in rows_p for mu in cols_p
    ]
    return InclusionData(
        matrix=IntMatrix(len(rows_p), len(cols_p), entries),
        triv_row=rows_p.index((n,)),
        dim_vector=tuple(hook_dimension(lam) for lam in rows_p),
        index=Fraction(n + 1),
    )


def hook_dimension(lam: tuple[int, ...]) -> int:
    """Dimension of the symmetric group irreducible via hook lengths."""
    n = sum(lam)
    cols = [0] * (lam[0] if lam else 0)
    for row in lam:
        for c in range(row):
            cols[c] += 1
    prod = 1
    for i, row in enumerate(lam):
        for j in range(row):
            arm = row - j - 1
            leg = cols[j] - i - 1
            prod *= arm + leg + 1
    return math.factorial(n) // prod
