"""Dense exact matrices and the shared elimination routines.

Two public matrix flavours: `IntMatrix` over nonnegative integers (inclusion
matrices) and `ScalarMatrix` over exact scalars (rationals/cyclotomics).
Row reduction is fraction-free (cross-multiplication updates, division only
in the final normalization) with a deterministic pivot rule: first row with
a nonzero entry, columns left to right.  That makes every computed basis
reproducible across platforms.

The module also exposes `Span`, an incremental row space kept in reduced
echelon form; the Hopf-algebra and cochain solvers are built on it.

JSON form: {"rows": r, "cols": c, "entries": [[...], ...]} with integer
entries as numbers (decimal strings accepted and emitted for values beyond
2**53), scalar entries as the textual scalar form.
"""

from __future__ import annotations

from fractions import Fraction
from typing import Iterable, Sequence

from .errors import ValidationError
from .scalars import Scalar, as_scalar, scalar_from_str, scalar_inverse, scalar_to_str

_JSON_INT_LIMIT = 2**53


class IntMatrix:
    """Dense matrix of nonnegative arbitrary-precision integers."""

    __slots__ = ("rows", "cols", "entries")

    def __init__(self, rows: int, cols: int, entries: Sequence[int]):
        entries = tuple(int(e) for e in entries)
        if rows < 1 or cols < 1:
            raise ValidationError("matrix dimensions must be positive")
        if len(entries) != rows * cols:
            raise ValidationError("entry count does not match dimensions")
        if any(e < 0 for e in entries):
            raise ValidationError("inclusion matrices have nonnegative entries")
        self.rows = rows
        self.cols = cols
        self.entries = entries

    @classmethod
    def from_rows(cls, rows: Sequence[Sequence[int]]) -> "IntMatrix":
        r = len(rows)
        if r == 0 or len({len(row) for row in rows}) != 1:
            raise ValidationError("need a nonempty rectangular row list")
        return cls(r, len(rows[0]), [e for row in rows for e in row])

    @classmethod
    def identity(cls, n: int) -> "IntMatrix":
        return cls(n, n, [1 if i == j else 0 for i in range(n) for j in range(n)])

    def get(self, i: int, j: int) -> int:
        return self.entries[i * self.cols + j]

    def row(self, i: int) -> tuple[int, ...]:
        return self.entries[i * self.cols : (i + 1) * self.cols]

    def to_rows(self) -> list[list[int]]:
        return [list(self.row(i)) for i in range(self.rows)]

    def transpose(self) -> "IntMatrix":
        return IntMatrix(
            self.cols, self.rows,
            [self.get(i, j) for j in range(self.cols) for i in range(self.rows)],
        )

    def __eq__(self, other):
        return (
            isinstance(other, IntMatrix)
            and self.rows == other.rows
            and self.cols == other.cols
            and self.entries == other.entries
        )

    def __hash__(self):
        return hash((self.rows, self.cols, self.entries))

    def __repr__(self):
        return f"IntMatrix({self.to_rows()!r})"


class ScalarMatrix:
    """Dense matrix over exact scalars."""

    __slots__ = ("rows", "cols", "entries")

    def __init__(self, rows: int, cols: int, entries: Sequence[Scalar]):
        entries = tuple(as_scalar(e) for e in entries)
        if rows < 1 or cols < 1:
            raise ValidationError("matrix dimensions must be positive")
        if len(entries) != rows * cols:
            raise ValidationError("entry count does not match dimensions")
        self.rows = rows
        self.cols = cols
        self.entries = entries

    @classmethod
    def from_rows(cls, rows: Sequence[Sequence[Scalar]]) -> "ScalarMatrix":
        r = len(rows)
        if r == 0 or len({len(row) for row in rows}) != 1:
            raise ValidationError("need a nonempty rectangular row list")
        return cls(r, len(rows[0]), [e for row in rows for e in row])

    @classmethod
    def identity(cls, n: int) -> "ScalarMatrix":
        one, zero = Fraction(1), Fraction(0)
        return cls(n, n, [one if i == j else zero for i in range(n) for j in range(n)])

    def get(self, i: int, j: int) -> Scalar:
        return self.entries[i * self.cols + j]

    def row(self, i: int) -> tuple[Scalar, ...]:
        return self.entries[i * self.cols : (i + 1) * self.cols]

    def to_rows(self) -> list[list[Scalar]]:
        return [list(self.row(i)) for i in range(self.rows)]

    def transpose(self) -> "ScalarMatrix":
        return ScalarMatrix(
            self.cols, self.rows,
            [self.get(i, j) for j in range(self.cols) for i in range(self.rows)],
        )

    def __eq__(self, other):
        return (
            isinstance(other, ScalarMatrix)
            and self.rows == other.rows
            and self.cols == other.cols
            and self.entries == other.entries
        )

    def __hash__(self):
        return hash((self.rows, self.cols, self.entries))

    def __repr__(self):
        return f"ScalarMatrix({self.rows}x{self.cols})"


class ZeroPattern:
    """Positions of exactly-zero entries, stored as a bitmask."""

    __slots__ = ("rows", "cols", "mask")

    def __init__(self, rows: int, cols: int, mask: int):
        self.rows = rows
        self.cols = cols
        self.mask = mask

    @property
    def zeros(self) -> frozenset[tuple[int, int]]:
        out = []
        m = self.mask
        idx = 0
        while m:
            if m & 1:
                out.append(divmod(idx, self.cols))
            m >>= 1
            idx += 1
        return frozenset(out)

    def count(self) -> int:
        return bin(self.mask).count("1")

    def issubset(self, other: "ZeroPattern") -> bool:
        return (self.mask | other.mask) == other.mask

    def __eq__(self, other):
        return (
            isinstance(other, ZeroPattern)
            and (self.rows, self.cols, self.mask) == (other.rows, other.cols, other.mask)
        )

    def __hash__(self):
        return hash((self.rows, self.cols, self.mask))

    def __repr__(self):
        return f"ZeroPattern({self.rows}x{self.cols}, {self.count()} zeros)"


def mat_mul(a, b):
    """Exact product; operands must share a flavour and inner dimension."""
    if type(a) is not type(b):
        raise ValidationError("cannot mix matrix flavours in a product")
    if a.cols != b.rows:
        raise ValidationError(f"dimension mismatch: {a.cols} vs {b.rows}")
    n, m, k = a.rows, b.cols, a.cols
    bt = b.transpose()
    out = []
    for i in range(n):
        ra = a.row(i)
        for j in range(m):
            rb = bt.row(j)
            acc = sum(x * y for x, y in zip(ra, rb) if x and y)
            out.append(acc if acc else 0 if isinstance(a, IntMatrix) else Fraction(0))
    return type(a)(n, m, out)


def zero_pattern(a) -> ZeroPattern:
    mask = 0
    for idx, e in enumerate(a.entries):
        if e == 0:
            mask |= 1 << idx
    return ZeroPattern(a.rows, a.cols, mask)


# -- elimination -------------------------------------------------------------

def rref_rows(rows: list[list[Scalar]]) -> tuple[list[list[Scalar]], list[int]]:
    """Reduced echelon form of a list of rows (consumed), with pivot columns.

    Fraction-free sweep: row updates use cross-multiplication only; pivot
    rows are normalized at the end.  Pivot choice is the first row with a
    nonzero entry in the leftmost unfinished column.
    """
    if not rows:
        return [], []
    ncols = len(rows[0])
    pivots = []
    r = 0
    for c in range(ncols):
        src = next((i for i in range(r, len(rows)) if rows[i][c] != 0), None)
        if src is None:
            continue
        rows[r], rows[src] = rows[src], rows[r]
        piv = rows[r][c]
        for i in range(len(rows)):
            if i != r and rows[i][c] != 0:
                f = rows[i][c]
                rows[i] = [piv * x - f * y for x, y in zip(rows[i], rows[r])]
        pivots.append(c)
        r += 1
        if r == len(rows):
            break
    # drop zero rows, normalize pivots to 1
    out = []
    for i, c in enumerate(pivots):
        inv = scalar_inverse(rows[i][c])
        out.append([x * inv for x in rows[i]])
    return out, pivots


def rank_rows(rows: list[list[Scalar]]) -> int:
    return len(rref_rows(rows)[1])


def kernel(a: ScalarMatrix) -> list[ScalarMatrix]:
    """Deterministic basis of the right null space, as column matrices."""
    reduced, pivots = rref_rows(a.to_rows())
    free = [c for c in range(a.cols) if c not in pivots]
    basis = []
    for fc in free:
        vec = [Fraction(0)] * a.cols
        vec[fc] = Fraction(1)
        for row, pc in zip(reduced, pivots):
            if row[fc] != 0:
                vec[pc] = -row[fc]
        basis.append(ScalarMatrix(a.cols, 1, vec))
    return basis


def rref(a: ScalarMatrix) -> tuple[ScalarMatrix, tuple[int, ...]]:
    reduced, pivots = rref_rows(a.to_rows())
    if not reduced:
        reduced = [[Fraction(0)] * a.cols]
    return ScalarMatrix.from_rows(reduced), tuple(pivots)


class Span:
    """Incremental row space over exact scalars, kept in reduced echelon form.

    Vectors are sparse dicts {column: scalar}.  `add` returns True when the
    vector enlarged the space; `reduce` returns the residual of a vector
    against the space (empty dict exactly when the vector is contained).
    """

    __slots__ = ("ncols", "pivot_rows", "pivot_order")

    def __init__(self, ncols: int):
        self.ncols = ncols
        self.pivot_rows: dict[int, dict[int, Scalar]] = {}
        self.pivot_order: list[int] = []

    @property
    def dim(self) -> int:
        return len(self.pivot_order)

    def reduce(self, vec: dict[int, Scalar]) -> dict[int, Scalar]:
        out = dict(vec)
        for c in sorted(out):
            coeff = out.get(c)
            if not coeff:
                continue
            row = self.pivot_rows.get(c)
            if row is None:
                continue
            for j, v in row.items():
                newval = out.get(j, 0) - coeff * v
                if newval:
                    out[j] = newval
                else:
                    out.pop(j, None)
        return {c: v for c, v in out.items() if v}

    def add(self, vec: dict[int, Scalar]) -> bool:
        res = self.reduce(vec)
        if not res:
            return False
        piv = min(res)
        inv = scalar_inverse(res[piv])
        row = {c: v * inv for c, v in res.items()}
        # keep existing rows reduced against the new pivot
        for pc in self.pivot_order:
            old = self.pivot_rows[pc]
            coeff = old.get(piv)
            if coeff:
                for j, v in row.items():
                    newval = old.get(j, 0) - coeff * v
                    if newval:
                        old[j] = newval
                    else:
                        old.pop(j, None)
        self.pivot_rows[piv] = row
        self.pivot_order.append(piv)
        return True

    def contains(self, vec: dict[int, Scalar]) -> bool:
        return not self.reduce(vec)

    def extend(self, vecs: Iterable[dict[int, Scalar]]) -> None:
        for v in vecs:
            self.add(v)

    def pivots(self) -> list[int]:
        return sorted(self.pivot_rows)

    def basis(self) -> list[dict[int, Scalar]]:
        return [dict(self.pivot_rows[c]) for c in sorted(self.pivot_rows)]

    def equals(self, other: "Span") -> bool:
        if self.ncols != other.ncols or self.dim != other.dim:
            return False
        return all(other.contains(row) for row in self.basis())


def kernel_sparse(rows: Iterable[dict], ncols: int) -> list[dict]:
    """Kernel basis of a sparsely given constraint matrix, as sparse dicts."""
    span = Span(ncols)
    for row in rows:
        span.add(row)
    pivots = span.pivot_rows
    free = [c for c in range(ncols) if c not in pivots]
    basis = []
    for fc in free:
        vec = {fc: Fraction(1)}
        for pc, row in pivots.items():
            coeff = row.get(fc)
            if coeff:
                vec[pc] = -coeff
        basis.append(vec)
    return basis


class CoordSpan:
    """Like `Span`, but remembers how each vector sits over the generators.

    `reduce` returns (residual, combination): the combination is a dict
    {generator_index: scalar} with vec = sum(comb) over added generators
    plus the residual.  Used to express elements of a subalgebra in terms
    of its embedded basis.
    """

    __slots__ = ("ncols", "pivot_rows", "pivot_comb", "count")

    def __init__(self, ncols: int):
        self.ncols = ncols
        self.pivot_rows: dict[int, dict[int, Scalar]] = {}
        self.pivot_comb: dict[int, dict[int, Scalar]] = {}
        self.count = 0

    @property
    def dim(self) -> int:
        return len(self.pivot_rows)

    def reduce(self, vec: dict[int, Scalar]):
        out = dict(vec)
        comb: dict[int, Scalar] = {}
        for c in sorted(out):
            coeff = out.get(c)
            if not coeff:
                continue
            row = self.pivot_rows.get(c)
            if row is None:
                continue
            for j, v in row.items():
                newval = out.get(j, 0) - coeff * v
                if newval:
                    out[j] = newval
                else:
                    out.pop(j, None)
            for g, v in self.pivot_comb[c].items():
                newval = comb.get(g, 0) + coeff * v
                if newval:
                    comb[g] = newval
                else:
                    comb.pop(g, None)
        return {c: v for c, v in out.items() if v}, comb

    def add(self, vec: dict[int, Scalar]) -> bool:
        res, comb = self.reduce(vec)
        gen_index = self.count
        self.count += 1
        if not res:
            return False
        piv = min(res)
        inv = scalar_inverse(res[piv])
        row = {c: v * inv for c, v in res.items()}
        comb = {g: -v * inv for g, v in comb.items()}
        comb[gen_index] = comb.get(gen_index, 0) + inv
        for pc in list(self.pivot_rows):
            old = self.pivot_rows[pc]
            coeff = old.get(piv)
            if coeff:
                for j, v in row.items():
                    newval = old.get(j, 0) - coeff * v
                    if newval:
                        old[j] = newval
                    else:
                        old.pop(j, None)
                oldc = self.pivot_comb[pc]
                for g, v in comb.items():
                    newval = oldc.get(g, 0) - coeff * v
                    if newval:
                        oldc[g] = newval
                    else:
                        oldc.pop(g, None)
        self.pivot_rows[piv] = row
        self.pivot_comb[piv] = comb
        return True


# -- JSON --------------------------------------------------------------------

def _int_entry_to_json(e: int):
    return e if abs(e) < _JSON_INT_LIMIT else str(e)


def matrix_to_json(a) -> dict:
    if isinstance(a, IntMatrix):
        rows = [[_int_entry_to_json(e) for e in a.row(i)] for i in range(a.rows)]
    else:
        rows = [[scalar_to_str(e) for e in a.row(i)] for i in range(a.rows)]
    return {"rows": a.rows, "cols": a.cols, "entries": rows}


def _parse_int_entry(e) -> int:
    if isinstance(e, bool):
        raise ValidationError("boolean is not a matrix entry")
    if isinstance(e, int):
        return e
    if isinstance(e, str):
        try:
            return int(e, 10)
        except ValueError:
            raise ValidationError(f"bad integer entry {e!r}")
    raise ValidationError(f"bad integer entry {e!r}")


def int_matrix_from_json(obj: dict) -> IntMatrix:
    try:
        rows, cols, entries = obj["rows"], obj["cols"], obj["entries"]
    except (KeyError, TypeError):
        raise ValidationError("matrix JSON needs rows, cols, entries")
    if not isinstance(entries, list) or len(entries) != rows:
        raise ValidationError("entries must be a list of rows")
    flat = []
    for row in entries:
        if not isinstance(row, list) or len(row) != cols:
            raise ValidationError("ragged entry rows")
        flat.extend(_parse_int_entry(e) for e in row)
    return IntMatrix(rows, cols, flat)


def scalar_matrix_from_json(obj: dict) -> ScalarMatrix:
    try:
        rows, cols, entries = obj["rows"], obj["cols"], obj["entries"]
    except (KeyError, TypeError):
        raise ValidationError("matrix JSON needs rows, cols, entries")
    flat = []
    for row in entries:
        if len(row) != cols:
            raise ValidationError("ragged entry rows")
        for e in row:
            if isinstance(e, str):
                flat.append(scalar_from_str(e))
            else:
                flat.append(_parse_int_entry(e))
    if len(entries) != rows:
        raise ValidationError("row count mismatch")
    return ScalarMatrix(rows, cols, flat)
