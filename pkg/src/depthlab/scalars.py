"""Exact scalars: rationals and cyclotomic numbers.

Rationals are `fractions.Fraction` (re-exported as `Rational`).  An element
of Q(zeta_n) is a polynomial in zeta_n reduced modulo the n-th cyclotomic
polynomial, with Fraction coefficients; `n` is called the conductor.  All
arithmetic is exact, and any value that turns out to be rational is demoted
to a plain Fraction, so equal values compare and hash equally no matter how
they were produced.  Mixed-conductor operands are lifted to the least
common conductor first.

Textual form: rationals print as Fraction does ("3/2", "-1"); cyclotomics
print as a polynomial in z with a conductor tag, e.g. "3/2*z^2 - 1@n=5".
`scalar_from_str` round-trips both forms exactly.
"""

from __future__ import annotations

import math
import re
from fractions import Fraction
from functools import lru_cache
from typing import Union

from .errors import ValidationError

Rational = Fraction

#: Anything accepted where an exact scalar is expected.
Scalar = Union[int, Fraction, "Cyclotomic"]

_ZERO = Fraction(0)
_ONE = Fraction(1)


def euler_phi(n: int) -> int:
    assert n >= 1
    result = n
    m = n
    p = 2
    while p * p <= m:
        if m % p == 0:
            while m % p == 0:
                m //= p
            result -= result // p
        p += 1
    if m > 1:
        result -= result // m
    return result


def divisors(n: int) -> list[int]:
    small, large = [], []
    d = 1
    while d * d <= n:
        if n % d == 0:
            small.append(d)
            if d != n // d:
                large.append(n // d)
        d += 1
    return small + large[::-1]


def _poly_divmod_int(num: list[int], den: list[int]) -> list[int]:
    # exact division of integer polynomials (ascending coefficients),
    # valid because cyclotomic polynomials divide x^n - 1 over Z
    num = list(num)
    out = [0] * (len(num) - len(den) + 1)
    for k in range(len(out) - 1, -1, -1):
        c = num[k + len(den) - 1]
        assert c % den[-1] == 0
        q = c // den[-1]
        out[k] = q
        if q:
            for j, dj in enumerate(den):
                num[k + j] -= q * dj
    assert all(c == 0 for c in num)
    return out


@lru_cache(maxsize=None)
def cyclotomic_polynomial(n: int) -> tuple[int, ...]:
    """Coefficients of Phi_n, ascending, monic; Phi_1 = x - 1."""
    assert n >= 1
    num = [-1] + [0] * (n - 1) + [1]  # x^n - 1
    for d in divisors(n)[:-1]:
        num = _poly_divmod_int(num, list(cyclotomic_polynomial(d)))
    return tuple(num)


@lru_cache(maxsize=None)
def _zeta_power_table(n: int) -> tuple[tuple[Fraction, ...], ...]:
    # zeta_n^k in the power basis 1, zeta, ..., zeta^(phi-1), for k = 0..n-1
    phi = euler_phi(n)
    psi = cyclotomic_polynomial(n)
    # -Phi_n minus its leading term gives zeta^phi in lower powers
    top = tuple(Fraction(-c) for c in psi[:-1])
    rows = [tuple([_ONE] + [_ZERO] * (phi - 1))]
    for _ in range(1, n):
        prev = rows[-1]
        shifted = [_ZERO] + list(prev[: phi - 1])
        carry = prev[phi - 1]
        if carry:
            shifted = [a + carry * b for a, b in zip(shifted, top)]
        rows.append(tuple(shifted))
    return tuple(rows)


def _solve_rational(rows: list[list[Fraction]], rhs: list[Fraction]):
    """Solve a small dense rational system; None when inconsistent."""
    nrows = len(rows)
    ncols = len(rows[0]) if nrows else 0
    m = [list(r) + [b] for r, b in zip(rows, rhs)]
    piv_cols = []
    r = 0
    for c in range(ncols):
        pr = next((i for i in range(r, nrows) if m[i][c] != 0), None)
        if pr is None:
            continue
        m[r], m[pr] = m[pr], m[r]
        inv = 1 / m[r][c]
        m[r] = [x * inv for x in m[r]]
        for i in range(nrows):
            if i != r and m[i][c] != 0:
                f = m[i][c]
                m[i] = [x - f * y for x, y in zip(m[i], m[r])]
        piv_cols.append(c)
        r += 1
        if r == nrows:
            break
    for i in range(r, nrows):
        if m[i][ncols] != 0:
            return None
    sol = [_ZERO] * ncols
    for i, c in enumerate(piv_cols):
        sol[c] = m[i][ncols]
    return sol


class Cyclotomic:
    """An element of Q(zeta_n), reduced mod Phi_n.  Immutable.

    Instances are only created through `_make`, which demotes rational
    values to Fraction; so any live Cyclotomic is genuinely irrational.
    """

    __slots__ = ("n", "coeffs", "_min", "_hashval")

    def __init__(self, n: int, coeffs: tuple[Fraction, ...]):
        self.n = n
        self.coeffs = coeffs
        self._min = None
        self._hashval = None

    # -- construction -------------------------------------------------

    @staticmethod
    def _make(n: int, coeffs) -> Scalar:
        coeffs = tuple(Fraction(c) for c in coeffs)
        assert len(coeffs) == euler_phi(n)
        if all(c == 0 for c in coeffs[1:]):
            return coeffs[0] if coeffs else _ZERO
        return Cyclotomic(n, coeffs)

    @staticmethod
    def from_rational(n: int, value) -> "Cyclotomic":
        phi = euler_phi(n)
        return Cyclotomic(n, tuple([Fraction(value)] + [_ZERO] * (phi - 1)))

    # -- conductor handling -------------------------------------------

    def lift(self, m: int) -> "Cyclotomic":
        """Rewrite in Q(zeta_m); m must be a multiple of the conductor."""
        if m == self.n:
            return self
        assert m % self.n == 0
        table = _zeta_power_table(m)
        step = m // self.n
        phi_m = euler_phi(m)
        out = [_ZERO] * phi_m
        for k, c in enumerate(self.coeffs):
            if c:
                row = table[(k * step) % m]
                for j, rj in enumerate(row):
                    if rj:
                        out[j] += c * rj
        return Cyclotomic(m, tuple(out))

    def _minimal(self):
        # smallest conductor d | n that contains the value, with its coeffs
        if self._min is not None:
            return self._min
        n = self.n
        for d in divisors(n):
            if d in (1, 2):
                continue  # rational values never reach here (demotion)
            phi_d = euler_phi(d)
            table = _zeta_power_table(n)
            step = n // d
            cols = [table[(k * step) % n] for k in range(phi_d)]
            rows = [[cols[k][j] for k in range(phi_d)] for j in range(euler_phi(n))]
            sol = _solve_rational(rows, list(self.coeffs))
            if sol is not None:
                self._min = (d, tuple(sol))
                return self._min
        self._min = (n, self.coeffs)
        return self._min

    # -- arithmetic ----------------------------------------------------

    def _pair(self, other):
        if isinstance(other, Cyclotomic):
            if other.n == self.n:
                return self, other
            m = math.lcm(self.n, other.n)
            return self.lift(m), other.lift(m)
        if isinstance(other, (int, Fraction)):
            return self, Cyclotomic.from_rational(self.n, other)
        return None

    def __add__(self, other):
        p = self._pair(other)
        if p is None:
            return NotImplemented
        a, b = p
        return Cyclotomic._make(a.n, [x + y for x, y in zip(a.coeffs, b.coeffs)])

    __radd__ = __add__

    def __neg__(self):
        return Cyclotomic(self.n, tuple(-c for c in self.coeffs))

    def __sub__(self, other):
        p = self._pair(other)
        if p is None:
            return NotImplemented
        a, b = p
        return Cyclotomic._make(a.n, [x - y for x, y in zip(a.coeffs, b.coeffs)])

    def __rsub__(self, other):
        neg = self.__sub__(other)
        if neg is NotImplemented:
            return NotImplemented
        return -neg

    def __mul__(self, other):
        if isinstance(other, (int, Fraction)):
            if other == 0:
                return _ZERO
            return Cyclotomic(self.n, tuple(c * other for c in self.coeffs))
        p = self._pair(other)
        if p is None:
            return NotImplemented
        a, b = p
        n, phi = a.n, len(a.coeffs)
        conv = [_ZERO] * (2 * phi - 1)
        for i, x in enumerate(a.coeffs):
            if x:
                for j, y in enumerate(b.coeffs):
                    if y:
                        conv[i + j] += x * y
        out = list(conv[:phi])
        table = _zeta_power_table(n)
        for e in range(phi, 2 * phi - 1):
            c = conv[e]
            if c:
                row = table[e % n]
                for j, rj in enumerate(row):
                    if rj:
                        out[j] += c * rj
        return Cyclotomic._make(n, out)

    __rmul__ = __mul__

    def inv(self) -> Scalar:
        """Multiplicative inverse; ZeroDivisionError on zero (unreachable)."""
        n, phi = self.n, len(self.coeffs)
        table = _zeta_power_table(n)
        # columns: self * zeta^k in the power basis
        cols = []
        for k in range(phi):
            col = [_ZERO] * (2 * phi - 1)
            for i, c in enumerate(self.coeffs):
                if c:
                    col[i + k] += c
            red = list(col[:phi])
            for e in range(phi, 2 * phi - 1):
                if col[e]:
                    row = table[e % n]
                    for j, rj in enumerate(row):
                        if rj:
                            red[j] += col[e] * rj
            cols.append(red)
        rows = [[cols[k][j] for k in range(phi)] for j in range(phi)]
        rhs = [_ONE] + [_ZERO] * (phi - 1)
        sol = _solve_rational(rows, rhs)
        if sol is None:
            raise ZeroDivisionError("cyclotomic inverse of zero")
        return Cyclotomic._make(n, sol)

    def __truediv__(self, other):
        if isinstance(other, (int, Fraction)):
            if other == 0:
                raise ZeroDivisionError("scalar division by zero")
            return self * (1 / Fraction(other))
        if isinstance(other, Cyclotomic):
            return self * other.inv()
        return NotImplemented

    def __rtruediv__(self, other):
        if isinstance(other, (int, Fraction)):
            return self.inv() * other
        return NotImplemented

    def __pow__(self, k: int):
        if not isinstance(k, int):
            return NotImplemented
        if k < 0:
            base = self.inv()
            k = -k
        else:
            base = self
        result: Scalar = _ONE
        while k:
            if k & 1:
                result = result * base
            base = base * base
            k >>= 1
        return result

    # -- comparison & hashing ------------------------------------------

    def __eq__(self, other):
        if isinstance(other, (int, Fraction)):
            return False  # live cyclotomics are irrational by construction
        if isinstance(other, Cyclotomic):
            a, b = self._pair(other)
            return a.coeffs == b.coeffs
        return NotImplemented

    def __hash__(self):
        if self._hashval is None:
            self._hashval = hash(("cyclotomic",) + (self._minimal(),))
        return self._hashval

    def __bool__(self):
        return True  # zero is a Fraction, never a Cyclotomic

    # -- text form -------------------------------------------------------

    def __str__(self):
        return scalar_to_str(self)

    def __repr__(self):
        return f"Cyclotomic({scalar_to_str(self)!r})"


def cyclotomic_root(n: int) -> Scalar:
    """A primitive n-th root of unity with exact order n.

    For n = 1 and n = 2 the value is rational (1 and -1).
    """
    if n < 1:
        raise ValidationError("conductor must be a positive integer")
    if n == 1:
        return _ONE
    if n == 2:
        return Fraction(-1)
    phi = euler_phi(n)
    coeffs = [_ZERO] * phi
    if phi == 1:  # cannot happen for n > 2
        raise AssertionError
    coeffs[1] = _ONE
    return Cyclotomic(n, tuple(coeffs))


def conductor_of(x: Scalar) -> int:
    return x.n if isinstance(x, Cyclotomic) else 1


def as_scalar(x) -> Scalar:
    if isinstance(x, Cyclotomic):
        return x
    if isinstance(x, bool):
        raise ValidationError("bool is not a scalar")
    if isinstance(x, (int, Fraction)):
        return Fraction(x)
    raise ValidationError(f"not an exact scalar: {x!r}")


def scalar_inverse(x: Scalar) -> Scalar:
    """Field inverse; raises ZeroDivisionError on zero."""
    x = as_scalar(x)
    if isinstance(x, Fraction):
        if x == 0:
            raise ZeroDivisionError("scalar division by zero")
        return 1 / x
    return x.inv()


# -- parsing and printing ---------------------------------------------------

def scalar_to_str(x: Scalar) -> str:
    """Deterministic text form; see the module docstring for the grammar."""
    x = as_scalar(x)
    if isinstance(x, Fraction):
        return str(x)
    terms = []
    for k in range(len(x.coeffs) - 1, -1, -1):
        c = x.coeffs[k]
        if c == 0:
            continue
        if k == 0:
            body = str(abs(c))
        else:
            z = "z" if k == 1 else f"z^{k}"
            body = z if abs(c) == 1 else f"{abs(c)}*{z}"
        sign = "-" if c < 0 else "+"
        terms.append((sign, body))
    assert terms
    first_sign, first_body = terms[0]
    out = ("-" if first_sign == "-" else "") + first_body
    for sign, body in terms[1:]:
        out += f" {sign} {body}"
    return f"{out}@n={x.n}"


_TERM_RE = re.compile(
    r"^(?P<sign>[+-])?(?P<num>\d+(?:/\d+)?)?\*?(?P<z>z(?:\^(?P<exp>\d+))?)?$"
)


def scalar_from_str(text: str) -> Scalar:
    """Parse the textual scalar form; exact inverse of `scalar_to_str`."""
    text = text.strip()
    if "@n=" in text:
        body, _, tag = text.rpartition("@n=")
        try:
            n = int(tag)
        except ValueError:
            raise ValidationError(f"bad conductor tag in {text!r}")
        if n < 1:
            raise ValidationError(f"bad conductor in {text!r}")
    else:
        body, n = text, 1
    body = body.strip()
    if not body:
        raise ValidationError("empty scalar string")
    # normalize "a - b + c" into signed tokens
    body = body.replace("-", "+-").replace(" ", "")
    parts = [p for p in body.split("+") if p]
    phi = euler_phi(n) if n > 2 else 1
    coeffs = [_ZERO] * max(phi, 1)
    max_exp = 0
    for part in parts:
        m = _TERM_RE.match(part)
        if not m or (m.group("num") is None and m.group("z") is None):
            raise ValidationError(f"cannot parse scalar term {part!r}")
        coef = Fraction(m.group("num")) if m.group("num") else Fraction(1)
        if m.group("sign") == "-":
            coef = -coef
        if m.group("z"):
            exp = int(m.group("exp") or 1)
        else:
            exp = 0
        max_exp = max(max_exp, exp)
        if n <= 2:
            if exp:
                raise ValidationError(f"z needs a conductor tag: {text!r}")
            coeffs[0] += coef
        else:
            if exp >= n:
                exp %= n
            if exp >= phi:
                table = _zeta_power_table(n)
                row = table[exp]
                for j, rj in enumerate(row):
                    coeffs[j] += coef * rj
            else:
                coeffs[exp] += coef
    if n <= 2:
        return coeffs[0]
    return Cyclotomic._make(n, coeffs)
