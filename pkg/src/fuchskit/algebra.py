"""Exact arithmetic kernel: Gaussian rationals, dense polynomials, rational
functions, truncated power series, and fraction-free matrix algebra.

Every computation in this module is exact.  Floating point enters only in
`poly_root_search`, where numeric root candidates are reconstructed as exact
scalars and then verified by exact substitution, so no unverified float ever
escapes.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Callable, Iterable, Sequence, Union

import mpmath


class AlgebraError(ValueError):
    pass


# ---------------------------------------------------------------------------
# scalars
# ---------------------------------------------------------------------------

ScalarLike = Union["GaussianRational", Fraction, int, str, dict]


@dataclass(frozen=True)
class GaussianRational:
    """Element of Q(i) with arbitrary-precision rational parts."""

    re: Fraction
    im: Fraction

    def __add__(self, other: ScalarLike) -> "GaussianRational":
        o = scalar(other)
        return GaussianRational(self.re + o.re, self.im + o.im)

    __radd__ = __add__

    def __sub__(self, other: ScalarLike) -> "GaussianRational":
        o = scalar(other)
        return GaussianRational(self.re - o.re, self.im - o.im)

    def __rsub__(self, other: ScalarLike) -> "GaussianRational":
        return scalar(other) - self

    def __mul__(self, other: ScalarLike) -> "GaussianRational":
        o = scalar(other)
        return GaussianRational(self.re * o.re - self.im * o.im,
                                self.re * o.im + self.im * o.re)

    __rmul__ = __mul__

    def __truediv__(self, other: ScalarLike) -> "GaussianRational":
        o = scalar(other)
        n = o.re * o.re + o.im * o.im
        if n == 0:
            raise ZeroDivisionError("division by zero scalar")
        return GaussianRational((self.re * o.re + self.im * o.im) / n,
                                (self.im * o.re - self.re * o.im) / n)

    def __rtruediv__(self, other: ScalarLike) -> "GaussianRational":
        return scalar(other) / self

    def __neg__(self) -> "GaussianRational":
        return GaussianRational(-self.re, -self.im)

    def __pow__(self, k: int) -> "GaussianRational":
        if k < 0:
            return ONE / (self ** (-k))
        out, base = ONE, self
        while k:
            if k & 1:
                out = out * base
            base = base * base
            k >>= 1
        return out

    def __eq__(self, other) -> bool:
        if isinstance(other, (GaussianRational, int, Fraction)):
            o = scalar(other)
            return self.re == o.re and self.im == o.im
        return NotImplemented

    def __hash__(self):
        return hash((self.re, self.im))

    def conjugate(self) -> "GaussianRational":
        return GaussianRational(self.re, -self.im)

    def norm2(self) -> Fraction:
        return self.re * self.re + self.im * self.im

    def is_zero(self) -> bool:
        return self.re == 0 and self.im == 0

    def is_rational(self) -> bool:
        return self.im == 0

    def is_integer(self) -> bool:
        return self.im == 0 and self.re.denominator == 1

    def as_int(self) -> int:
        if not self.is_integer():
            raise AlgebraError(f"not an integer: {self}")
        return int(self.re)

    def sort_key(self):
        return (self.re, self.im)

    def __complex__(self) -> complex:
        return complex(float(self.re), float(self.im))

    def to_json(self):
        """'p/q' for rational values, {'re':..,'im':..} otherwise."""
        if self.im == 0:
            return str(self.re)
        return {"re": str(self.re), "im": str(self.im)}

    def __str__(self) -> str:
        if self.im == 0:
            return str(self.re)
        im = f"{self.im}*i" if abs(self.im) != 1 else ("i" if self.im > 0 else "-i")
        if self.re == 0:
            return im
        return f"{self.re}{'+' if self.im > 0 else ''}{im}"

    __repr__ = __str__


def scalar(x: ScalarLike) -> GaussianRational:
    """Coerce int/Fraction/str/dict into a GaussianRational.

    Strings follow the serialization convention: 'p/q' is rational; complex
    values travel as {'re': 'p/q', 'im': 'r/s'}.
    """
    if isinstance(x, GaussianRational):
        return x
    if isinstance(x, (int, Fraction)):
        return GaussianRational(Fraction(x), Fraction(0))
    if isinstance(x, str):
        return GaussianRational(Fraction(x.strip()), Fraction(0))
    if isinstance(x, dict):
        return GaussianRational(Fraction(str(x.get("re", 0)).strip()),
                                Fraction(str(x.get("im", 0)).strip()))
    raise AlgebraError(f"cannot coerce {x!r} to a scalar")


ZERO = GaussianRational(Fraction(0), Fraction(0))
ONE = GaussianRational(Fraction(1), Fraction(0))
I = GaussianRational(Fraction(0), Fraction(1))


def falling_factorial(x, k: int):
    """x(x-1)...(x-k+1); works for scalars and for polynomial arguments."""
    if k < 0:
        raise AlgebraError("falling factorial needs k >= 0")
    out = x * 0 + 1
    for j in range(k):
        out = out * (x - j)
    return out


# ---------------------------------------------------------------------------
# polynomials
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class Polynomial:
    """Dense univariate polynomial over Q(i), coefficients lowest degree first.

    Invariant: no trailing zero coefficients; the zero polynomial has an
    empty coefficient tuple and degree -1.
    """

    coeffs: tuple

    @staticmethod
    def of(*cs) -> "Polynomial":
        return Polynomial.from_list(cs)

    @staticmethod
    def from_list(cs: Iterable) -> "Polynomial":
        lst = [scalar(c) for c in cs]
        while lst and lst[-1].is_zero():
            lst.pop()
        return Polynomial(tuple(lst))

    @staticmethod
    def zero() -> "Polynomial":
        return Polynomial(())

    @staticmethod
    def one() -> "Polynomial":
        return Polynomial((ONE,))

    @staticmethod
    def x() -> "Polynomial":
        return Polynomial((ZERO, ONE))

    @staticmethod
    def constant(c) -> "Polynomial":
        return Polynomial.from_list([scalar(c)])

    @staticmethod
    def from_roots(roots: Sequence[ScalarLike]) -> "Polynomial":
        p = Polynomial.one()
        for r in roots:
            p = p * Polynomial.from_list([-scalar(r), ONE])
        return p

    def degree(self) -> int:
        return len(self.coeffs) - 1

    def is_zero(self) -> bool:
        return not self.coeffs

    def lc(self) -> GaussianRational:
        if self.is_zero():
            raise AlgebraError("zero polynomial has no leading coefficient")
        return self.coeffs[-1]

    def coeff(self, j: int) -> GaussianRational:
        return self.coeffs[j] if 0 <= j < len(self.coeffs) else ZERO

    def __add__(self, other) -> "Polynomial":
        o = _as_poly(other)
        n = max(len(self.coeffs), len(o.coeffs))
        return Polynomial.from_list(
            [self.coeff(j) + o.coeff(j) for j in range(n)])

    __radd__ = __add__

    def __sub__(self, other) -> "Polynomial":
        return self + (-_as_poly(other))

    def __rsub__(self, other) -> "Polynomial":
        return _as_poly(other) - self

    def __neg__(self) -> "Polynomial":
        return Polynomial(tuple(-c for c in self.coeffs))

    def __mul__(self, other) -> "Polynomial":
        o = _as_poly(other)
        if self.is_zero() or o.is_zero():
            return Polynomial.zero()
        out = [ZERO] * (len(self.coeffs) + len(o.coeffs) - 1)
        for i, a in enumerate(self.coeffs):
            if a.is_zero():
                continue
            for j, b in enumerate(o.coeffs):
                out[i + j] = out[i + j] + a * b
        return Polynomial.from_list(out)

    __rmul__ = __mul__

    def __pow__(self, k: int) -> "Polynomial":
        if k < 0:
            raise AlgebraError("negative polynomial power")
        out, base = Polynomial.one(), self
        while k:
            if k & 1:
                out = out * base
            base = base * base
            k >>= 1
        return out

    def __eq__(self, other) -> bool:
        if isinstance(other, (Polynomial, GaussianRational, int, Fraction)):
            return self.coeffs == _as_poly(other).coeffs
        return NotImplemented

    def __hash__(self):
        return hash(self.coeffs)

    def __divmod__(self, other):
        o = _as_poly(other)
        if o.is_zero():
            raise ZeroDivisionError("polynomial division by zero")
        rem = list(self.coeffs)
        quo = [ZERO] * max(0, len(rem) - len(o.coeffs) + 1)
        dlc = o.lc()
        while len(rem) >= len(o.coeffs):
            while rem and rem[-1].is_zero():
                rem.pop()
            if len(rem) < len(o.coeffs):
                break
            q = rem[-1] / dlc
            shift = len(rem) - len(o.coeffs)
            quo[shift] = q
            for j, c in enumerate(o.coeffs):
                rem[shift + j] = rem[shift + j] - q * c
            rem.pop()
        return Polynomial.from_list(quo), Polynomial.from_list(rem)

    def exact_div(self, other) -> "Polynomial":
        q, r = divmod(self, other)
        if not r.is_zero():
            raise AlgebraError("inexact polynomial division")
        return q

    def monic(self) -> "Polynomial":
        if self.is_zero():
            return self
        inv = ONE / self.lc()
        return Polynomial(tuple(c * inv for c in self.coeffs))

    def derivative(self) -> "Polynomial":
        return Polynomial.from_list(
            [c * j for j, c in enumerate(self.coeffs)][1:])

    def __call__(self, x: ScalarLike) -> GaussianRational:
        x = scalar(x)
        out = ZERO
        for c in reversed(self.coeffs):
            out = out * x + c
        return out

    def shift(self, c: ScalarLike) -> "Polynomial":
        """p(z + c), i.e. recenter the variable at -c."""
        c = scalar(c)
        out = Polynomial.zero()
        zc = Polynomial.from_list([c, ONE])
        for a in reversed(self.coeffs):
            out = out * zc + Polynomial.constant(a)
        return out

    def compose(self, q: "Polynomial") -> "Polynomial":
        out = Polynomial.zero()
        for a in reversed(self.coeffs):
            out = out * q + Polynomial.constant(a)
        return out

    def reversed_coeffs(self, upto: int | None = None) -> "Polynomial":
        """z^d * p(1/z) where d = upto (defaults to deg p)."""
        d = self.degree() if upto is None else upto
        if d < self.degree():
            raise AlgebraError("reversal degree below polynomial degree")
        out = [ZERO] * (d + 1)
        for j, c in enumerate(self.coeffs):
            out[d - j] = c
        return Polynomial.from_list(out)

    def is_real(self) -> bool:
        return all(c.im == 0 for c in self.coeffs)

    def to_json(self) -> list:
        return [c.to_json() for c in self.coeffs]

    def __str__(self) -> str:
        if self.is_zero():
            return "0"
        parts = []
        for j, c in enumerate(self.coeffs):
            if c.is_zero():
                continue
            cs = str(c)
            if "+" in cs[1:] or "-" in cs[1:]:
                cs = f"({cs})"
            if j == 0:
                parts.append(cs)
            else:
                var = "z" if j == 1 else f"z^{j}"
                parts.append(var if cs == "1" else (f"-{var}" if cs == "-1" else f"{cs}*{var}"))
        return " + ".join(parts).replace("+ -", "- ")

    __repr__ = __str__


def _as_poly(x) -> Polynomial:
    if isinstance(x, Polynomial):
        return x
    return Polynomial.from_list([scalar(x)])


def poly_gcd(a: Polynomial, b: Polynomial) -> Polynomial:
    """Monic gcd via the Euclidean algorithm (coefficients form a field)."""
    while not b.is_zero():
        a, b = b, divmod(a, b)[1]
    return a.monic() if not a.is_zero() else a


# ---------------------------------------------------------------------------
# rational functions
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class RationalFunction:
    """num/den in lowest terms with monic denominator."""

    num: Polynomial
    den: Polynomial

    @staticmethod
    def make(num, den=None) -> "RationalFunction":
        num = _as_poly(num)
        den = Polynomial.one() if den is None else _as_poly(den)
        if den.is_zero():
            raise ZeroDivisionError("zero denominator")
        g = poly_gcd(num, den)
        if not g.is_zero() and g.degree() > 0:
            num, den = num.exact_div(g), den.exact_div(g)
        lc = den.lc()
        if lc != ONE:
            inv = ONE / lc
            num = num * inv
            den = den * inv
        return RationalFunction(num, den)

    @staticmethod
    def zero() -> "RationalFunction":
        return RationalFunction(Polynomial.zero(), Polynomial.one())

    @staticmethod
    def one() -> "RationalFunction":
        return RationalFunction(Polynomial.one(), Polynomial.one())

    def is_zero(self) -> bool:
        return self.num.is_zero()

    def is_polynomial(self) -> bool:
        return self.den.degree() == 0

    def __add__(self, other) -> "RationalFunction":
        o = _as_rf(other)
        return RationalFunction.make(self.num * o.den + o.num * self.den,
                                     self.den * o.den)

    __radd__ = __add__

    def __sub__(self, other) -> "RationalFunction":
        return self + (-_as_rf(other))

    def __rsub__(self, other) -> "RationalFunction":
        return _as_rf(other) - self

    def __neg__(self) -> "RationalFunction":
        return RationalFunction(-self.num, self.den)

    def __mul__(self, other) -> "RationalFunction":
        o = _as_rf(other)
        return RationalFunction.make(self.num * o.num, self.den * o.den)

    __rmul__ = __mul__

    def __truediv__(self, other) -> "RationalFunction":
        o = _as_rf(other)
        if o.is_zero():
            raise ZeroDivisionError("division by zero rational function")
        return RationalFunction.make(self.num * o.den, self.den * o.num)

    def __rtruediv__(self, other) -> "RationalFunction":
        return _as_rf(other) / self

    def __eq__(self, other) -> bool:
        if isinstance(other, (RationalFunction, Polynomial, GaussianRational,
                              int, Fraction)):
            o = _as_rf(other)
            return self.num == o.num and self.den == o.den
        return NotImplemented

    def __hash__(self):
        return hash((self.num, self.den))

    def derivative(self) -> "RationalFunction":
        return RationalFunction.make(
            self.num.derivative() * self.den - self.num * self.den.derivative(),
            self.den * self.den)

    def __call__(self, x: ScalarLike) -> GaussianRational:
        x = scalar(x)
        d = self.den(x)
        if d.is_zero():
            raise AlgebraError(f"evaluation at a pole: {x}")
        return self.num(x) / d

    def pole_order_at(self, p: ScalarLike) -> int:
        p = scalar(p)
        k = 0
        den = self.den
        while den.degree() >= 1 and den(p).is_zero():
            den = den.exact_div(Polynomial.from_roots([p]))
            k += 1
        return k

    def residue_at(self, p: ScalarLike) -> GaussianRational:
        """Coefficient of 1/(z-p) in the Laurent expansion at p."""
        p = scalar(p)
        e = self.pole_order_at(p)
        if e == 0:
            return ZERO
        rest = self.den
        for _ in range(e):
            rest = rest.exact_div(Polynomial.from_roots([p]))
        ser = series_of_rational(RationalFunction.make(self.num, rest), p, e - 1)
        return ser.coeffs[e - 1]

    def subst_reciprocal(self) -> "RationalFunction":
        """f(1/z) as a rational function of z."""
        dn, dd = self.num.degree(), self.den.degree()
        if self.is_zero():
            return self
        d = max(dn, dd)
        num = self.num.reversed_coeffs(d)
        den = self.den.reversed_coeffs(d)
        return RationalFunction.make(num, den)

    def to_json(self) -> dict:
        return {"num": self.num.to_json(), "den": self.den.to_json()}

    def __str__(self) -> str:
        if self.is_polynomial():
            return str(self.num)
        return f"({self.num})/({self.den})"

    __repr__ = __str__


def _as_rf(x) -> RationalFunction:
    if isinstance(x, RationalFunction):
        return x
    return RationalFunction.make(_as_poly(x))


# ---------------------------------------------------------------------------
# truncated power series
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class TruncatedSeries:
    """sum_j coeffs[j] (z - center)^j with an O((z-center)^{order+1}) tail.

    Arithmetic truncates to the shorter operand, so order bookkeeping is
    conservative and never overstates known coefficients.
    """

    center: GaussianRational
    coeffs: tuple

    @staticmethod
    def make(center: ScalarLike, cs: Iterable) -> "TruncatedSeries":
        return TruncatedSeries(scalar(center), tuple(scalar(c) for c in cs))

    def order(self) -> int:
        return len(self.coeffs) - 1

    def _check(self, o: "TruncatedSeries"):
        if self.center != o.center:
            raise AlgebraError("series centers differ")

    def __add__(self, o: "TruncatedSeries") -> "TruncatedSeries":
        self._check(o)
        n = min(len(self.coeffs), len(o.coeffs))
        return TruncatedSeries(self.center,
                               tuple(self.coeffs[j] + o.coeffs[j] for j in range(n)))

    def __sub__(self, o: "TruncatedSeries") -> "TruncatedSeries":
        self._check(o)
        n = min(len(self.coeffs), len(o.coeffs))
        return TruncatedSeries(self.center,
                               tuple(self.coeffs[j] - o.coeffs[j] for j in range(n)))

    def __mul__(self, o: "TruncatedSeries") -> "TruncatedSeries":
        self._check(o)
        n = min(len(self.coeffs), len(o.coeffs))
        out = [ZERO] * n
        for i in range(n):
            a = self.coeffs[i]
            if a.is_zero():
                continue
            for j in range(n - i):
                out[i + j] = out[i + j] + a * o.coeffs[j]
        return TruncatedSeries(self.center, tuple(out))

    def scale(self, c: ScalarLike) -> "TruncatedSeries":
        c = scalar(c)
        return TruncatedSeries(self.center, tuple(a * c for a in self.coeffs))

    def valuation(self) -> int | None:
        for j, c in enumerate(self.coeffs):
            if not c.is_zero():
                return j
        return None


def series_of_rational(rf: RationalFunction, center: ScalarLike,
                       order: int) -> TruncatedSeries:
    """Taylor coefficients of rf at `center` through (z-center)^order.

    Errors out when the (already gcd-reduced) denominator vanishes at the
    center, i.e. on expansion at a genuine pole.
    """
    center = scalar(center)
    num = rf.num.shift(center)
    den = rf.den.shift(center)
    d0 = den.coeff(0)
    if d0.is_zero():
        raise AlgebraError(f"series expansion at a pole: {center}")
    inv = ONE / d0
    out = []
    for j in range(order + 1):
        acc = num.coeff(j)
        for t in range(1, j + 1):
            acc = acc - den.coeff(t) * out[j - t]
        out.append(acc * inv)
    return TruncatedSeries(center, tuple(out))


# ---------------------------------------------------------------------------
# matrices
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class ExactMatrix:
    """Dense matrix over an exact ring (scalars, polynomials, or rational
    functions).  Determinant and rank use fraction-free Bareiss elimination;
    the intermediate divisions are exact in the entry ring.
    """

    rows: tuple

    @staticmethod
    def from_rows(rows: Iterable[Iterable]) -> "ExactMatrix":
        return ExactMatrix(tuple(tuple(r) for r in rows))

    @staticmethod
    def identity(n: int, one=None) -> "ExactMatrix":
        one = ONE if one is None else one
        zero = one - one
        return ExactMatrix(tuple(
            tuple(one if i == j else zero for j in range(n)) for i in range(n)))

    def shape(self) -> tuple:
        return (len(self.rows), len(self.rows[0]) if self.rows else 0)

    def entry(self, i: int, j: int):
        return self.rows[i][j]

    def transpose(self) -> "ExactMatrix":
        m, n = self.shape()
        return ExactMatrix(tuple(
            tuple(self.rows[i][j] for i in range(m)) for j in range(n)))

    def map(self, fn: Callable) -> "ExactMatrix":
        return ExactMatrix(tuple(tuple(fn(e) for e in row) for row in self.rows))

    def __add__(self, o: "ExactMatrix") -> "ExactMatrix":
        return ExactMatrix(tuple(
            tuple(a + b for a, b in zip(r1, r2))
            for r1, r2 in zip(self.rows, o.rows)))

    def __sub__(self, o: "ExactMatrix") -> "ExactMatrix":
        return ExactMatrix(tuple(
            tuple(a - b for a, b in zip(r1, r2))
            for r1, r2 in zip(self.rows, o.rows)))

    def __mul__(self, o: "ExactMatrix") -> "ExactMatrix":
        m, k = self.shape()
        k2, n = o.shape()
        if k != k2:
            raise AlgebraError("matrix shape mismatch")
        return ExactMatrix(tuple(
            tuple(_dot(self.rows[i], [o.rows[t][j] for t in range(k)])
                  for j in range(n)) for i in range(m)))

    def scale(self, c) -> "ExactMatrix":
        return self.map(lambda e: e * c)

    def trace(self):
        m, n = self.shape()
        if m != n:
            raise AlgebraError("trace of a non-square matrix")
        out = self.rows[0][0]
        for i in range(1, m):
            out = out + self.rows[i][i]
        return out

    def det(self):
        """Fraction-free (Bareiss) determinant; exact in the entry ring."""
        m, n = self.shape()
        if m != n:
            raise AlgebraError("determinant of a non-square matrix")
        if m == 0:
            return ONE
        a = [list(r) for r in self.rows]
        zero = a[0][0] - a[0][0]
        sign = 1
        prev = None
        for r in range(m - 1):
            if _entry_is_zero(a[r][r]):
                for r2 in range(r + 1, m):
                    if not _entry_is_zero(a[r2][r]):
                        a[r], a[r2] = a[r2], a[r]
                        sign = -sign
                        break
                else:
                    return zero
            for i in range(r + 1, m):
                for j in range(r + 1, m):
                    v = a[i][j] * a[r][r] - a[i][r] * a[r][j]
                    a[i][j] = v if prev is None else _exact_div(v, prev)
                a[i][r] = zero
            prev = a[r][r]
        d = a[m - 1][m - 1]
        return d if sign == 1 else -d

    def rank(self) -> int:
        """Row rank by fraction-free forward elimination."""
        m, n = self.shape()
        a = [list(r) for r in self.rows]
        prev = None
        rank = 0
        row = 0
        for col in range(n):
            piv = None
            for r in range(row, m):
                if not _entry_is_zero(a[r][col]):
                    piv = r
                    break
            if piv is None:
                continue
            a[row], a[piv] = a[piv], a[row]
            for i in range(row + 1, m):
                for j in range(col + 1, n):
                    v = a[i][j] * a[row][col] - a[i][col] * a[row][j]
                    a[i][j] = v if prev is None else _exact_div(v, prev)
                a[i][col] = a[i][col] - a[i][col]
            prev = a[row][col]
            rank += 1
            row += 1
            if row == m:
                break
        return rank

    def rref(self) -> tuple:
        """Reduced row echelon form over a field; returns (matrix, pivot cols)."""
        m, n = self.shape()
        a = [list(r) for r in self.rows]
        pivots = []
        row = 0
        for col in range(n):
            piv = None
            for r in range(row, m):
                if not _entry_is_zero(a[r][col]):
                    piv = r
                    break
            if piv is None:
                continue
            a[row], a[piv] = a[piv], a[row]
            inv = a[row][col]
            a[row] = [_field_div(e, inv) for e in a[row]]
            for r in range(m):
                if r != row and not _entry_is_zero(a[r][col]):
                    f = a[r][col]
                    a[r] = [e - f * p for e, p in zip(a[r], a[row])]
            pivots.append(col)
            row += 1
            if row == m:
                break
        return ExactMatrix.from_rows(a), tuple(pivots)

    def nullspace(self) -> list:
        """Basis of the right nullspace (field entries), as column vectors."""
        m, n = self.shape()
        red, pivots = self.rref()
        free = [j for j in range(n) if j not in pivots]
        zero = self.rows[0][0] - self.rows[0][0] if self.rows else ZERO
        one = _ring_one(zero)
        basis = []
        for f in free:
            vec = [zero] * n
            vec[f] = one
            for r, pc in enumerate(pivots):
                vec[pc] = -red.rows[r][f]
            basis.append(tuple(vec))
        return basis

    def inverse(self) -> "ExactMatrix":
        m, n = self.shape()
        if m != n:
            raise AlgebraError("inverse of a non-square matrix")
        zero = self.rows[0][0] - self.rows[0][0]
        one = _ring_one(zero)
        aug = ExactMatrix.from_rows(
            [list(self.rows[i]) + [one if j == i else zero for j in range(n)]
             for i in range(n)])
        red, pivots = aug.rref()
        if tuple(pivots) != tuple(range(n)):
            raise AlgebraError("matrix is singular")
        return ExactMatrix.from_rows(
            [row[n:] for row in red.rows])

    def char_poly(self) -> Polynomial:
        """det(x I - M) for a scalar matrix, monic, exact."""
        m, n = self.shape()
        if m != n:
            raise AlgebraError("characteristic polynomial of non-square matrix")
        x = Polynomial.x()
        mat = ExactMatrix.from_rows(
            [[(x if i == j else Polynomial.zero()) - Polynomial.constant(self.rows[i][j])
              for j in range(n)] for i in range(m)])
        d = mat.det()
        return d if isinstance(d, Polynomial) else Polynomial.constant(d)

    def to_json(self):
        def enc(e):
            return e.to_json() if hasattr(e, "to_json") else str(e)
        return [[enc(e) for e in row] for row in self.rows]


def _dot(row, col):
    it = iter(zip(row, col))
    a, b = next(it)
    out = a * b
    for a, b in it:
        out = out + a * b
    return out


def _entry_is_zero(e) -> bool:
    return e.is_zero()


def _exact_div(a, b):
    if isinstance(a, Polynomial):
        return a.exact_div(b)
    return a / b


def _field_div(a, b):
    if isinstance(a, Polynomial):
        return a.exact_div(b)
    return a / b


def _ring_one(zero):
    if isinstance(zero, Polynomial):
        return Polynomial.one()
    if isinstance(zero, RationalFunction):
        return RationalFunction.one()
    return ONE


# ---------------------------------------------------------------------------
# root search over Q(i)
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class RootSearchResult:
    roots: tuple            # ((GaussianRational, multiplicity), ...)
    remainder: Polynomial   # unfactored part, constant when fully split
    complete: bool

    def root_list(self) -> list:
        out = []
        for r, mult in self.roots:
            out.extend([r] * mult)
        return out


def poly_root_search(p: Polynomial, denominator_bound: int = 10 ** 24) -> RootSearchResult:
    """All roots of p lying in Q(i), with multiplicities.

    Strategy: factor out the square-free part exactly, locate its roots
    numerically at high precision, reconstruct nearby Gaussian-rational
    candidates, and keep only candidates that verify by exact substitution.
    Multiplicities come from repeated exact division.  Anything that does not
    verify stays in `remainder` and is flagged by `complete=False`.
    """
    if p.is_zero():
        raise AlgebraError("root search on the zero polynomial")
    roots = []
    work = p
    zmult = 0
    while work.degree() >= 1 and work.coeff(0).is_zero():
        work = work.exact_div(Polynomial.x())
        zmult += 1
    if zmult:
        roots.append((ZERO, zmult))
    if work.degree() >= 1:
        sf = work.exact_div(poly_gcd(work, work.derivative())) \
            if work.degree() >= 2 else work
        for cand in _numeric_candidates(sf, denominator_bound):
            if cand.is_zero():
                continue
            if not work(cand).is_zero():
                continue
            mult = 0
            lin = Polynomial.from_roots([cand])
            while True:
                qq, r = divmod(work, lin)
                if not r.is_zero():
                    break
                work = qq
                mult += 1
            if mult:
                roots.append((cand, mult))
    roots.sort(key=lambda t: t[0].sort_key())
    complete = work.degree() <= 0
    return RootSearchResult(tuple(roots), work, complete)


def _numeric_candidates(sf: Polynomial, denominator_bound: int) -> list:
    if sf.degree() < 1:
        return []
    if sf.degree() == 1:
        return [-sf.coeff(0) / sf.coeff(1)]
    digits = max(60, 4 * _coeff_digits(sf))
    with mpmath.workdps(digits):
        cs = [_to_mpc(c) for c in reversed(sf.coeffs)]
        try:
            approx = mpmath.polyroots(cs, maxsteps=200, extraprec=digits * 4)
        except Exception:
            return []
        out = []
        for r in approx:
            fre = _reconstruct(mpmath.re(r), denominator_bound)
            fim = _reconstruct(mpmath.im(r), denominator_bound)
            out.append(GaussianRational(fre, fim))
        return out


def _coeff_digits(p: Polynomial) -> int:
    worst = 1
    for c in p.coeffs:
        for f in (c.re, c.im):
            worst = max(worst, len(str(abs(f.numerator))), len(str(f.denominator)))
    return worst


def _to_mpc(c: GaussianRational):
    return mpmath.mpc(mpmath.mpf(c.re.numerator) / c.re.denominator,
                      mpmath.mpf(c.im.numerator) / c.im.denominator)


def _reconstruct(x, bound: int) -> Fraction:
    s = mpmath.nstr(x, 40)
    try:
        f = Fraction(s)
    except ValueError:
        f = Fraction(float(x))
    return f.limit_denominator(bound)
