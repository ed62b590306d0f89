"""Data model for scalar Fuchsian operators on the projective line.

An operator of order m is stored by its finite singular points and the
numerator polynomials of its coefficients, under the fixed convention

    w^(m) = sum_{k=1}^{m}  coeffs[k-1] / psi^k * w^(m-k)

where psi is the monic product of (z - point) over real and apparent
points together.  Regularity at infinity holds exactly when
deg coeffs[k-1] <= k*(n + N - 1), with n real and N apparent points.
"""

from __future__ import annotations

import json
import re
from dataclasses import dataclass
from typing import Iterable, Mapping, Union

from .algebra import (
    AlgebraError,
    GaussianRational,
    Polynomial,
    scalar,
)


class DomainError(ValueError):
    """Invalid operator data or an operation outside its domain."""


def _as_points(pts) -> tuple:
    try:
        return tuple(scalar(p) for p in pts)
    except (AlgebraError, ValueError, ZeroDivisionError) as exc:
        raise DomainError(f"malformed number in point list: {exc}") from exc


def _as_coeff(c) -> Polynomial:
    if isinstance(c, Polynomial):
        return c
    if isinstance(c, str):
        raise DomainError(f"coefficient must be a coefficient array, got {c!r}")
    return Polynomial.from_list(c)


@dataclass(frozen=True)
class FuchsianOperator:
    order: int
    real_points: tuple
    apparent_points: tuple
    coeffs: tuple  # numerator polynomials, index k-1 pairs with psi^k

    def __post_init__(self):
        if not isinstance(self.order, int) or self.order < 1:
            raise DomainError(f"order must be a positive integer, got {self.order!r}")
        object.__setattr__(self, "real_points", _as_points(self.real_points))
        object.__setattr__(self, "apparent_points", _as_points(self.apparent_points))
        try:
            object.__setattr__(self, "coeffs", tuple(_as_coeff(c) for c in self.coeffs))
        except (AlgebraError, ValueError, ZeroDivisionError) as exc:
            raise DomainError(f"malformed coefficient: {exc}") from exc
        if len(self.coeffs) != self.order:
            raise DomainError(
                f"order mismatch: order {self.order} needs {self.order} coefficient "
                f"polynomials, got {len(self.coeffs)}")
        pts = self.real_points + self.apparent_points
        if len(set(pts)) != len(pts):
            raise DomainError("points not distinct")

    @property
    def num_real(self) -> int:
        return len(self.real_points)

    @property
    def num_apparent(self) -> int:
        return len(self.apparent_points)

    @property
    def all_points(self) -> tuple:
        return self.real_points + self.apparent_points

    def coeff(self, k: int) -> Polynomial:
        """Numerator polynomial paired with psi^k, 1 <= k <= order."""
        if not 1 <= k <= self.order:
            raise DomainError(f"coefficient index {k} outside 1..{self.order}")
        return self.coeffs[k - 1]

    def to_json(self) -> dict:
        return {
            "order": self.order,
            "real_points": [p.to_json() for p in self.real_points],
            "apparent_points": [p.to_json() for p in self.apparent_points],
            "coeffs": [c.to_json() for c in self.coeffs],
        }

    def __str__(self) -> str:
        pts = ", ".join(str(p) for p in self.real_points) or "no finite points"
        app = ", ".join(str(p) for p in self.apparent_points)
        tail = f"; apparent {app}" if app else ""
        return f"order-{self.order} operator at {pts}{tail}"

    __repr__ = __str__


def psi_all(op: FuchsianOperator) -> Polynomial:
    """Monic product of (z - q) over every listed finite point."""
    return Polynomial.from_roots(op.all_points)


@dataclass(frozen=True)
class DegreeCheck:
    k: int
    observed: int
    allowed: int
    ok: bool


@dataclass(frozen=True)
class ValidationReport:
    # one entry per coefficient, k ascending
    fuchs_degree_ok: tuple
    infinity_regular: bool
    messages: tuple

    @property
    def ok(self) -> bool:
        return self.infinity_regular

    def to_json(self) -> dict:
        return {
            "ok": self.ok,
            "fuchs_degree_ok": [
                {"k": c.k, "observed": c.observed, "allowed": c.allowed, "ok": c.ok}
                for c in self.fuchs_degree_ok
            ],
            "infinity_regular": self.infinity_regular,
            "messages": list(self.messages),
        }


def validate_fuchsian(op: FuchsianOperator) -> ValidationReport:
    """Check the degree bound deg coeffs[k-1] <= k*(n+N-1) for every k.

    Distinctness of points is already enforced at construction; the report
    only concerns regularity at infinity.
    """
    budget = op.num_real + op.num_apparent - 1
    checks = []
    messages = []
    for k in range(1, op.order + 1):
        observed = op.coeffs[k - 1].degree()
        allowed = k * budget
        # the zero polynomial (degree -1) always passes, even when the
        # formal bound is negative (operators with no finite points)
        ok = observed <= allowed or observed < 0
        checks.append(DegreeCheck(k=k, observed=observed, allowed=allowed, ok=ok))
        if not ok:
            messages.append(
                f"coefficient {k}: degree {observed} exceeds bound {allowed}")
    return ValidationReport(fuchs_degree_ok=tuple(checks),
                            infinity_regular=all(c.ok for c in checks),
                            messages=tuple(messages))


@dataclass(frozen=True)
class AccessoryDegrees:
    degrees: tuple  # allowed max degree of coeffs[k-1], k = 1..order
    total: int      # coefficient count over all k


def degree_budget(order: int, num_real: int, num_apparent: int) -> AccessoryDegrees:
    d = num_real + num_apparent - 1
    degrees = tuple(k * d for k in range(1, order + 1))
    total = order + order * (order + 1) * d // 2
    assert total == sum(b + 1 for b in degrees)
    return AccessoryDegrees(degrees=degrees, total=total)


def accessory_degrees(op: FuchsianOperator) -> AccessoryDegrees:
    """Per-coefficient degree allowance and the total parameter count."""
    return degree_budget(op.order, op.num_real, op.num_apparent)


# ---------------------------------------------------------------------------
# parsing


_TOKEN = re.compile(r"\s*(\d+|[A-Za-z_]+|\*\*|[()^*/+\-,:=']|\S)")


def _tokenize(s: str):
    out = []
    pos = 0
    while pos < len(s):
        m = _TOKEN.match(s, pos)
        if m is None:
            break
        tok = m.group(1)
        if tok == "**":
            tok = "^"
        out.append(tok)
        pos = m.end()
    return out


class _ExprParser:
    """Recursive-descent parser for polynomial expressions in z over Q(i).

    Grammar: sums/differences of products, '^' for powers, '/' only by a
    nonzero constant, unary minus, parentheses.  No implicit products.
    """

    def __init__(self, tokens):
        self.toks = tokens
        self.pos = 0

    def peek(self):
        return self.toks[self.pos] if self.pos < len(self.toks) else None

    def take(self):
        tok = self.peek()
        self.pos += 1
        return tok

    def expect(self, tok):
        got = self.take()
        if got != tok:
            raise DomainError(f"expected {tok!r}, got {got!r}")

    def expr(self) -> Polynomial:
        out = self.term()
        while self.peek() in ("+", "-"):
            if self.take() == "+":
                out = out + self.term()
            else:
                out = out - self.term()
        return out

    def term(self) -> Polynomial:
        out = self.unary()
        while self.peek() in ("*", "/"):
            if self.take() == "*":
                out = out * self.unary()
            else:
                d = self.unary()
                if d.degree() != 0:
                    raise DomainError("division only by a nonzero constant")
                out = out * Polynomial.constant(scalar(1) / d.coeff(0))
        return out

    def unary(self) -> Polynomial:
        if self.peek() == "-":
            self.take()
            return Polynomial.zero() - self.unary()
        if self.peek() == "+":
            self.take()
            return self.unary()
        return self.power()

    def power(self) -> Polynomial:
        base = self.atom()
        if self.peek() == "^":
            self.take()
            e = self.take()
            if e is None or not e.isdigit():
                raise DomainError(f"exponent must be a nonnegative integer, got {e!r}")
            return base ** int(e)
        return base

    def atom(self) -> Polynomial:
        tok = self.take()
        if tok is None:
            raise DomainError("unexpected end of expression")
        if tok.isdigit():
            return Polynomial.constant(int(tok))
        if tok == "i":
            return Polynomial.constant(scalar({"re": "0", "im": "1"}))
        if tok == "z":
            return Polynomial.x()
        if tok == "(":
            inner = self.expr()
            self.expect(")")
            return inner
        raise DomainError(f"unexpected token {tok!r} in expression")


def parse_poly_expr(text: str) -> Polynomial:
    """Parse an expression like '1/2 + 3*z - z^2' or '(1+i)*z'."""
    p = _ExprParser(_tokenize(text))
    out = p.expr()
    if p.peek() is not None:
        raise DomainError(f"trailing input {p.peek()!r} in expression {text!r}")
    return out


def _parse_scalar_expr(text: str) -> GaussianRational:
    p = parse_poly_expr(text)
    if p.degree() > 0:
        raise DomainError(f"expected a number, got polynomial {text!r}")
    return p.coeff(0)


_EQ_LHS = re.compile(r"^\s*w\s*('+)\s*$")
_TERM_TAIL = re.compile(r"^\s*(?:\^\s*(\d+))?\s*(\))?\s*\*?\s*w\s*('*)\s*$")


def _split_top_level(s: str, seps: str):
    """Split on separator chars at paren depth 0; keeps separators out."""
    parts, signs, depth, start = [], [], 0, 0
    for idx, ch in enumerate(s):
        if ch == "(":
            depth += 1
        elif ch == ")":
            depth -= 1
        elif ch in seps and depth == 0 and idx > start:
            parts.append(s[start:idx])
            signs.append(ch)
            start = idx + 1
    parts.append(s[start:])
    return parts, signs


def _parse_equation(line: str, real_points, apparent_points) -> FuchsianOperator:
    lhs, _, rhs = line.partition("=")
    m_lhs = _EQ_LHS.match(lhs)
    if not m_lhs:
        raise DomainError(f"left side must be w with primes, got {lhs.strip()!r}")
    order = len(m_lhs.group(1))
    if order > 3:
        raise DomainError("text form supports order <= 3; use the JSON form")
    rhs = rhs.strip()
    coeffs = {k: Polynomial.zero() for k in range(1, order + 1)}
    if rhs != "0":
        chunks, seps = _split_top_level(rhs, "+-")
        signs = [1] + [(-1 if s == "-" else 1) for s in seps]
        for sign, chunk in zip(signs, chunks):
            if not chunk.strip():
                raise DomainError(f"empty term in {rhs!r}")
            hit = re.search(r"/\s*psi", chunk)
            if hit is None:
                raise DomainError(f"term {chunk.strip()!r} lacks a /psi factor")
            num_part = chunk[:hit.start()]
            tail = _TERM_TAIL.match(chunk[hit.end():])
            if tail is None:
                raise DomainError(f"cannot parse term {chunk.strip()!r}")
            k = int(tail.group(1)) if tail.group(1) else 1
            if tail.group(2) == ")":
                num_part = num_part.strip()
                if not num_part.startswith("("):
                    raise DomainError(f"unbalanced parentheses in {chunk.strip()!r}")
                num_part = num_part[1:]
            primes = len(tail.group(3))
            if k != order - primes:
                raise DomainError(
                    f"term {chunk.strip()!r}: psi power {k} does not match "
                    f"derivative order {primes} (need power {order - primes})")
            if not coeffs[k].is_zero():
                raise DomainError(f"duplicate term for psi^{k}")
            num = parse_poly_expr(num_part)
            coeffs[k] = num if sign == 1 else Polynomial.zero() - num
    return FuchsianOperator(order=order,
                            real_points=tuple(real_points),
                            apparent_points=tuple(apparent_points),
                            coeffs=tuple(coeffs[k] for k in range(1, order + 1)))


def _parse_text(text: str) -> FuchsianOperator:
    real_points = []
    apparent_points = []
    equation = None
    for raw in text.splitlines():
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if line.lower().startswith("points"):
            _, _, rest = line.partition(":")
            real_points = [_parse_scalar_expr(c) for c in rest.split(",") if c.strip()]
        elif line.lower().startswith("apparent"):
            _, _, rest = line.partition(":")
            apparent_points = [_parse_scalar_expr(c) for c in rest.split(",") if c.strip()]
        elif line.startswith("w"):
            if equation is not None:
                raise DomainError("more than one equation line")
            equation = line
        else:
            raise DomainError(f"unrecognized line {line!r}")
    if equation is None:
        raise DomainError("no equation line found")
    return _parse_equation(equation, real_points, apparent_points)


def _parse_json_doc(doc: Mapping) -> FuchsianOperator:
    for key in ("order", "real_points", "coeffs"):
        if key not in doc:
            raise DomainError(f"missing key {key!r}")
    order = doc["order"]
    if not isinstance(order, int):
        raise DomainError(f"order must be an integer, got {order!r}")
    return FuchsianOperator(order=order,
                            real_points=tuple(doc["real_points"]),
                            apparent_points=tuple(doc.get("apparent_points", ())),
                            coeffs=tuple(doc["coeffs"]))


def parse_operator(doc: Union[str, Mapping]) -> FuchsianOperator:
    """Parse an operator from a JSON document (dict or string) or, for
    order <= 3, from the plain-text equation form, e.g.

        points: 0, 1
        w'' = (z+1)/psi w' + (-1/2)/psi^2 w
    """
    if isinstance(doc, Mapping):
        return _parse_json_doc(doc)
    if not isinstance(doc, str):
        raise DomainError(f"cannot parse {type(doc).__name__} as an operator")
    stripped = doc.strip()
    if stripped.startswith("{"):
        try:
            loaded = json.loads(stripped)
        except json.JSONDecodeError as exc:
            raise DomainError(f"bad JSON: {exc}") from exc
        return _parse_json_doc(loaded)
    return _parse_text(doc)


def serialize_operator(op: FuchsianOperator) -> dict:
    return op.to_json()


def operator_to_text(op: FuchsianOperator) -> str:
    """Plain-text form; round-trips through parse_operator.  Order <= 3 only."""
    if op.order > 3:
        raise DomainError("text form supports order <= 3")
    lines = []
    if op.real_points:
        lines.append("points: " + ", ".join(str(p) for p in op.real_points))
    if op.apparent_points:
        lines.append("apparent: " + ", ".join(str(p) for p in op.apparent_points))
    lhs = "w" + "'" * op.order
    terms = []
    for k in range(1, op.order + 1):
        c = op.coeffs[k - 1]
        if c.is_zero():
            continue
        pw = "psi" if k == 1 else f"psi^{k}"
        terms.append(f"({c})/{pw} w" + "'" * (op.order - k))
    rhs = " + ".join(terms) if terms else "0"
    lines.append(f"{lhs} = {rhs}")
    return "\n".join(lines)
