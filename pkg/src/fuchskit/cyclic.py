"""Scalar-form recovery through cyclic vectors.

Pairing the flat row sections of a logarithmic connection against a fixed
polynomial column v produces scalar functions.  When v, dv, d^2 v, ...
span, every such pairing satisfies a single scalar equation; this module
finds such a v deterministically and rebuilds the equation exactly.  Here
d acts on columns as d(v) = v' + B v, the companion of the row-side rule.

Zeros of the spanning determinant that are not poles of the connection
surface as extra apparent points of the recovered scalar form.
"""

from __future__ import annotations

from dataclasses import dataclass

from .algebra import (
    ExactMatrix,
    Polynomial,
    RationalFunction,
    poly_root_search,
    scalar,
)
from .connection import LogConnection
from .operator import DomainError, FuchsianOperator


def _rf(x) -> RationalFunction:
    if isinstance(x, RationalFunction):
        return x
    if isinstance(x, Polynomial):
        return RationalFunction.make(x, Polynomial.one())
    return RationalFunction.make(Polynomial.constant(scalar(x)), Polynomial.one())


def connection_derivative(conn: LogConnection, column) -> tuple:
    """d(v) = v' + B v on a column vector."""
    cols = [_rf(c) for c in column]
    if len(cols) != conn.size:
        raise DomainError("column length does not match the connection size")
    out = []
    for i in range(conn.size):
        acc = cols[i].derivative()
        for j in range(conn.size):
            acc = acc + conn.matrix.entry(i, j) * cols[j]
        out.append(acc)
    return tuple(out)


def standard_candidates(size: int) -> tuple:
    """Basis columns first, then the windows e_s + z e_(s+1) + ... ordered
    by (length, start).  Capped at size^2 entries."""
    zero = Polynomial.zero()
    x = Polynomial.x()
    cands = []
    for s in range(size):
        v = [zero] * size
        v[s] = Polynomial.one()
        cands.append(tuple(v))
    for length in range(2, size + 1):
        for s in range(size - length + 1):
            v = [zero] * size
            power = Polynomial.one()
            for i in range(length):
                v[s + i] = power
                power = power * x
            cands.append(tuple(v))
    return tuple(cands[: size * size])


@dataclass(frozen=True)
class CyclicResult:
    vector: tuple             # the cyclic column, polynomial entries
    determinant: RationalFunction
    coefficients: tuple       # c_1..c_m in d^m v = sum_k c_k d^(m-k) v
    operator: FuchsianOperator
    apparent_locus: tuple     # determinant zeros away from the poles
    unfactored: Polynomial    # part of the determinant numerator not split
    tried: int

    def to_json(self) -> dict:
        return {
            "vector": [p.to_json() for p in self.vector],
            "determinant": self.determinant.to_json(),
            "coefficients": [c.to_json() for c in self.coefficients],
            "operator": self.operator.to_json(),
            "apparent_locus": [str(a) for a in self.apparent_locus],
            "unfactored": self.unfactored.to_json(),
            "tried": self.tried,
        }


def find_cyclic(conn: LogConnection, candidates=None) -> CyclicResult:
    """First spanning candidate wins; the scan order is fixed, so the result
    is deterministic for a given connection."""
    m = conn.size
    if candidates is None:
        cands = standard_candidates(m)
    else:
        cands = tuple(tuple(v) for v in candidates)
    if not cands:
        raise DomainError("no candidate vectors supplied")
    tried = 0
    for cand in cands:
        tried += 1
        tower = [tuple(_rf(c) for c in cand)]
        for _ in range(m):
            tower.append(connection_derivative(conn, tower[-1]))
        span = ExactMatrix.from_rows(
            [[tower[j][i] for j in range(m)] for i in range(m)])
        det = span.det()
        if det.is_zero():
            continue
        target = ExactMatrix.from_rows([[tower[m][i]] for i in range(m)])
        solved = span.inverse() * target
        coeffs_c = tuple(solved.entry(m - k, 0) for k in range(1, m + 1))
        found = poly_root_search(det.num)
        locus = tuple(r for r, _ in found.roots if r not in conn.pole_points)
        pts = tuple(conn.pole_points) + locus
        psi = Polynomial.from_roots(pts)
        psi_rf = _rf(psi)
        numerators = []
        for k, c in enumerate(coeffs_c, start=1):
            value = c
            for _ in range(k):
                value = value * psi_rf
            if value.den.degree() != 0:
                raise DomainError(
                    f"coefficient {k} of the recovered form keeps a pole at a "
                    f"point outside Q(i); unfactored determinant part "
                    f"{found.remainder}")
            numerators.append(value.num)
        op = FuchsianOperator(order=m,
                              real_points=tuple(conn.pole_points),
                              apparent_points=locus,
                              coeffs=tuple(numerators))
        return CyclicResult(vector=cand, determinant=det,
                            coefficients=coeffs_c, operator=op,
                            apparent_locus=locus,
                            unfactored=found.remainder, tried=tried)
    raise DomainError(
        f"none of the {tried} candidate vectors spans; the connection may be "
        "decomposable in the standard frame")


@dataclass(frozen=True)
class RoundtripReport:
    ok: bool
    coeffs_match: bool
    points_match: bool
    vector: tuple
    recovered: FuchsianOperator
    apparent_locus: tuple

    def to_json(self) -> dict:
        return {
            "ok": self.ok,
            "coeffs_match": self.coeffs_match,
            "points_match": self.points_match,
            "vector": [p.to_json() for p in self.vector],
            "recovered": self.recovered.to_json(),
            "apparent_locus": [str(a) for a in self.apparent_locus],
        }


def roundtrip_check(op: FuchsianOperator) -> RoundtripReport:
    """Companion form, then cyclic recovery; the numerators and the point
    set must come back unchanged."""
    from .connection import build_companion

    conn = build_companion(op)
    res = find_cyclic(conn)
    coeffs_match = res.operator.coeffs == op.coeffs
    points_match = set(res.operator.all_points) == set(op.all_points)
    ok = coeffs_match and points_match and res.operator.order == op.order
    return RoundtripReport(ok=ok, coeffs_match=coeffs_match,
                           points_match=points_match, vector=res.vector,
                           recovered=res.operator,
                           apparent_locus=res.apparent_locus)
