"""Series analysis at a finite point of a Fuchsian operator.

Everything here works with the shifted local form: writing t = z - a and
expanding t^k * coeffs[k-1] / psi^k = sum_l table[k][l] t^l, the indicial
polynomial and its higher companions are

    f_0(s) = [s]_m - sum_k table[k][0] [s]_{m-k}
    f_l(s) =         sum_k table[k][l] [s]_{m-k}     (l >= 1)

with [s]_j the falling factorial.  A series sum c_t t^(s+t) solves the
equation iff  c_t f_0(s+t) = sum_{l=1}^{t} f_l(s+t-l) c_{t-l}  for all t.

The resonance matrices come in two sign conventions.  The displayed form
carries the f_l entries verbatim; the signed form negates every f_l with
l >= 1, which makes its determinant equal the recursion obstruction (the
displayed form does not, as direct series computation shows).  All
apparency decisions use the signed form; see the decision notes shipped
next to the repository.
"""

from __future__ import annotations

from dataclasses import dataclass

from .algebra import (
    ExactMatrix,
    GaussianRational,
    Polynomial,
    RationalFunction,
    ZERO,
    falling_factorial,
    poly_root_search,
    scalar,
    series_of_rational,
)
from .operator import DomainError, FuchsianOperator, psi_all, validate_fuchsian


@dataclass(frozen=True)
class LocalAnalysis:
    point: GaussianRational
    table: tuple          # table[k-1][l], k = 1..order, l = 0..truncation
    indicial: Polynomial  # f_0, in the exponent variable
    higher: tuple         # higher[l-1] = f_l, l = 1..truncation
    exponents: tuple      # (root, multiplicity) pairs of f_0
    exponents_complete: bool
    truncation: int
    ordinary: bool        # point was not among the operator's listed points

    @property
    def order(self) -> int:
        return self.indicial.degree()

    def f(self, l: int) -> Polynomial:
        if l == 0:
            return self.indicial
        if l > self.truncation:
            raise DomainError(
                f"table truncated at {self.truncation}, asked for f_{l}")
        return self.higher[l - 1]

    def exponent_list(self) -> list:
        out = []
        for root, mult in self.exponents:
            out.extend([root] * mult)
        return out


def local_expansion(op: FuchsianOperator, point, truncation: int) -> LocalAnalysis:
    if truncation < 1:
        raise DomainError("truncation must be at least 1")
    a = scalar(point)
    psi = psi_all(op)
    lin = Polynomial.of(-a, 1)
    table = []
    for k in range(1, op.order + 1):
        rf = RationalFunction.make(op.coeffs[k - 1] * lin ** k, psi ** k)
        ser = series_of_rational(rf, a, truncation + 1)
        table.append(tuple(ser.coeffs))
    x = Polynomial.x()
    f0 = falling_factorial(x, op.order)
    for k in range(1, op.order + 1):
        f0 = f0 - falling_factorial(x, op.order - k) * table[k - 1][0]
    higher = []
    for l in range(1, truncation + 1):
        fl = Polynomial.zero()
        for k in range(1, op.order + 1):
            fl = fl + falling_factorial(x, op.order - k) * table[k - 1][l]
        higher.append(fl)
    roots = poly_root_search(f0)
    return LocalAnalysis(point=a,
                         table=tuple(table),
                         indicial=f0,
                         higher=tuple(higher),
                         exponents=roots.roots,
                         exponents_complete=roots.complete,
                         truncation=truncation,
                         ordinary=a not in op.all_points)


@dataclass(frozen=True)
class ResonanceMatrix:
    nu: int
    signed: bool
    symbolic: ExactMatrix       # Polynomial entries in the exponent variable
    determinant: Polynomial
    rho: GaussianRational | None
    evaluated: ExactMatrix | None

    def det_at(self, rho) -> GaussianRational:
        return self.determinant(scalar(rho))


def f_matrices(analysis: LocalAnalysis, nu: int, rho=None,
               signed: bool = False) -> ResonanceMatrix:
    """nu x nu resonance matrix.  First row f_1(s+nu-1) ... f_nu(s); below,
    f_0 runs down the subdiagonal with shorter f-rows to its right.  With
    signed=True the f_l entries (l >= 1) are negated; that determinant is
    the series obstruction and is what apparency uses."""
    if nu < 1:
        raise DomainError("nu must be at least 1")
    if analysis.truncation < nu:
        raise DomainError(
            f"insufficient truncation depth {analysis.truncation} for nu={nu}")
    sgn = scalar(-1 if signed else 1)
    rows = [[Polynomial.zero() for _ in range(nu)] for _ in range(nu)]
    for c in range(nu):
        rows[0][c] = analysis.f(c + 1).shift(scalar(nu - 1 - c)) * sgn
    for r in range(1, nu):
        rows[r][r - 1] = analysis.f(0).shift(scalar(nu - r))
        for c in range(r, nu):
            rows[r][c] = analysis.f(c - r + 1).shift(scalar(nu - 1 - c)) * sgn
    sym = ExactMatrix.from_rows(rows)
    det = sym.det()
    if not isinstance(det, Polynomial):
        det = Polynomial.constant(det)
    evaluated = None
    r_val = None
    if rho is not None:
        r_val = scalar(rho)
        evaluated = sym.map(lambda p: p(r_val))
    return ResonanceMatrix(nu=nu, signed=signed, symbolic=sym,
                           determinant=det, rho=r_val, evaluated=evaluated)


@dataclass(frozen=True)
class ConditionResidual:
    mu: int
    kind: str  # "linear" | "quadratic" | "det_order"
    value: GaussianRational
    required_order: int

    def to_json(self) -> dict:
        return {"mu": self.mu, "kind": self.kind,
                "value": self.value.to_json(),
                "required_order": self.required_order}


@dataclass(frozen=True)
class ApparentVerdict:
    is_apparent: bool
    is_special_apparent: bool
    exponents: tuple  # descending when extracted
    condition_residuals: tuple
    oracle_agrees: bool | None = None
    reason: str | None = None

    def to_json(self) -> dict:
        return {
            "is_apparent": self.is_apparent,
            "is_special_apparent": self.is_special_apparent,
            "exponents": [e.to_json() for e in self.exponents],
            "condition_residuals": [c.to_json() for c in self.condition_residuals],
            "oracle_agrees": self.oracle_agrees,
            "reason": self.reason,
        }


def special_exponents(m: int) -> tuple:
    """m, m-2, m-3, ..., 1, 0 (length m)."""
    return (scalar(m),) + tuple(scalar(j) for j in range(m - 2, -1, -1))


def _integer_exponents(analysis: LocalAnalysis):
    """Descending integer exponents, or (None, reason)."""
    if not analysis.exponents_complete:
        return None, "non-integral exponents"
    vals = analysis.exponent_list()
    if any(not v.is_integer() for v in vals):
        return None, "non-integral exponents"
    if len(set(vals)) != len(vals):
        return None, "repeated exponents"
    if any(v.as_int() < 0 for v in vals):
        return None, "negative exponents"
    return tuple(sorted(vals, key=lambda v: -v.as_int())), None


def apparent_check(op: FuchsianOperator, point,
                   run_oracle: bool = False) -> ApparentVerdict:
    """Determinant-ladder apparency test.  For exponents r_1 > ... > r_m the
    condition indexed (mu, kappa) is that the signed resonance determinant of
    size r_{mu-kappa} - r_mu vanishes at r_mu to order kappa."""
    first = local_expansion(op, point, 1)
    exps, reason = _integer_exponents(first)
    if exps is None:
        verdict = ApparentVerdict(False, False, tuple(first.exponent_list()),
                                  (), reason=reason)
        if run_oracle:
            oracle = frobenius_oracle(op, point)
            verdict = ApparentVerdict(False, False, verdict.exponents, (),
                                      oracle_agrees=oracle.is_apparent is False,
                                      reason=reason)
        return verdict
    m = op.order
    spread = exps[0].as_int() - exps[-1].as_int()
    analysis = local_expansion(op, point, spread + 2)
    det_cache: dict[int, Polynomial] = {}
    residuals = []
    all_ok = True
    for mu in range(2, m + 1):
        for kappa in range(1, mu):
            nu = exps[mu - 1 - kappa].as_int() - exps[mu - 1].as_int()
            if nu not in det_cache:
                det_cache[nu] = f_matrices(analysis, nu, signed=True).determinant
            shifted = det_cache[nu].shift(exps[mu - 1])
            value = ZERO
            for j in range(kappa):
                c = shifted.coeff(j)
                if not c.is_zero():
                    value = c
                    all_ok = False
                    break
            residuals.append(ConditionResidual(mu=mu, kind="det_order",
                                               value=value,
                                               required_order=kappa))
    special = exps == special_exponents(m)
    verdict = ApparentVerdict(is_apparent=all_ok,
                              is_special_apparent=all_ok and special,
                              exponents=exps,
                              condition_residuals=tuple(residuals))
    if run_oracle:
        oracle = frobenius_oracle(op, point)
        verdict = ApparentVerdict(verdict.is_apparent, verdict.is_special_apparent,
                                  verdict.exponents, verdict.condition_residuals,
                                  oracle_agrees=oracle.is_apparent == all_ok)
    return verdict


def special_apparent_check(op: FuchsianOperator, point) -> ApparentVerdict:
    """Reduced condition set for exponents m, m-2, ..., 1, 0: per mu the
    linear vanishings f_l(m-mu) = 0 for l = 1..mu-2 plus one quadratic,
    m(m-1)/2 residuals in total."""
    m = op.order
    analysis = local_expansion(op, point, m + 2)
    exps, _ = _integer_exponents(analysis)
    want = special_exponents(m)
    if exps != want:
        raise DomainError(
            f"exponents not special: expected {[str(e) for e in want]}, "
            f"got {[str(e) for e in analysis.exponent_list()]}")
    residuals = []
    all_ok = True
    f0_top = analysis.f(0)(scalar(m - 1))
    f1_top = analysis.f(1)(scalar(m - 1))
    for mu in range(2, m + 1):
        at = scalar(m - mu)
        for l in range(1, mu - 1):
            value = analysis.f(l)(at)
            if not value.is_zero():
                all_ok = False
            residuals.append(ConditionResidual(mu=mu, kind="linear",
                                               value=value, required_order=1))
        quad = f1_top * analysis.f(mu - 1)(at) + analysis.f(mu)(at) * f0_top
        if not quad.is_zero():
            all_ok = False
        residuals.append(ConditionResidual(mu=mu, kind="quadratic",
                                           value=quad, required_order=1))
    return ApparentVerdict(is_apparent=all_ok,
                           is_special_apparent=all_ok,
                           exponents=exps,
                           condition_residuals=tuple(residuals))


# ---------------------------------------------------------------------------
# direct series oracle


@dataclass(frozen=True)
class SeriesSolution:
    exponent: GaussianRational
    coeffs: tuple        # c_0 .. c_truncation in powers of (z - point)
    obstructions: tuple  # (offset, value) at each resonance crossed

    def to_json(self) -> dict:
        return {"exponent": self.exponent.to_json(),
                "coeffs": [c.to_json() for c in self.coeffs],
                "obstructions": [{"offset": o, "value": v.to_json()}
                                 for o, v in self.obstructions]}


@dataclass(frozen=True)
class OracleVerdict:
    is_apparent: bool
    exponents: tuple
    solutions: tuple
    truncation: int
    reason: str | None = None

    def to_json(self) -> dict:
        return {"is_apparent": self.is_apparent,
                "exponents": [e.to_json() for e in self.exponents],
                "solutions": [s.to_json() for s in self.solutions],
                "truncation": self.truncation,
                "reason": self.reason}


def frobenius_oracle(op: FuchsianOperator, point, truncation: int | None = None) -> OracleVerdict:
    """Ground-truth apparency: run the recursion for every exponent and
    demand each resonance obstruction vanish.  A vanished obstruction leaves
    the resonant coefficient free; it is pinned to 0.  The default depth
    covers every resonance with margin; a smaller request is raised."""
    first = local_expansion(op, point, 1)
    exps, reason = _integer_exponents(first)
    if exps is None:
        return OracleVerdict(False, tuple(first.exponent_list()), (), 0,
                             reason=reason)
    spread = exps[0].as_int() - exps[-1].as_int()
    depth = spread + 4 if truncation is None else max(truncation, spread + 1)
    analysis = local_expansion(op, point, depth)
    solutions = []
    ok = True
    for rho in reversed(exps):  # ascending
        coeffs = [scalar(1)]
        obstructions = []
        for t in range(1, depth + 1):
            rhs = ZERO
            for l in range(1, t + 1):
                rhs = rhs + analysis.f(l)(rho + scalar(t - l)) * coeffs[t - l]
            lead = analysis.f(0)(rho + scalar(t))
            if lead.is_zero():
                obstructions.append((t, rhs))
                if not rhs.is_zero():
                    ok = False
                coeffs.append(ZERO)
            else:
                coeffs.append(rhs / lead)
        solutions.append(SeriesSolution(exponent=rho, coeffs=tuple(coeffs),
                                        obstructions=tuple(obstructions)))
    return OracleVerdict(is_apparent=ok, exponents=exps,
                         solutions=tuple(solutions), truncation=depth)


# ---------------------------------------------------------------------------
# instance generation and the index-1 value


def annihilator_from_solutions(basis) -> FuchsianOperator:
    """Monic operator annihilating the given polynomial basis, with every
    finite singular point (a Wronskian zero) apparent by construction."""
    polys = [b if isinstance(b, Polynomial) else Polynomial.from_list(b)
             for b in basis]
    m = len(polys)
    if m < 1:
        raise DomainError("empty basis")
    rows = []
    for p in polys:
        row = [p]
        for _ in range(m):
            row.append(row[-1].derivative())
        rows.append(row)
    dets = []
    for omit in range(m + 1):
        cols = [j for j in range(m + 1) if j != omit]
        mat = ExactMatrix.from_rows([[rows[i][j] for j in cols] for i in range(m)])
        d = mat.det()
        dets.append(d if isinstance(d, Polynomial) else Polynomial.constant(d))
    wronskian = dets[m]
    if wronskian.is_zero():
        raise DomainError("dependent basis: Wronskian vanishes identically")
    found = poly_root_search(wronskian)
    if not found.complete:
        raise DomainError("Wronskian does not split over Q(i); "
                          f"unfactored part {found.remainder}")
    points = tuple(r for r, _ in found.roots)
    psi = Polynomial.from_roots(points)
    coeffs = []
    for k in range(1, m + 1):
        num = dets[m - k] * psi ** k * scalar((-1) ** (k + 1))
        q, rem = divmod(num, wronskian)
        assert rem.is_zero()  # poles at Wronskian zeros stay within order k
        coeffs.append(q)
    out = FuchsianOperator(order=m, real_points=(), apparent_points=points,
                           coeffs=tuple(coeffs))
    assert validate_fuchsian(out).ok
    return out


def index1_integrality(op: FuchsianOperator, point) -> int:
    """Value of the depth-0 expansion coefficient at index 1; integral at an
    apparent point.  (Returned with its sign; the special pattern gives +1.)"""
    analysis = local_expansion(op, point, 1)
    value = analysis.table[0][0]
    if not value.is_integer():
        raise DomainError(
            f"index-1 coefficient {value} at {scalar(point)} is not an integer")
    return value.as_int()
