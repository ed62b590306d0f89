"""Parameter counts and the exact linear algebra behind them.

Operators of a fixed shape form a finite-dimensional family: the numerator
polynomials contribute coefficients, and the prescriptions at the marked
points (exponent data at each finite point, top-coefficient data at
infinity, jet data at the apparent points) remove most of them.  This
module counts both sides, builds the block matrix realizing the linear
part of the prescriptions, and verifies its rank exactly.

Only the linear layer lives here.  The handful of genuinely quadratic
apparency conditions are evaluated pointwise by the series machinery in
`frobenius`; for rank purposes they are represented by their linearization,
the jet rows.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction

from .algebra import ExactMatrix, GaussianRational, falling_factorial, scalar
from .operator import DomainError, degree_budget


# ---------------------------------------------------------------------------
# dimension counts


@dataclass(frozen=True)
class DimensionReport:
    order: int
    num_real: int
    num_apparent: int
    parameter_count: int
    condition_count: int
    net_dimension: int      # parameters minus conditions; blind to num_apparent
    doubled_dimension: int  # twice that, for the associated pair family

    def to_json(self) -> dict:
        return {
            "order": self.order,
            "num_real": self.num_real,
            "num_apparent": self.num_apparent,
            "parameter_count": self.parameter_count,
            "condition_count": self.condition_count,
            "net_dimension": self.net_dimension,
            "doubled_dimension": self.doubled_dimension,
        }


def dimensions(order: int, num_real: int, num_apparent: int = 0) -> DimensionReport:
    """Count free coefficients against linear-plus-apparency conditions.

    The net is independent of the number of apparent points: every extra
    such point brings exactly as many conditions as it brings coefficients.
    """
    if not isinstance(order, int) or order < 1:
        raise DomainError(f"order must be a positive integer, got {order!r}")
    if num_real < 2:
        raise DomainError("need at least two finite singular points")
    if num_apparent < 0:
        raise DomainError("number of apparent points cannot be negative")
    m, n, extra = order, num_real, num_apparent
    params = degree_budget(m, n, extra).total
    conditions = (n + 1) * m - 1 + extra * m * (m + 1) // 2
    net = params - conditions
    assert net == 1 - m * m + m * (m - 1) * (n + 1) // 2  # closed form, no extra
    return DimensionReport(order=m, num_real=n, num_apparent=extra,
                           parameter_count=params, condition_count=conditions,
                           net_dimension=net, doubled_dimension=2 * net)


# ---------------------------------------------------------------------------
# the constraint matrix


@dataclass(frozen=True)
class ConstraintTag:
    """Provenance of one row: which numerator it constrains and at which
    point (derivative_order > 0 marks a jet row at an apparent point)."""
    k: int
    kind: str  # "exponent" | "top-coefficient" | "derivative"
    point: str
    derivative_order: int = 0

    def to_json(self) -> dict:
        out = {"k": self.k, "kind": self.kind, "point": self.point}
        if self.derivative_order:
            out["derivative_order"] = self.derivative_order
        return out


@dataclass(frozen=True)
class ConstraintSystem:
    order: int
    real_points: tuple
    apparent_points: tuple
    matrix: ExactMatrix
    tags: tuple
    col_blocks: tuple  # (start, stop) of numerator k's coefficients
    row_blocks: tuple  # (start, stop) of numerator k's rows
    expected_rank: int

    def to_json(self) -> dict:
        return {
            "order": self.order,
            "real_points": [str(p) for p in self.real_points],
            "apparent_points": [str(a) for a in self.apparent_points],
            "rows": self.matrix.shape()[0],
            "cols": self.matrix.shape()[1],
            "tags": [t.to_json() for t in self.tags],
            "col_blocks": list(self.col_blocks),
            "row_blocks": list(self.row_blocks),
            "expected_rank": self.expected_rank,
        }


def build_constraints(order: int, real_points, apparent_points=()) -> ConstraintSystem:
    """Block matrix of the linear prescriptions on the numerators.

    Block k acts on the coefficients of the k-th numerator and carries one
    value row per finite point, one top-coefficient row, and jet rows of
    orders 1..k-1 at each apparent point.  Blocks do not interact.
    """
    m = order
    real = tuple(scalar(p) for p in real_points)
    app = tuple(scalar(a) for a in apparent_points)
    pts = real + app
    if len(set(pts)) != len(pts):
        raise DomainError("points not distinct")
    n, extra = len(real), len(app)
    if n < 2:
        raise DomainError("need at least two finite singular points")
    budget = degree_budget(m, n, extra)
    col_blocks = []
    start = 0
    for k in range(1, m + 1):
        width = budget.degrees[k - 1] + 1
        col_blocks.append((start, start + width))
        start += width
    total_cols = start
    zero = scalar(0)
    rows: list = []
    tags: list = []
    row_blocks = []
    for k in range(1, m + 1):
        lo, hi = col_blocks[k - 1]
        width = hi - lo
        block_start = len(rows)

        def emit(entries, tag):
            row = [zero] * total_cols
            row[lo:hi] = entries
            rows.append(row)
            tags.append(tag)

        for p in pts:
            emit([p ** s for s in range(width)],
                 ConstraintTag(k=k, kind="exponent", point=str(p)))
        emit([zero] * (width - 1) + [scalar(1)],
             ConstraintTag(k=k, kind="top-coefficient", point="infinity"))
        for a in app:
            for l in range(1, k):
                emit([falling_factorial(scalar(s), l) * a ** (s - l)
                      if s >= l else zero for s in range(width)],
                     ConstraintTag(k=k, kind="derivative", point=str(a),
                                   derivative_order=l))
        row_blocks.append((block_start, len(rows)))
    expected = (n + 1) * m - 1 + extra * m * (m + 1) // 2
    return ConstraintSystem(order=m, real_points=real, apparent_points=app,
                            matrix=ExactMatrix.from_rows(rows),
                            tags=tuple(tags),
                            col_blocks=tuple(col_blocks),
                            row_blocks=tuple(row_blocks),
                            expected_rank=expected)


@dataclass(frozen=True)
class RankReport:
    total_rank: int
    expected_rank: int
    block_ranks: tuple
    block_dependencies: tuple  # rows minus rank, per block
    ok: bool

    def to_json(self) -> dict:
        return {
            "total_rank": self.total_rank,
            "expected_rank": self.expected_rank,
            "block_ranks": list(self.block_ranks),
            "block_dependencies": list(self.block_dependencies),
            "ok": self.ok,
        }


def verify_rank(system: ConstraintSystem) -> RankReport:
    """Exact rank of the constraint matrix, block by block.

    The first block always carries exactly one dependency (values at every
    finite point already determine the top coefficient there); the others
    are expected to be independent.
    """
    block_ranks = []
    deps = []
    for k in range(1, system.order + 1):
        r0, r1 = system.row_blocks[k - 1]
        lo, hi = system.col_blocks[k - 1]
        sub = ExactMatrix.from_rows(
            [[system.matrix.entry(r, c) for c in range(lo, hi)]
             for r in range(r0, r1)])
        rk = sub.rank()
        block_ranks.append(rk)
        deps.append((r1 - r0) - rk)
    total = system.matrix.rank()
    ok = total == system.expected_rank and total == sum(block_ranks)
    return RankReport(total_rank=total, expected_rank=system.expected_rank,
                      block_ranks=tuple(block_ranks),
                      block_dependencies=tuple(deps), ok=ok)


# ---------------------------------------------------------------------------
# jet interpolation determinants


def gen_vandermonde(points, plan) -> ExactMatrix:
    """Square jet-interpolation matrix.

    Point b with multiplicity u contributes the rows (d/dz)^l z^s |_{z=b}
    for l = 0..u-1; columns run over the powers s = 0..sum(plan)-1.  Rows
    are grouped by point, in the order given.
    """
    pts = tuple(scalar(b) for b in points)
    plan = tuple(int(u) for u in plan)
    if len(pts) != len(plan):
        raise DomainError("plan must give one multiplicity per point")
    if any(u < 1 for u in plan):
        raise DomainError("multiplicities must be positive")
    # coincident points are allowed: they duplicate row blocks and the
    # determinant degenerates to 0, matching the closed form
    size = sum(plan)
    zero = scalar(0)
    rows = []
    for b, u in zip(pts, plan):
        for l in range(u):
            rows.append([falling_factorial(scalar(s), l) * b ** (s - l)
                         if s >= l else zero for s in range(size)])
    return ExactMatrix.from_rows(rows)


def vdm_closed_form(points, plan) -> GaussianRational:
    """Determinant of gen_vandermonde in closed form:
    prod over points of prod_{l<u} l!, times prod_{i<j} (b_j-b_i)^(u_i u_j)."""
    pts = tuple(scalar(b) for b in points)
    plan = tuple(int(u) for u in plan)
    out = scalar(1)
    for u in plan:
        for l in range(u):
            out = out * scalar(math.factorial(l))
    for i in range(len(pts)):
        for j in range(i + 1, len(pts)):
            out = out * (pts[j] - pts[i]) ** (plan[i] * plan[j])
    return out


def paired_plan(r: int) -> tuple:
    """Multiplicity pattern (2,...,2,1,1): r doubled points plus two plain
    ones, the square shape that prices one apparent point against two
    exponent prescriptions."""
    if r < 0:
        raise DomainError("r must be non-negative")
    return (2,) * r + (1, 1)


# ---------------------------------------------------------------------------
# weight parameters


@dataclass(frozen=True)
class WeightEntry:
    mu: GaussianRational
    weight: GaussianRational  # (mu - beta) / 2
    fractional: Fraction      # real part of mu, mod 1

    def to_json(self) -> dict:
        return {"mu": self.mu.to_json(), "weight": self.weight.to_json(),
                "fractional": str(self.fractional)}


@dataclass(frozen=True)
class WeightData:
    order: int
    num_real: int
    beta: Fraction
    entries: tuple

    def to_json(self) -> dict:
        return {"order": self.order, "num_real": self.num_real,
                "beta": str(self.beta),
                "entries": [e.to_json() for e in self.entries]}


def hodge_parameters(order: int, num_real: int, exponents=()) -> WeightData:
    """Normalized weight data attached to a list of exponents.

    beta is the shape constant (n-1)(m-1)/(2(n+1)); each exponent mu gets
    the half-shifted weight (mu-beta)/2 and the residue of its real part
    mod 1."""
    if not isinstance(order, int) or order < 1:
        raise DomainError(f"order must be a positive integer, got {order!r}")
    if num_real < 2:
        raise DomainError("need at least two finite singular points")
    beta = Fraction((num_real - 1) * (order - 1), 2 * (num_real + 1))
    entries = []
    for raw in exponents:
        mu = scalar(raw)
        weight = (mu - scalar(beta)) / scalar(2)
        frac = mu.re - math.floor(mu.re)
        entries.append(WeightEntry(mu=mu, weight=weight, fractional=frac))
    return WeightData(order=order, num_real=num_real, beta=beta,
                      entries=tuple(entries))
