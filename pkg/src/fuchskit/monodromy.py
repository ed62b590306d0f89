"""Numeric transport around singular points.

Everything else in the package is exact; this module is the one numeric
layer.  Flat row sections satisfy w' = w B, so the column form u' = B(z)^T u
is integrated with a high-order Runge-Kutta scheme along circles and
anchored loops.  Counterclockwise transport around a point with local
exponent mu produces the eigenvalue exp(+2 pi i mu).

Each result carries a self-diagnosed error estimate: the determinant of the
transport matrix is compared against the exponential of the exact trace
residue, which the exact layer supplies for free.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass

import numpy as np
from scipy.integrate import solve_ivp

from .algebra import RationalFunction, scalar
from .connection import LogConnection
from .operator import DomainError

_RTOL = 1e-11
_ATOL = 1e-13


def _to_complex(g) -> complex:
    return complex(float(g.re), float(g.im))


class _NumericConnection:
    """Complex-coefficient view of the connection matrix, Horner-ready."""

    def __init__(self, conn: LogConnection):
        self.size = conn.size
        self.poles = [_to_complex(p) for p in conn.pole_points]
        self.num_coeffs = []
        self.den_coeffs = []
        for i in range(conn.size):
            nrow, drow = [], []
            for j in range(conn.size):
                rf = conn.matrix.entry(i, j)
                if not isinstance(rf, RationalFunction):
                    raise DomainError("connection matrix must be rational")
                nrow.append(np.array(
                    [_to_complex(c) for c in reversed(rf.num.coeffs)] or [0j]))
                drow.append(np.array(
                    [_to_complex(c) for c in reversed(rf.den.coeffs)] or [1 + 0j]))
            self.num_coeffs.append(nrow)
            self.den_coeffs.append(drow)

    def at(self, z: complex) -> np.ndarray:
        m = self.size
        out = np.empty((m, m), dtype=complex)
        for i in range(m):
            for j in range(m):
                out[i, j] = np.polyval(self.num_coeffs[i][j], z) / \
                    np.polyval(self.den_coeffs[i][j], z)
        return out


def _transport(num: _NumericConnection, segments, rtol: float, atol: float) -> np.ndarray:
    """Chain the fundamental solution of u' = B^T u along parametrized
    segments; each segment is (z(t), dz/dt(t)) over t in [0, 1]."""
    m = num.size
    u = np.eye(m, dtype=complex).reshape(-1)

    for zfun, dzfun in segments:
        def rhs(t, y):
            mat = num.at(zfun(t)).T * dzfun(t)
            return (mat @ y.reshape(m, m)).reshape(-1)

        sol = solve_ivp(rhs, (0.0, 1.0), u, method="DOP853",
                        rtol=rtol, atol=atol)
        if not sol.success:
            raise DomainError(f"transport integration failed: {sol.message}")
        u = sol.y[:, -1]
    return u.reshape(m, m)


def _line(z0: complex, z1: complex):
    return (lambda t: z0 + t * (z1 - z0), lambda t: z1 - z0)


def _circle(center: complex, radius: float, start_angle: float):
    def zfun(t):
        return center + radius * cmath.exp(1j * (start_angle + 2 * math.pi * t))

    def dzfun(t):
        return 2j * math.pi * radius * cmath.exp(1j * (start_angle + 2 * math.pi * t))

    return (zfun, dzfun)


@dataclass(frozen=True)
class LoopSpec:
    center: complex
    radius: float
    base_point: complex | None = None

    def to_json(self) -> dict:
        out = {"center": [self.center.real, self.center.imag],
               "radius": self.radius}
        if self.base_point is not None:
            out["base_point"] = [self.base_point.real, self.base_point.imag]
        return out


@dataclass(frozen=True)
class MonodromyResult:
    loop: LoopSpec
    matrix: np.ndarray
    char_poly: np.ndarray    # highest power first, length size+1
    eigenvalues: np.ndarray
    est_error: float

    def to_json(self) -> dict:
        def cx(v):
            return [float(np.real(v)), float(np.imag(v))]

        return {
            "loop": self.loop.to_json(),
            "matrix": [[cx(v) for v in row] for row in self.matrix],
            "char_poly": [cx(v) for v in self.char_poly],
            "eigenvalues": [cx(v) for v in sorted(
                self.eigenvalues, key=lambda w: (round(np.real(w), 9),
                                                 round(np.imag(w), 9)))],
            "est_error": self.est_error,
        }


def _det_reference(conn: LogConnection, enclosed) -> complex:
    """exp of the loop integral of tr B, from exact residues."""
    total = scalar(0)
    for i in range(conn.size):
        rf = conn.matrix.entry(i, i)
        for p in enclosed:
            total = total + rf.residue_at(p)
    return cmath.exp(2j * math.pi * _to_complex(total))


def _default_radius(conn: LogConnection, point) -> float:
    p = scalar(point)
    z = _to_complex(p)
    dists = [abs(z - _to_complex(q)) for q in conn.pole_points if q != p]
    return min(dists) / 2.0 if dists else 1.0


def _finish(conn: LogConnection, enclosed, loop: LoopSpec,
            mat: np.ndarray) -> MonodromyResult:
    ref = _det_reference(conn, enclosed)
    err = abs(complex(np.linalg.det(mat)) - ref)
    return MonodromyResult(loop=loop, matrix=mat,
                           char_poly=np.poly(mat),
                           eigenvalues=np.linalg.eigvals(mat),
                           est_error=float(err))


def monodromy(conn: LogConnection, point, radius: float | None = None,
              rtol: float = _RTOL, atol: float = _ATOL) -> MonodromyResult:
    """Counterclockwise transport around one singular point.

    The default radius is half the distance to the nearest other pole, so
    the circle encloses nothing else.
    """
    p = scalar(point)
    if p not in conn.pole_points:
        raise DomainError(f"{p} is not a pole of the connection")
    r = _default_radius(conn, p) if radius is None else float(radius)
    if r <= 0:
        raise DomainError("radius must be positive")
    num = _NumericConnection(conn)
    center = _to_complex(p)
    mat = _transport(num, [_circle(center, r, 0.0)], rtol, atol)
    # transpose back to the row-section action
    mat = mat.T
    return _finish(conn, [p], LoopSpec(center=center, radius=r), mat)


def anchored_monodromy(conn: LogConnection, point, base_point: complex,
                       radius: float | None = None,
                       rtol: float = _RTOL, atol: float = _ATOL) -> MonodromyResult:
    """Loop from the base point: straight in, once around, straight back."""
    p = scalar(point)
    if p not in conn.pole_points:
        raise DomainError(f"{p} is not a pole of the connection")
    r = _default_radius(conn, p) if radius is None else float(radius)
    center = _to_complex(p)
    b = complex(base_point)
    d = b - center
    if abs(d) <= r:
        raise DomainError("base point sits inside the loop")
    start = center + r * d / abs(d)
    num = _NumericConnection(conn)
    segs = [_line(b, start),
            _circle(center, r, cmath.phase(d)),
            _line(start, b)]
    mat = _transport(num, segs, rtol, atol).T
    return _finish(conn, [p], LoopSpec(center=center, radius=r, base_point=b), mat)


@dataclass(frozen=True)
class ApparentNumericReport:
    ok: bool
    identity_distance: float
    char_poly_distance: float
    tol: float

    def to_json(self) -> dict:
        return {"ok": self.ok, "identity_distance": self.identity_distance,
                "char_poly_distance": self.char_poly_distance, "tol": self.tol}


def is_apparent_numeric(matrix: np.ndarray, tol: float = 1e-6) -> ApparentNumericReport:
    """Trivial-monodromy test: the matrix must be close to the identity AND
    its characteristic polynomial close to (x - 1)^size.  The second check
    alone would also accept unipotent matrices, so both are required."""
    mat = np.asarray(matrix, dtype=complex)
    m = mat.shape[0]
    ident = float(np.max(np.abs(mat - np.eye(m))))
    want = np.array([math.comb(m, k) * (-1.0) ** k for k in range(m + 1)],
                    dtype=complex)
    cp = float(np.max(np.abs(np.poly(mat) - want)))
    return ApparentNumericReport(ok=ident <= tol and cp <= tol,
                                 identity_distance=ident,
                                 char_poly_distance=cp, tol=tol)


# ---------------------------------------------------------------------------
# global structure


@dataclass(frozen=True)
class GlobalMonodromy:
    base_point: complex
    order_of_loops: tuple     # pole indices sorted by departure angle
    loops: tuple              # MonodromyResult per pole, same order
    product: np.ndarray       # right-to-left over the loop order
    outer: MonodromyResult    # one loop around everything, same base
    closure_error: float      # max |product - outer matrix|
    scale: float              # largest entry met along the way; cancellation
                              # makes closure_error meaningful only against it

    def to_json(self) -> dict:
        def cx(v):
            return [float(np.real(v)), float(np.imag(v))]

        return {
            "base_point": [self.base_point.real, self.base_point.imag],
            "order_of_loops": list(self.order_of_loops),
            "loops": [r.to_json() for r in self.loops],
            "product": [[cx(v) for v in row] for row in self.product],
            "outer": self.outer.to_json(),
            "closure_error": self.closure_error,
            "scale": self.scale,
        }


def _segment_distance(b: complex, end: complex, q: complex) -> float:
    seg = end - b
    if seg == 0:
        return abs(q - b)
    t = max(0.0, min(1.0, ((q - b) * seg.conjugate()).real / abs(seg) ** 2))
    return abs(b + t * seg - q)


def _plan_loops(poles) -> tuple:
    """Base point plus one loop radius per pole, with every sight line from
    the base staying clear of every other loop (so the composed lollipops
    are homotopic to one outer circle)."""
    lo = min(z.real for z in poles)
    hi = max(z.real for z in poles)
    bot = min(z.imag for z in poles)
    top = max(z.imag for z in poles)
    span = max(hi - lo, top - bot, 1.0)
    nearest = []
    for i, p in enumerate(poles):
        d = [abs(p - q) for j, q in enumerate(poles) if j != i]
        nearest.append(min(d) if d else 2.0)
    for shift in (0.0, 0.37 * span, -0.29 * span, 0.61 * span, -0.53 * span):
        b = complex((lo + hi) / 2 + shift, bot - 2 * span - 3)
        clearance = [math.inf] * len(poles)
        for i, p in enumerate(poles):
            for k, q in enumerate(poles):
                if k != i:
                    clearance[k] = min(clearance[k], _segment_distance(b, p, q))
        if all(c > 1e-9 for c in clearance):
            radii = [min(0.4 * nearest[i], 0.45 * clearance[i])
                     for i in range(len(poles))]
            return b, radii
    raise DomainError("could not place a base point with clear sight lines")


def global_product(conn: LogConnection, base_point: complex | None = None,
                   rtol: float = _RTOL, atol: float = _ATOL) -> GlobalMonodromy:
    """Anchored loops around every finite pole, composed in departure-angle
    order, against a single outer loop around everything.

    The product runs right-to-left: the smallest-angle loop acts first.
    For a connection with no pole at infinity the two transports agree up
    to integration error; `closure_error` reports the gap.
    """
    if not conn.pole_points:
        raise DomainError("connection has no finite poles to encircle")
    poles = [_to_complex(p) for p in conn.pole_points]
    if base_point is not None:
        b = complex(base_point)
        radii = [_default_radius(conn, p) for p in conn.pole_points]
    else:
        b, radii = _plan_loops(poles)
    results = []
    for p, r in zip(conn.pole_points, radii):
        results.append(anchored_monodromy(conn, p, b, radius=r,
                                          rtol=rtol, atol=atol))
    order = sorted(range(len(poles)),
                   key=lambda i: cmath.phase(poles[i] - b))
    # rows compose left-to-right along the path, so the smallest departure
    # angle sits leftmost and the rightmost factor acts first
    product = np.eye(conn.size, dtype=complex)
    for i in order:
        product = product @ results[i].matrix
    center = complex(sum(poles) / len(poles))
    outer_radius = max(abs(p - center) for p in poles) + 1.0
    if abs(b - center) <= outer_radius:
        raise DomainError("base point sits inside the outer loop")
    num = _NumericConnection(conn)
    d = b - center
    start = center + outer_radius * d / abs(d)
    segs = [_line(b, start), _circle(center, outer_radius, cmath.phase(d)),
            _line(start, b)]
    outer_mat = _transport(num, segs, rtol, atol).T
    outer = _finish(conn, list(conn.pole_points),
                    LoopSpec(center=center, radius=outer_radius, base_point=b),
                    outer_mat)
    ordered = tuple(int(i) for i in order)
    closure = float(np.max(np.abs(product - outer.matrix)))
    scale = max([float(np.max(np.abs(r.matrix))) for r in results]
                + [float(np.max(np.abs(outer.matrix))), 1.0])
    return GlobalMonodromy(base_point=b, order_of_loops=ordered,
                           loops=tuple(results), product=product,
                           outer=outer, closure_error=closure, scale=scale)


# ---------------------------------------------------------------------------
# families


@dataclass(frozen=True)
class SweepResult:
    count: int
    point: str | None         # None means the global product was compared
    char_polys: tuple         # one coefficient tuple per sample
    max_drift: float          # largest deviation from the first sample

    def to_json(self) -> dict:
        def cx(v):
            return [float(np.real(v)), float(np.imag(v))]

        return {"count": self.count, "point": self.point,
                "char_polys": [[cx(v) for v in cp] for cp in self.char_polys],
                "max_drift": self.max_drift}


def isomonodromy_sweep(operators, point=None, rtol: float = _RTOL,
                       atol: float = _ATOL) -> SweepResult:
    """Characteristic-polynomial drift across a family of operators.

    With a point given, the loop runs around that point of each member;
    otherwise each member's global product is used.  Members of an
    isomonodromic family should show drift at the integration-error level.
    """
    from .connection import build_companion

    ops = list(operators)
    if not ops:
        raise DomainError("empty operator family")
    cps = []
    for op in ops:
        conn = build_companion(op)
        if point is not None:
            res = monodromy(conn, point, rtol=rtol, atol=atol)
            cps.append(tuple(res.char_poly))
        else:
            glob = global_product(conn, rtol=rtol, atol=atol)
            cps.append(tuple(np.poly(glob.product)))
    base = np.array(cps[0])
    drift = 0.0
    for cp in cps[1:]:
        drift = max(drift, float(np.max(np.abs(np.array(cp) - base))))
    return SweepResult(count=len(ops),
                       point=None if point is None else str(scalar(point)),
                       char_polys=tuple(cps), max_drift=drift)
