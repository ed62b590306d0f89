"""Cyclic-vector recovery of scalar forms from companion connections."""

import random

import pytest

from fuchskit.algebra import ExactMatrix, Polynomial, RationalFunction, scalar
from fuchskit.connection import apply_gauge, build_companion
from fuchskit.cyclic import (
    connection_derivative,
    find_cyclic,
    roundtrip_check,
    standard_candidates,
)
from fuchskit.frobenius import annihilator_from_solutions
from fuchskit.operator import DomainError, FuchsianOperator
from fuchskit.sampling import random_operator

X = Polynomial.x()
ONE = Polynomial.one()
NIL = Polynomial.zero()

MODEL = FuchsianOperator(order=2, real_points=(0,), apparent_points=(),
                         coeffs=([1], [0]))
FLAT2 = FuchsianOperator(order=2, real_points=(), apparent_points=(),
                         coeffs=([0], [0]))


class TestCandidates:
    def test_order_two(self):
        cands = standard_candidates(2)
        assert cands == ((ONE, NIL), (NIL, ONE), (ONE, X))

    def test_order_three_count_and_shapes(self):
        cands = standard_candidates(3)
        assert len(cands) == 6
        assert cands[0] == (ONE, NIL, NIL)
        assert cands[3] == (ONE, X, NIL)   # window of length 2 at the start
        assert cands[4] == (NIL, ONE, X)
        assert cands[5] == (ONE, X, X * X)

    def test_cap(self):
        assert len(standard_candidates(5)) <= 25


class TestDerivative:
    def test_companion_shifts_basis_columns(self):
        conn = build_companion(MODEL)
        psi = Polynomial.from_roots((scalar(0),))
        d1 = connection_derivative(conn, (ONE, NIL))
        assert d1[0].is_zero()
        assert d1[1] == RationalFunction.make(ONE, psi)

    def test_length_guard(self):
        conn = build_companion(MODEL)
        with pytest.raises(DomainError):
            connection_derivative(conn, (ONE,))


class TestRoundtrip:
    def test_model(self):
        rep = roundtrip_check(MODEL)
        assert rep.ok
        assert rep.apparent_locus == ()
        assert rep.vector == (ONE, NIL)  # first candidate already spans

    def test_first_candidate_determinant(self):
        res = find_cyclic(build_companion(MODEL))
        assert res.tried == 1
        assert res.determinant == RationalFunction.make(ONE, X)

    def test_random_operators(self):
        rng = random.Random(7)
        for _ in range(25):
            m = rng.choice([1, 2, 3])
            op = random_operator(rng, m, rng.choice([2, 3]))
            rep = roundtrip_check(op)
            assert rep.ok and rep.apparent_locus == ()

    def test_apparent_points_survive(self):
        op = annihilator_from_solutions([[1], [0, 1], [0, 0, 0, 1]])
        rep = roundtrip_check(op)
        assert rep.ok
        # the recovered operator keeps 0 in its point set
        assert scalar(0) in rep.recovered.all_points

    def test_constant_gauge_leaves_recovery_alone(self):
        conn = build_companion(MODEL)
        g = ExactMatrix.from_rows([[ONE, NIL], [NIL, Polynomial.constant(scalar(3))]])
        res = find_cyclic(apply_gauge(conn, g))
        assert res.operator.coeffs == MODEL.coeffs
        assert res.apparent_locus == ()


class TestApparentLocus:
    def test_forced_window_creates_locus(self):
        # pairing w'' = 0 against (z, 1) yields the span {z, z^2 + 1}
        conn = build_companion(FLAT2)
        res = find_cyclic(conn, candidates=[(X, ONE)])
        assert sorted(str(a) for a in res.apparent_locus) == ["-1", "1"]
        direct = annihilator_from_solutions([[0, 1], [1, 0, 1]])
        assert res.operator.coeffs == direct.coeffs
        assert set(res.operator.all_points) == set(direct.all_points)
        assert res.unfactored.degree() == 0

    def test_non_spanning_candidate_is_skipped(self):
        conn = build_companion(FLAT2)
        res = find_cyclic(conn, candidates=[(NIL, ONE), (ONE, NIL)])
        assert res.tried == 2
        assert res.operator.coeffs == FLAT2.coeffs

    def test_exhausted_candidates(self):
        conn = build_companion(FLAT2)
        with pytest.raises(DomainError, match="spans"):
            find_cyclic(conn, candidates=[(NIL, ONE)])

    def test_empty_candidate_list(self):
        conn = build_companion(FLAT2)
        with pytest.raises(DomainError, match="candidate"):
            find_cyclic(conn, candidates=[])


def test_result_serializes():
    res = find_cyclic(build_companion(MODEL))
    doc = res.to_json()
    assert doc["tried"] == 1
    assert doc["apparent_locus"] == []
    assert roundtrip_check(MODEL).to_json()["ok"] is True
