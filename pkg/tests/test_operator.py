import random

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from fuchskit.algebra import Polynomial, scalar
from fuchskit.operator import (
    DomainError,
    FuchsianOperator,
    accessory_degrees,
    degree_budget,
    operator_to_text,
    parse_operator,
    parse_poly_expr,
    psi_all,
    serialize_operator,
    validate_fuchsian,
)
from fuchskit.sampling import random_operator


def make(order, real, coeffs, apparent=()):
    return FuchsianOperator(order=order, real_points=tuple(real),
                            apparent_points=tuple(apparent), coeffs=tuple(coeffs))


W2_ZERO = make(2, (0, 1), (Polynomial.zero(), Polynomial.zero()))


class TestConstruction:
    def test_repeated_real_point_rejected(self):
        with pytest.raises(DomainError, match="points not distinct"):
            make(1, (0, 0), (Polynomial.zero(),))

    def test_real_apparent_overlap_rejected(self):
        with pytest.raises(DomainError, match="points not distinct"):
            make(1, (0, 1), (Polynomial.zero(),), apparent=(1,))

    def test_order_coeff_mismatch(self):
        with pytest.raises(DomainError, match="order mismatch"):
            make(2, (0, 1), (Polynomial.zero(),))

    def test_order_must_be_positive(self):
        with pytest.raises(DomainError):
            make(0, (0,), ())

    def test_coercion(self):
        op = make(1, ("1/2",), ([1, "2/3"],))
        assert op.real_points[0] == scalar("1/2")
        assert op.coeffs[0] == Polynomial.of(1, "2/3")


class TestPsiAll:
    def test_two_points(self):
        # {0,1} -> z^2 - z
        assert psi_all(W2_ZERO) == Polynomial.of(0, -1, 1)

    def test_with_apparent(self):
        op = make(1, (0,), (Polynomial.zero(),), apparent=(2,))
        assert psi_all(op) == Polynomial.of(0, -2, 1)

    def test_empty(self):
        op = make(1, (), (Polynomial.zero(),))
        assert psi_all(op) == Polynomial.one()

    @given(st.integers(0, 10 ** 6))
    @settings(max_examples=30, deadline=None)
    def test_degree_and_monic(self, seed):
        rng = random.Random(seed)
        op = random_operator(rng, rng.randint(1, 3), rng.randint(1, 4),
                             rng.randint(0, 2))
        p = psi_all(op)
        assert p.degree() == op.num_real + op.num_apparent
        assert p.lc() == scalar(1)


class TestDegrees:
    def test_budget_m2_n3_one_apparent(self):
        got = degree_budget(2, 3, 1)
        assert got.degrees == (3, 6)
        assert got.total == 11

    def test_budget_m1_n2(self):
        got = degree_budget(1, 2, 0)
        assert got.degrees == (1,)
        assert got.total == 2

    def test_budget_m2_n2(self):
        got = degree_budget(2, 2, 0)
        assert got.degrees == (1, 2)
        assert got.total == 5

    def test_total_is_coefficient_count(self):
        for m in range(1, 5):
            for n in range(1, 5):
                for N in range(0, 3):
                    b = degree_budget(m, n, N)
                    assert b.total == sum(d + 1 for d in b.degrees)

    def test_on_operator(self):
        op = make(2, (0, 1, 2), (Polynomial.zero(), Polynomial.zero()), apparent=(3,))
        assert accessory_degrees(op) == degree_budget(2, 3, 1)


class TestValidate:
    def test_all_bounds_hold(self):
        op = make(2, (0,), (Polynomial.one(), Polynomial.zero()))
        rep = validate_fuchsian(op)
        assert rep.infinity_regular and rep.ok
        assert [c.allowed for c in rep.fuchs_degree_ok] == [0, 0]
        assert not rep.messages

    def test_violation_flagged(self):
        # single point, second coefficient -z: degree 1 over the bound 0
        op = make(2, (0,), (Polynomial.zero(), Polynomial.of(0, -1)))
        rep = validate_fuchsian(op)
        assert not rep.infinity_regular
        bad = [c for c in rep.fuchs_degree_ok if not c.ok]
        assert len(bad) == 1 and bad[0].k == 2
        assert bad[0].observed == 1 and bad[0].allowed == 0
        assert rep.messages

    def test_first_order_constant(self):
        op = make(1, (0, 1), (Polynomial.constant(5),))
        assert validate_fuchsian(op).ok

    @given(st.integers(0, 10 ** 6))
    @settings(max_examples=25, deadline=None)
    def test_point_permutation_invariance(self, seed):
        rng = random.Random(seed)
        op = random_operator(rng, rng.randint(1, 3), rng.randint(2, 4),
                             rng.randint(0, 2))
        perm_r = list(op.real_points)
        perm_a = list(op.apparent_points)
        rng.shuffle(perm_r)
        rng.shuffle(perm_a)
        shuffled = FuchsianOperator(op.order, tuple(perm_r), tuple(perm_a), op.coeffs)
        assert validate_fuchsian(shuffled) == validate_fuchsian(op)

    @given(st.integers(0, 10 ** 6))
    @settings(max_examples=25, deadline=None)
    def test_random_operators_valid(self, seed):
        rng = random.Random(seed)
        op = random_operator(rng, rng.randint(1, 4), rng.randint(1, 4),
                             rng.randint(0, 2), gaussian=True)
        assert validate_fuchsian(op).ok


class TestExprParser:
    def test_basic(self):
        assert parse_poly_expr("1/2 + 3*z - z^2") == Polynomial.of("1/2", 3, -1)

    def test_gaussian(self):
        got = parse_poly_expr("(1+i)*z")
        assert got == Polynomial.of(0, {"re": "1", "im": "1"})

    def test_nested(self):
        assert parse_poly_expr("-(z - 2)^2") == Polynomial.of(-4, 4, -1)

    def test_division_by_constant(self):
        assert parse_poly_expr("z/2") == Polynomial.of(0, "1/2")

    def test_division_by_poly_rejected(self):
        with pytest.raises(DomainError):
            parse_poly_expr("1/z")

    def test_trailing_junk(self):
        with pytest.raises(DomainError):
            parse_poly_expr("z )")


class TestParseJson:
    def test_w2_zero(self):
        doc = {"order": 2, "real_points": ["0", "1"], "apparent_points": [],
               "coeffs": [[], []]}
        op = parse_operator(doc)
        assert op == W2_ZERO
        assert psi_all(op) == Polynomial.of(0, -1, 1)

    def test_json_string(self):
        op = parse_operator('{"order": 1, "real_points": ["0"], "coeffs": [["2"]]}')
        assert op == make(1, (0,), (Polynomial.constant(2),))

    def test_repeated_point(self):
        doc = {"order": 1, "real_points": ["0", "0"], "coeffs": [[]]}
        with pytest.raises(DomainError, match="points not distinct"):
            parse_operator(doc)

    def test_missing_key(self):
        with pytest.raises(DomainError, match="missing key"):
            parse_operator({"order": 1, "coeffs": [[]]})

    def test_malformed_number(self):
        doc = {"order": 1, "real_points": ["zero"], "coeffs": [[]]}
        with pytest.raises(DomainError, match="malformed"):
            parse_operator(doc)

    def test_coeff_count_mismatch(self):
        doc = {"order": 2, "real_points": ["0", "1"], "coeffs": [[]]}
        with pytest.raises(DomainError, match="order mismatch"):
            parse_operator(doc)

    @given(st.integers(0, 10 ** 6))
    @settings(max_examples=40, deadline=None)
    def test_round_trip(self, seed):
        rng = random.Random(seed)
        op = random_operator(rng, rng.randint(1, 4), rng.randint(1, 4),
                             rng.randint(0, 2), gaussian=True)
        assert parse_operator(serialize_operator(op)) == op

    def test_round_trip_through_json_text(self):
        import json
        rng = random.Random(7)
        op = random_operator(rng, 3, 3, 1, gaussian=True)
        assert parse_operator(json.dumps(serialize_operator(op))) == op


class TestParseText:
    def test_w2_zero(self):
        op = parse_operator("points: 0, 1\nw'' = 0")
        assert op == W2_ZERO

    def test_full_second_order(self):
        text = "points: 0, 1\nw'' = (z+1)/psi w' + (-1/2)/psi^2 w"
        op = parse_operator(text)
        assert op.coeffs == (Polynomial.of(1, 1), Polynomial.of("-1/2"))

    def test_parenthesized_whole_fraction(self):
        # whole fraction inside one pair of parentheses
        op = parse_operator("points: 0, 1\nw'' = (z/psi) w' + (3/psi^2) w")
        assert op.coeffs == (Polynomial.x(), Polynomial.constant(3))

    def test_minus_between_terms(self):
        op = parse_operator("points: 0, 1\nw'' = (z)/psi w' - (3)/psi^2 w")
        assert op.coeffs[1] == Polynomial.constant(-3)

    def test_apparent_line_and_comments(self):
        text = """
        # a third-order instance
        points: 0, 1
        apparent: 1/2
        w''' = (1)/psi w'' + (z)/psi^2 w' + (z^2)/psi^3 w
        """
        op = parse_operator(text)
        assert op.order == 3
        assert op.apparent_points == (scalar("1/2"),)
        assert op.coeffs == (Polynomial.one(), Polynomial.x(), Polynomial.of(0, 0, 1))

    def test_gaussian_point(self):
        op = parse_operator("points: i, -i\nw' = (1)/psi w")
        assert op.real_points == (scalar({"im": "1"}), scalar({"im": "-1"}))

    def test_wrong_psi_power(self):
        with pytest.raises(DomainError, match="does not match"):
            parse_operator("points: 0, 1\nw'' = (z)/psi^2 w'")

    def test_duplicate_term(self):
        with pytest.raises(DomainError, match="duplicate"):
            parse_operator("points: 0, 1\nw'' = (z)/psi w' + (1)/psi w'")

    def test_order_cap(self):
        with pytest.raises(DomainError, match="order <= 3"):
            parse_operator("points: 0\nw'''' = 0")

    @given(st.integers(0, 10 ** 6))
    @settings(max_examples=40, deadline=None)
    def test_text_round_trip(self, seed):
        rng = random.Random(seed)
        op = random_operator(rng, rng.randint(1, 3), rng.randint(1, 3),
                             rng.randint(0, 1), gaussian=True)
        assert parse_operator(operator_to_text(op)) == op

    def test_text_rejects_high_order(self):
        rng = random.Random(1)
        op = random_operator(rng, 4, 2)
        with pytest.raises(DomainError):
            operator_to_text(op)
