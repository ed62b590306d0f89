"""Dimension counts, constraint ranks, jet determinants, weight data."""

import random
from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from fuchskit.algebra import scalar
from fuchskit.moduli import (
    build_constraints,
    dimensions,
    gen_vandermonde,
    hodge_parameters,
    paired_plan,
    vdm_closed_form,
    verify_rank,
)
from fuchskit.operator import DomainError


class TestDimensions:
    # order, num_real -> net
    GRID = {(2, 2): 0, (2, 3): 1, (2, 4): 2, (2, 5): 3,
            (3, 2): 1, (3, 3): 4, (3, 4): 7,
            (4, 2): 3, (4, 3): 9,
            (5, 2): 6}

    def test_grid(self):
        for (m, n), net in self.GRID.items():
            rep = dimensions(m, n)
            assert rep.net_dimension == net
            assert rep.doubled_dimension == 2 * net
            assert rep.parameter_count - rep.condition_count == net

    def test_smallest_shape_is_rigid(self):
        rep = dimensions(2, 2)
        assert rep.parameter_count == 5
        assert rep.condition_count == 5
        assert rep.net_dimension == 0

    @given(st.integers(min_value=1, max_value=6),
           st.integers(min_value=2, max_value=6),
           st.integers(min_value=0, max_value=5))
    def test_apparent_points_never_move_the_net(self, m, n, extra):
        assert dimensions(m, n, extra).net_dimension == dimensions(m, n).net_dimension

    def test_condition_count_grows_with_apparent_points(self):
        base = dimensions(3, 2)
        more = dimensions(3, 2, 2)
        assert more.condition_count == base.condition_count + 2 * 6  # m(m+1)/2 each

    def test_guards(self):
        with pytest.raises(DomainError):
            dimensions(0, 3)
        with pytest.raises(DomainError):
            dimensions(2, 1)
        with pytest.raises(DomainError):
            dimensions(2, 3, -1)


class TestConstraintMatrix:
    def test_shape_and_rank_plain(self):
        cs = build_constraints(2, (0, 1))
        assert cs.matrix.shape() == (6, 5)
        assert cs.expected_rank == 5
        rep = verify_rank(cs)
        assert rep.ok
        assert rep.block_ranks == (2, 3)
        assert rep.block_dependencies == (1, 0)

    def test_shape_and_rank_with_apparent_point(self):
        cs = build_constraints(2, (0, 1), (2,))
        assert cs.matrix.shape() == (9, 8)
        rep = verify_rank(cs)
        assert rep.ok and rep.total_rank == 8
        assert rep.block_dependencies == (1, 0)

    def test_tags(self):
        cs = build_constraints(2, (0, 1), (2,))
        kinds = [t.kind for t in cs.tags]
        assert kinds.count("top-coefficient") == 2
        assert kinds.count("derivative") == 1
        jet = cs.tags[kinds.index("derivative")]
        assert jet.k == 2 and jet.point == "2" and jet.derivative_order == 1
        top = cs.tags[kinds.index("top-coefficient")]
        assert top.point == "infinity"
        # value rows visit real points before apparent ones
        assert cs.tags[0].kind == "exponent" and cs.tags[0].point == "0"

    def test_blocks_do_not_interact(self):
        cs = build_constraints(3, (0, 1, -1))
        for k in range(1, 4):
            r0, r1 = cs.row_blocks[k - 1]
            lo, hi = cs.col_blocks[k - 1]
            for r in range(r0, r1):
                for c in range(cs.matrix.shape()[1]):
                    if not lo <= c < hi:
                        assert cs.matrix.entry(r, c).is_zero()

    def test_rank_sweep(self):
        # the acceptance suite runs the full grid; spot check here
        rng = random.Random(11)
        for m, n, extra in [(2, 2, 1), (3, 3, 0), (3, 2, 2), (1, 4, 3)]:
            pts = set()
            while len(pts) < n + extra:
                pts.add(Fraction(rng.randint(-9, 9), rng.choice([1, 2, 3])))
            pts = sorted(pts)
            rep = verify_rank(build_constraints(m, pts[:n], pts[n:]))
            assert rep.ok
            assert rep.block_dependencies[0] == 1
            assert all(d == 0 for d in rep.block_dependencies[1:])

    def test_gaussian_points(self):
        cs = build_constraints(2, ("0", {"re": 0, "im": 1}, {"re": 0, "im": -1}))
        assert verify_rank(cs).ok

    def test_guards(self):
        with pytest.raises(DomainError, match="distinct"):
            build_constraints(2, (0, 1), (1,))
        with pytest.raises(DomainError):
            build_constraints(2, (0,))


class TestJetDeterminants:
    def test_paired_plan(self):
        assert paired_plan(0) == (1, 1)
        assert paired_plan(3) == (2, 2, 2, 1, 1)
        with pytest.raises(DomainError):
            paired_plan(-1)

    def test_smallest_paired_case(self):
        pts = (0, 1, 2)
        det = gen_vandermonde(pts, paired_plan(1)).det()
        assert det == scalar(4)
        assert det == vdm_closed_form(pts, paired_plan(1))

    def test_plain_vandermonde(self):
        assert vdm_closed_form((0, 1), (1, 1)) == scalar(1)
        assert gen_vandermonde((0, 1), (1, 1)).det() == scalar(1)

    def test_matches_closed_form(self):
        rng = random.Random(4321)
        for _ in range(20):
            r = rng.randint(0, 4)
            pts = set()
            while len(pts) < r + 2:
                pts.add(Fraction(rng.randint(-6, 6), rng.choice([1, 2])))
            pts = tuple(pts)
            assert gen_vandermonde(pts, paired_plan(r)).det() == \
                vdm_closed_form(pts, paired_plan(r))

    def test_matches_closed_form_confluent(self):
        rng = random.Random(99)
        for _ in range(12):
            count = rng.randint(1, 4)
            pts = set()
            while len(pts) < count:
                pts.add(Fraction(rng.randint(-5, 5)))
            pts = tuple(pts)
            plan = tuple(rng.randint(1, 3) for _ in pts)
            assert gen_vandermonde(pts, plan).det() == vdm_closed_form(pts, plan)

    def test_float_cross_check(self):
        # independent numeric determinant for the sign convention
        pts = (Fraction(-2), Fraction(1, 2), Fraction(3))
        plan = (2, 2, 1)
        size = sum(plan)
        M = gen_vandermonde(pts, plan)
        A = np.array([[float(M.entry(i, j).re) for j in range(size)]
                      for i in range(size)])
        want = float(vdm_closed_form(pts, plan).re)
        assert abs(np.linalg.det(A) - want) <= 1e-8 * max(1.0, abs(want))

    def test_gaussian_points_stay_exact(self):
        i = {"re": 0, "im": 1}
        pts = (0, i, 1)
        assert gen_vandermonde(pts, (2, 1, 1)).det() == vdm_closed_form(pts, (2, 1, 1))

    def test_guards(self):
        with pytest.raises(DomainError, match="one multiplicity"):
            gen_vandermonde((0, 1), (1,))
        with pytest.raises(DomainError, match="positive"):
            gen_vandermonde((0, 1), (1, 0))

    def test_coincident_points_degenerate_to_zero(self):
        assert gen_vandermonde((0, 0), (1, 1)).det() == scalar(0)
        assert vdm_closed_form((0, 0), (1, 1)) == scalar(0)
        assert gen_vandermonde((2, 2, 1), (2, 1, 1)).det() == scalar(0)
        assert vdm_closed_form((2, 2, 1), (2, 1, 1)) == scalar(0)


class TestWeightData:
    def test_beta_values(self):
        assert hodge_parameters(2, 3).beta == Fraction(1, 4)
        assert hodge_parameters(3, 2).beta == Fraction(1, 3)
        assert hodge_parameters(2, 2).beta == Fraction(1, 6)

    def test_entry_fields(self):
        h = hodge_parameters(2, 3, [Fraction(1, 2), Fraction(-3, 2), 2])
        assert h.entries[0].weight == scalar(Fraction(1, 8))
        assert h.entries[0].fractional == Fraction(1, 2)
        assert h.entries[1].fractional == Fraction(1, 2)  # floor, not truncation
        assert h.entries[2].fractional == 0

    def test_complex_exponent(self):
        h = hodge_parameters(2, 3, [{"re": "1/3", "im": 1}])
        e = h.entries[0]
        assert e.fractional == Fraction(1, 3)
        assert (e.weight * scalar(2) + scalar(h.beta)) == e.mu

    def test_guards(self):
        with pytest.raises(DomainError):
            hodge_parameters(0, 3)
        with pytest.raises(DomainError):
            hodge_parameters(2, 1)
