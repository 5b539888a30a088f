import math

import numpy as np
import pytest

from etaq.limits import (c_s_naive, c_s_surface, commutativity_gap, limit_A,
                         limit_A_series, limit_B, rh_contradiction_check)
from etaq.qset import QOrdering
from etaq.series import StripPoint, eta_accel, geom_closed


def i_major_oracle(p, ordering, n, h):
    """Alternate summation order: outer loop over i, inner over k."""
    from etaq.series import term_ab
    c = 0.0
    s = 0.0
    for i, q in enumerate(ordering.prefix(h)):
        for k in range(1, n + 1):
            if k % q.value == 0:
                a_k, b_k = term_ab(k, p)
                c += q.sign * a_k
                s += q.sign * b_k
    return c, s


class TestSurface:
    def test_single_cell_example(self):
        # only k=3 contributes below n=4 at h=1; f(3,1) = -1, a_3 = 3^(-1/2)
        surf = c_s_surface(StripPoint(0.5, 0.0), QOrdering.by_value(100),
                           [4], [1])
        assert surf.C[0, 0] == pytest.approx(-(3.0 ** -0.5), abs=1e-15)

    def test_gamma_prefix_rows_vanish(self):
        surf = c_s_surface(StripPoint(0.5, 14.0), QOrdering.by_value(100),
                           [1, 2], [1, 5, 10])
        assert np.all(surf.C == 0.0)
        assert np.all(surf.S == 0.0)

    def test_h_zero_column_vanishes(self):
        surf = c_s_surface(StripPoint(0.5, 0.0), QOrdering.by_value(1000),
                           [10, 100], [0, 3])
        assert np.all(surf.C[:, 0] == 0.0)
        assert np.all(surf.S[:, 0] == 0.0)

    def test_against_naive_triple_loop(self):
        p = StripPoint(0.75, 3.0)
        ordering = QOrdering.by_value(2000)
        n_axis = [1, 3, 17, 60, 200]
        h_axis = [1, 4, 20, 50]
        surf = c_s_surface(p, ordering, n_axis, h_axis)
        for i, n in enumerate(n_axis):
            for j, h in enumerate(h_axis):
                c_ref, s_ref = c_s_naive(p, ordering, n, h)
                assert surf.C[i, j] == pytest.approx(c_ref, abs=1e-12)
                assert surf.S[i, j] == pytest.approx(s_ref, abs=1e-12)

    def test_k_major_vs_i_major(self):
        p = StripPoint(0.5, 14.0)
        ordering = QOrdering.by_value(500)
        for n, h in ((50, 10), (120, 25)):
            surf = c_s_surface(p, ordering, [n], [h])
            c_ref, s_ref = i_major_oracle(p, ordering, n, h)
            assert surf.C[0, 0] == pytest.approx(c_ref, abs=1e-12)
            assert surf.S[0, 0] == pytest.approx(s_ref, abs=1e-12)

    def test_shuffled_ordering(self):
        p = StripPoint(0.5, 0.0)
        ordering = QOrdering.seeded_shuffle(3, 30, 500)
        surf = c_s_surface(p, ordering, [40], [12])
        c_ref, s_ref = c_s_naive(p, ordering, 40, 12)
        assert surf.C[0, 0] == pytest.approx(c_ref, abs=1e-13)
        assert surf.S[0, 0] == pytest.approx(s_ref, abs=1e-13)

    def test_csv_shape(self, tmp_path):
        surf = c_s_surface(StripPoint(0.5, 0.0), QOrdering.by_value(100),
                           [1, 2, 4], [1, 2])
        out = tmp_path / "surf.csv"
        with out.open("w") as fh:
            surf.write_csv(fh)
        lines = out.read_text().splitlines()
        assert lines[0] == "n,h,C,S"
        assert len(lines) == 1 + 3 * 2


class TestLimitA:
    def test_empty_sum(self):
        assert limit_A(StripPoint(2.0, 0.0), QOrdering.by_value(100), 0) == (0.0, 0.0)

    def test_first_element_at_two(self):
        a_cos, a_sin = limit_A(StripPoint(2.0, 0.0), QOrdering.by_value(100), 1)
        assert a_cos == pytest.approx(-math.pi**2 / 108.0, abs=1e-12)
        assert a_sin == pytest.approx(0.0, abs=1e-12)

    def test_depends_on_prefix_set_not_sequence(self):
        # same first-20 set, different order: A at h=20 must coincide
        p = StripPoint(0.75, 3.0)
        a1 = limit_A(p, QOrdering.by_value(1000), 20)
        a2 = limit_A(p, QOrdering.seeded_shuffle(11, 20, 1000), 20)
        assert a1[0] == pytest.approx(a2[0], abs=1e-12)
        assert a1[1] == pytest.approx(a2[1], abs=1e-12)

    def test_series_prefix_consistency(self):
        p = StripPoint(0.5, 14.0)
        ordering = QOrdering.by_value(1000)
        a_cos, a_sin = limit_A_series(p, ordering, 30)
        for h in (1, 7, 30):
            single = limit_A(p, ordering, h)
            assert single[0] == pytest.approx(a_cos[h - 1], abs=1e-14)
            assert single[1] == pytest.approx(a_sin[h - 1], abs=1e-14)


class TestLimitB:
    def test_oracle_at_half(self):
        est = limit_B(StripPoint(0.5, 0.0), 10**6)
        eta_half = eta_accel(StripPoint(0.5, 0.0)).value.real
        assert est.oracle_cos == pytest.approx(-math.sqrt(2.0) - eta_half, abs=1e-12)
        assert est.oracle_cos == pytest.approx(-2.0191122, abs=1e-6)
        assert est.disagreement_cos <= 5e-3

    def test_direct_vs_oracle_generic(self):
        est = limit_B(StripPoint(0.75, 3.0), 10**6)
        assert est.disagreement_cos <= 5e-3
        assert est.disagreement_sin <= 5e-3

    def test_absolute_region_tight(self):
        est = limit_B(StripPoint(3.0, 0.0), 10**5)
        assert est.disagreement_cos <= 1e-9

    def test_budget_validation(self):
        with pytest.raises(ValueError):
            limit_B(StripPoint(0.5, 0.0), 0)


class TestCommutativityGap:
    def test_degenerate_report(self):
        rep = commutativity_gap(StripPoint(0.5, 0.0), QOrdering.by_value(100),
                                h_max=0, budget=0)
        assert rep.A_cos == () and rep.A_sin == ()
        assert rep.B_cos is None
        assert rep.gap_cos == rep.oracleB_cos
        assert not rep.a_converged

    def test_gap_vanishes_in_absolute_region(self):
        ordering = QOrdering.by_value(10_000)
        rep = commutativity_gap(StripPoint(3.0, 0.0), ordering,
                                len(ordering.sequence()), budget=10**5)
        assert abs(rep.gap_cos) <= 1e-6
        assert abs(rep.gap_sin) <= 1e-6

    def test_gap_shrinks_with_bound(self):
        gaps = []
        for bound in (100, 1000, 10_000):
            ordering = QOrdering.by_value(bound)
            rep = commutativity_gap(StripPoint(3.0, 0.0), ordering,
                                    len(ordering.sequence()), budget=1)
            gaps.append(abs(rep.gap_cos))
        floor = 1e-9
        assert gaps[0] > max(gaps[1], floor) or gaps[0] <= floor
        assert gaps[1] > max(gaps[2], floor) or gaps[1] <= floor

    def test_json_round_trip(self):
        import json
        rep = commutativity_gap(StripPoint(0.75, 3.0), QOrdering.by_value(500),
                                20, budget=1000)
        doc = json.loads(rep.to_json())
        assert doc["point"] == {"x": 0.75, "y": 3.0}
        assert len(doc["A_cos"]) == 20
        assert doc["gap_cos"] == rep.gap_cos


class TestContradictionCheck:
    def test_oracle_identity_tight(self):
        rep = rh_contradiction_check(StripPoint(2.0, 0.0), 10**5)
        assert rep.residual_oracle_cos <= 1e-12
        assert rep.residual_oracle_sin <= 1e-12

    def test_direct_paths_at_half(self):
        rep = rh_contradiction_check(StripPoint(0.5, 0.0), 10**6)
        assert rep.residual_oracle_cos <= 1e-10
        assert rep.residual_direct_cos <= 1e-2
        assert rep.lhs_cos == pytest.approx(-math.sqrt(2.0), abs=1e-12)

    def test_report_dict(self):
        rep = rh_contradiction_check(StripPoint(0.75, 3.0), 10**4)
        doc = rep.to_dict()
        assert doc["budget"] == 10**4
        assert doc["residualOracle_cos"] <= 1e-10
