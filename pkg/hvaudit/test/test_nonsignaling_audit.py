"""
Tests for the averaged-conditional audits
"""
import math

import numpy as np
import pytest

from hvaudit import hv_models
from hvaudit import nonsignaling_audit as audit
from hvaudit.hv_models import RotatingRule
from hvaudit.models import Angle, HVValue, Membership, Outcome, OUTCOMES

PLUS, MINUS = Outcome.PLUS, Outcome.MINUS
TOL = 1e-12


class TestAveragedConditional:

    @pytest.mark.parametrize('theta, phi, v', [(0, math.pi / 3, 0.1), (0.4, 2.2, 0.73), (1.0, 1.0, 0.0)])
    def test_disjoint_is_half(self, disjoint, theta, phi, v):
        assert audit.averaged_conditional_L(disjoint, theta, phi, v, PLUS) == 0.5

    def test_overlap_cases(self, overlap):
        assert audit.averaged_conditional_L(overlap, 0, math.pi / 3, 0.1, PLUS) == 1.0
        assert audit.averaged_conditional_L(overlap, 0, math.pi / 3, 0.5, PLUS) == 0.5
        assert audit.averaged_conditional_L(overlap, 0, math.pi / 3, 0.9, PLUS) == 0.0

    def test_values_and_total_probability(self, any_model, rng):
        for _ in range(300):
            theta, phi, v = rng.uniform(0, math.pi), rng.uniform(0, math.pi), rng.random()
            plus = audit.averaged_conditional_L(any_model, theta, phi, v, PLUS)
            minus = audit.averaged_conditional_L(any_model, theta, phi, v, MINUS)
            assert plus in (0.0, 0.5, 1.0)
            assert plus + minus == 1.0

    def test_vectorised_matches_scalar(self, overlap):
        points = np.array([k / 50 for k in range(50)])
        for y in OUTCOMES:
            many = audit.l_values_many(overlap, Angle(0.3), Angle(1.2), points, y)
            assert list(many) == [audit.averaged_conditional_L(overlap, 0.3, 1.2, p, y) for p in points]

    def test_census_table(self):
        assert audit.L_BY_MEMBERSHIP == {Membership.BOTH: 1.0, Membership.ONE: 0.5, Membership.NEITHER: 0.0}


class TestThetaScan:

    def test_disjoint_is_flat(self, disjoint):
        scan = audit.theta_scan(disjoint, 0.7, 0.42, PLUS, audit.default_theta_grid(50))
        assert scan.spread == 0.0
        assert set(scan.l_values) == {0.5}

    def test_overlap_reference_witness(self, overlap):
        scan = audit.theta_scan(overlap, math.pi / 3, 0.1, PLUS, [math.pi / 3, 0.0])
        assert scan.l_values == [0.5, 1.0]
        assert scan.spread == 0.5

    def test_equal_settings_minus_outcome(self, overlap):
        scan = audit.theta_scan(overlap, 0.0, 0.99, MINUS, [0.0])
        assert scan.l_values == [0.5]
        assert scan.spread == 0.0

    def test_empty_grid(self, disjoint):
        with pytest.raises(ValueError, match='empty scan grid'):
            audit.theta_scan(disjoint, 0.0, 0.5, PLUS, [])

    def test_to_dict(self, overlap):
        data = audit.theta_scan(overlap, math.pi / 3, 0.1, 1, [0.0]).to_dict()
        assert data['v'] == 0.1
        assert data['y'] == 1
        assert data['grid'] == [0.0]


class TestCheckEq10:

    def test_disjoint_passes_on_every_audited_phi(self, disjoint):
        thetas = audit.default_theta_grid(50)
        for phi in audit.uniform_angles(8):
            v_grid = audit.default_v_grid(disjoint, phi, thetas, 1000)
            for y in OUTCOMES:
                report = audit.check_eq10(disjoint, phi, y, thetas, v_grid, TOL)
                assert report.quantity == 0.0
                assert report.passed
                assert report.witnesses == []

    def test_overlap_fails_with_reference_witness(self, overlap):
        phi = Angle(math.pi / 3)
        thetas = audit.default_theta_grid(50) + [phi]
        v_grid = audit.default_v_grid(overlap, phi, thetas, 1000)
        report = audit.check_eq10(overlap, phi, PLUS, thetas, v_grid, TOL)

        assert not report.passed
        assert report.quantity == 0.5
        witness = next(w for w in report.witnesses if w['v'] == 0.1)
        assert witness['theta_1'] == 0.0
        assert witness['l_1'] == 1.0
        assert witness['l_2'] == 0.5
        for w in report.witnesses:
            assert abs(w['l_1'] - w['l_2']) > TOL

    def test_spread_never_exceeds_half(self, overlap):
        thetas = audit.default_theta_grid(30)
        for phi in audit.uniform_angles(4):
            v_grid = audit.default_v_grid(overlap, phi, thetas, 200)
            assert audit.check_eq10(overlap, phi, PLUS, thetas, v_grid, TOL).quantity <= 0.5

    def test_loose_tolerance_passes_with_warning(self, overlap, caplog):
        thetas = audit.default_theta_grid(10)
        v_grid = audit.default_v_grid(overlap, 0.0, thetas, 50)
        report = audit.check_eq10(overlap, 0.0, PLUS, thetas, v_grid, 2.0)
        assert report.passed
        assert 'maximal possible spread' in caplog.text

    def test_rotating_rule_does_not_change_the_audit(self):
        thetas = audit.default_theta_grid(20)
        for variant in ('disjoint', 'overlap'):
            threshold = hv_models.make_model(variant)
            rotating = hv_models.make_model(variant, RotatingRule())
            v_grid = audit.default_v_grid(threshold, 1.0, thetas, 200)
            assert (audit.check_eq10(threshold, 1.0, PLUS, thetas, v_grid, TOL).quantity
                    == audit.check_eq10(rotating, 1.0, PLUS, thetas, v_grid, TOL).quantity)


class TestObservableChecks:

    @pytest.mark.parametrize('theta, phi', [(0, math.pi / 3), (1.2, 0.1), (2.0, 2.0)])
    def test_marginal_y_is_half(self, any_model, theta, phi):
        for y in OUTCOMES:
            assert audit.observable_marginal_y(any_model, theta, phi, y) == pytest.approx(0.5, abs=TOL)

    def test_marginal_check_on_dense_grid(self, any_model):
        report = audit.observable_marginal_check(any_model, audit.settings_grid(50), TOL)
        assert report.passed

    def test_faithfulness_check(self, any_model):
        report = audit.faithfulness_check(any_model, audit.settings_grid(20), TOL)
        assert report.passed
        assert len(report.detail) == 400

    def test_faithfulness_single_point(self, overlap):
        assert audit.faithfulness_check(overlap, [(0.5, 0.5)], TOL).passed

    def test_faithfulness_empty_grid(self, disjoint):
        with pytest.raises(ValueError, match='empty settings grid'):
            audit.faithfulness_check(disjoint, [], TOL)


class TestHiddenVariableChecks:

    @pytest.mark.parametrize('theta, phi', [(0, math.pi / 3), (0.3, 0.3), (1.0, 2.5)])
    def test_disjoint_is_uniform(self, disjoint, theta, phi):
        assert audit.uniform_conditional_check(disjoint, theta, phi, TOL, 200).passed

    def test_overlap_is_not_uniform(self, overlap):
        report = audit.uniform_conditional_check(overlap, 0, math.pi / 3, TOL, 200)
        assert not report.passed
        assert report.quantity == 0.5
        assert {w['l'] for w in report.witnesses} <= {0.0, 1.0}

    def test_overlap_equal_settings_is_uniform(self, overlap):
        assert audit.uniform_conditional_check(overlap, 0.4, 0.4, TOL, 200).passed

    def test_crossed_analyzers_are_uniform(self, any_model):
        report = audit.uniform_conditional_check(any_model, 0, math.pi / 2, TOL, 200)
        assert report.passed
        assert report.quantity == 0.0
        assert report.witnesses == []

    @pytest.mark.parametrize('rule', [None, RotatingRule()])
    def test_alice_side(self, rule):
        model = hv_models.make_overlap_model(rule)
        u_grid = [k / 100 for k in range(100)]
        report = audit.check_alice_side(model, 0.9, audit.uniform_angles(8), u_grid, TOL)
        assert report.passed
        assert report.quantity == 0.0

    def test_census_overlap_exhibits_every_case(self, overlap):
        thetas = audit.default_theta_grid(50)
        report = audit.l_case_census(overlap, 0.0, thetas, audit.default_v_grid(overlap, 0.0, thetas, 200))
        assert report.passed
        assert sorted(w['l'] for w in report.witnesses) == [0.0, 0.5, 1.0]

    def test_census_disjoint_only_one(self, disjoint):
        thetas = audit.default_theta_grid(50)
        report = audit.l_case_census(disjoint, 0.0, thetas, audit.default_v_grid(disjoint, 0.0, thetas, 200))
        assert not report.passed
        assert report.quantity == 2.0
        assert [w['case'] for w in report.witnesses] == ['one']


class TestGrids:

    def test_v_grid_contains_endpoints(self, overlap):
        grid = audit.default_v_grid(overlap, math.pi / 3, [Angle(0.0)], 10)
        points = [v.point for v in grid]
        assert points == sorted(points)
        assert 0.1 in points
        assert any(abs(p - 0.25) <= TOL for p in points)
        assert all(isinstance(v, HVValue) for v in grid)

    def test_uniform_angles(self):
        angles = audit.uniform_angles(4)
        assert [a.radians for a in angles] == pytest.approx([0, math.pi / 4, math.pi / 2, 3 * math.pi / 4])
        with pytest.raises(ValueError):
            audit.uniform_angles(0)

    def test_merge_reports(self, overlap):
        reports = [audit.uniform_conditional_check(overlap, t, 1.0, TOL, 50) for t in (0.0, 1.0)]
        merged = audit.merge_reports('uniform_conditional', reports, TOL)
        assert merged.quantity == 0.5
        assert len(merged.detail) == 2
        with pytest.raises(ValueError):
            audit.merge_reports('empty', [], TOL)
