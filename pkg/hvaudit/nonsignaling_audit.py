"""
Audits of the counter-example models against the averaging assumption.

The central quantity is the averaged conditional

    L(theta, phi, v, y) = 1/2 P[Y=y | theta, phi, v, X=+1] + 1/2 P[Y=y | theta, phi, v, X=-1]

which the averaging assumption requires to be free of theta. With both
indicators deterministic, L only takes the values 0, 1/2 and 1:
    v in both response sets    -> L(+1) = 1
    v in exactly one           -> L(+1) = 1/2
    v in neither               -> L(+1) = 0

Every probability here is an exact interval measure; Monte Carlo lives in
the sampler and is only used as a cross-check.
"""
import logging
import math

import numpy as np

from hvaudit import hv_models, quantum_oracle
from hvaudit.models import (Angle, Outcome, HVValue, Membership, AuditReport, LScanReport,
                            OUTCOMES)

logger = logging.getLogger(__name__)

# L is an average of two indicators, so no spread can exceed this
MAX_L_SPREAD = 1.0
MAX_WITNESSES = 20


# ---------------------------------------------------------------------------
# Grids
# ---------------------------------------------------------------------------

def uniform_angles(points, start=0.0, stop=math.pi):
    """points equally spaced angles on [start, stop)"""
    if points < 1:
        raise ValueError("grid needs at least one point")
    step = (stop - start) / points
    return [Angle(start + k * step) for k in range(points)]


def default_theta_grid(points=50):
    return uniform_angles(points)


def response_endpoints(model, theta, phi):
    sets = hv_models.response_sets(model, theta, phi)
    points = set(sets.v1.endpoints()) | set(sets.v2.endpoints())
    return [p for p in points if 0.0 <= p < 1.0]


def default_v_grid(model, phi, thetas, points=1000):
    """Uniform points k/points plus every response-set endpoint over thetas"""
    grid = {k / points for k in range(points)}
    for theta in thetas:
        grid.update(response_endpoints(model, theta, phi))
    return [HVValue(p) for p in sorted(grid)]


def settings_grid(points):
    """points x points (theta, phi) pairs on [0, pi)^2"""
    angles = uniform_angles(points)
    return [(theta, phi) for theta in angles for phi in angles]


# ---------------------------------------------------------------------------
# The averaged conditional L
# ---------------------------------------------------------------------------

def averaged_conditional_L(model, theta, phi, v, y):
    """L for a single hidden-variable value, averaged over Alice's outcome"""
    return hv_models.averaged_y_conditional(model, Angle.of(theta), Angle.of(phi), HVValue.of(v), Outcome.of(y))


def l_values_many(model, theta, phi, v_points, y):
    """Vectorised L over an array of v values (same result as averaged_conditional_L)"""
    sets = hv_models.response_sets(model, theta, phi)
    want_plus = Outcome.of(y) is Outcome.PLUS
    hit_plus = sets.v1.contains_many(v_points) == want_plus
    hit_minus = sets.v2.contains_many(v_points) == want_plus
    return 0.5 * hit_plus.astype(float) + 0.5 * hit_minus.astype(float)


def _l_matrix(model, phi, y, theta_grid, v_grid):
    v_points = np.array([HVValue.of(v).point for v in v_grid])
    return np.vstack([l_values_many(model, theta, phi, v_points, y) for theta in theta_grid]), v_points


def theta_scan(model, phi, v, y, grid):
    """L at each theta of the grid for fixed (phi, v, y)"""
    if not grid:
        raise ValueError("empty scan grid")
    phi, v, y = Angle.of(phi), HVValue.of(v), Outcome.of(y)
    thetas = [Angle.of(theta) for theta in grid]
    l_values = [averaged_conditional_L(model, theta, phi, v, y) for theta in thetas]
    return LScanReport(
        phi=phi,
        v=v,
        y=y,
        grid=thetas,
        l_values=l_values,
        spread=max(l_values) - min(l_values),
    )


def _witness(phi, v, y, theta_1, theta_2, l_1, l_2):
    return {
        'phi': phi.radians,
        'v': float(v),
        'y': int(y),
        'theta_1': theta_1.radians,
        'theta_2': theta_2.radians,
        'l_1': float(l_1),
        'l_2': float(l_2),
    }


def check_eq10(model, phi, y, theta_grid, v_grid, tol):
    """Largest theta-spread of L over the v grid at fixed (phi, y).

    A witness (phi, v, theta_1, theta_2, y, L(theta_1), L(theta_2)) is
    recorded for every v whose spread exceeds tol, with theta_1 the first
    grid angle attaining the maximum of L and theta_2 the first attaining the
    minimum.
    """
    if not theta_grid or not v_grid:
        raise ValueError("empty scan grid")
    if tol >= MAX_L_SPREAD:
        logger.warning(f"Tolerance {tol} exceeds the maximal possible spread of L ({MAX_L_SPREAD})")

    phi, y = Angle.of(phi), Outcome.of(y)
    thetas = [Angle.of(theta) for theta in theta_grid]
    matrix, v_points = _l_matrix(model, phi, y, thetas, v_grid)
    spreads = matrix.max(axis=0) - matrix.min(axis=0)

    witnesses = []
    for j in np.flatnonzero(spreads > tol):
        column = matrix[:, j]
        i_max, i_min = int(np.argmax(column)), int(np.argmin(column))
        witnesses.append(_witness(phi, v_points[j], y, thetas[i_max], thetas[i_min], column[i_max], column[i_min]))

    detail = [{'v': float(p), 'spread': float(s)} for p, s in zip(v_points, spreads)]
    quantity = float(spreads.max())
    logger.info(f"check_eq10 {model.variant.value} phi={phi.radians:.6f} y={y.label}: "
                f"max spread {quantity} over {len(thetas)}x{len(v_points)} points, {len(witnesses)} witnesses")
    return AuditReport.evaluate('theta_independence', quantity, tol, detail, witnesses)


# ---------------------------------------------------------------------------
# Observable-level checks
# ---------------------------------------------------------------------------

def observable_marginal_x(model, theta, phi, x):
    """P[X=x] from the model: exact measure of Alice's x-set under uniform U"""
    plus = model.x_rule.plus_set(Angle.of(theta))
    return (plus if Outcome.of(x) is Outcome.PLUS else plus.complement()).measure()


def observable_marginal_y(model, theta, phi, y):
    """P[Y=y] after integrating U and V exactly"""
    return sum(
        observable_marginal_x(model, theta, phi, x) * hv_models.response_set(model, theta, phi, x, y).measure()
        for x in OUTCOMES
    )


def observable_marginal_check(model, grid, tol):
    """Largest deviation of the model's x- and y-marginals from 1/2 over a settings grid"""
    if not grid:
        raise ValueError("empty settings grid")
    worst, worst_point = 0.0, None
    for theta, phi in grid:
        for outcome in OUTCOMES:
            deviation = max(abs(observable_marginal_y(model, theta, phi, outcome) - 0.5),
                            abs(observable_marginal_x(model, theta, phi, outcome) - 0.5))
            if deviation > worst or worst_point is None:
                worst, worst_point = deviation, (theta, phi, outcome)
    theta, phi, outcome = worst_point
    detail = [{'theta': Angle.of(theta).radians, 'phi': Angle.of(phi).radians,
               'outcome': int(outcome), 'deviation': worst}]
    return AuditReport.evaluate('observable_nonsignaling', worst, tol, detail)


def faithfulness_check(model, grid, tol):
    """Largest gap between model-induced conditionals and the quantum conditionals"""
    if not grid:
        raise ValueError("empty settings grid")
    detail = []
    worst = 0.0
    for theta, phi in grid:
        deviation = max(
            abs(hv_models.induced_conditional(model, theta, phi, y, x)
                - quantum_oracle.conditional_y_given_x(theta, phi, y, x))
            for x in OUTCOMES for y in OUTCOMES
        )
        worst = max(worst, deviation)
        detail.append({'theta': Angle.of(theta).radians, 'phi': Angle.of(phi).radians, 'deviation': deviation})
    return AuditReport.evaluate('faithfulness', worst, tol, detail)


# ---------------------------------------------------------------------------
# Hidden-variable-level checks
# ---------------------------------------------------------------------------

def uniform_conditional_check(model, theta, phi, tol, v_points=1000):
    """Is Y uniform given v once X is averaged out, i.e. L(v, +1) = 1/2 for every v?

    Checked on a dense v grid (with all response-set endpoints) and by
    interval algebra: L differs from 1/2 exactly on the overlap and on the
    uncovered part of [0, 1).
    """
    theta, phi = Angle.of(theta), Angle.of(phi)
    v_grid = default_v_grid(model, phi, [theta], v_points)
    points = np.array([v.point for v in v_grid])
    l_values = l_values_many(model, theta, phi, points, Outcome.PLUS)
    deviations = np.abs(l_values - 0.5)

    sets = hv_models.response_sets(model, theta, phi)
    off_half = sets.v_cap | sets.neither
    algebraic = 0.5 if not off_half.is_empty else 0.0
    quantity = max(float(deviations.max()), algebraic)

    witnesses = [
        {'theta': theta.radians, 'phi': phi.radians, 'v': float(points[j]),
         'l': float(l_values[j]),
         'deviation': float(deviations[j])}
        for j in np.flatnonzero(deviations > tol)[:MAX_WITNESSES]
    ]
    detail = [{
        'theta': theta.radians,
        'phi': phi.radians,
        'v_cap': sets.v_cap.to_list(),
        'uncovered': sets.neither.to_list(),
        'grid_deviation': float(deviations.max()),
        'algebraic_deviation': algebraic,
    }]
    return AuditReport.evaluate('uniform_conditional', quantity, tol, detail, witnesses)


def check_alice_side(model, theta, phi_grid, u_grid, tol):
    """Largest phi-spread of Alice's averaged conditional at fixed theta"""
    if not phi_grid or not u_grid:
        raise ValueError("empty scan grid")
    theta = Angle.of(theta)
    worst = 0.0
    for u in u_grid:
        values = [hv_models.averaged_x_conditional(model, theta, Angle.of(phi), HVValue.of(u), Outcome.PLUS)
                  for phi in phi_grid]
        worst = max(worst, max(values) - min(values))
    return AuditReport.evaluate('alice_side_phi_independence', worst, tol,
                                [{'theta': theta.radians, 'phi_points': len(phi_grid), 'u_points': len(u_grid)}])


L_BY_MEMBERSHIP = {Membership.BOTH: 1.0, Membership.ONE: 0.5, Membership.NEITHER: 0.0}


def l_case_census(model, phi, theta_grid, v_grid):
    """Count grid points per membership case, keeping one exemplar of each.

    quantity is the number of cases never exhibited; passed means all three
    L values (1, 1/2, 0) occur.
    """
    if not theta_grid or not v_grid:
        raise ValueError("empty scan grid")
    phi = Angle.of(phi)
    counts = {case: 0 for case in Membership}
    exemplars = {}
    for theta in theta_grid:
        theta = Angle.of(theta)
        sets = hv_models.response_sets(model, theta, phi)
        for v in v_grid:
            case = sets.membership(HVValue.of(v).point)
            counts[case] += 1
            if case not in exemplars:
                l_value = averaged_conditional_L(model, theta, phi, v, Outcome.PLUS)
                exemplars[case] = {'case': case.value, 'theta': theta.radians, 'phi': phi.radians,
                                   'v': HVValue.of(v).point, 'l': l_value}
    missing = sum(1 for case in Membership if counts[case] == 0)
    detail = [{'case': case.value, 'count': counts[case], 'l': L_BY_MEMBERSHIP[case]} for case in Membership]
    witnesses = [exemplars[case] for case in Membership if case in exemplars]
    return AuditReport.evaluate('l_case_census', missing, 0.0, detail, witnesses)


def merge_reports(name, reports, tolerance):
    """Combine per-slice reports: worst quantity, pooled (capped) witnesses, one summary row per slice"""
    reports = list(reports)
    if not reports:
        raise ValueError("nothing to merge")
    quantity = max(r.quantity for r in reports)
    witnesses = [w for r in reports for w in r.witnesses][:MAX_WITNESSES]
    detail = [{'slice': i, 'quantity': r.quantity, 'passed': r.passed, 'witness_count': len(r.witnesses)}
              for i, r in enumerate(reports)]
    return AuditReport.evaluate(name, quantity, tolerance, detail, witnesses)
