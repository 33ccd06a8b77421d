"""
Closed-form predictions for the correlated two-photon polarization state

    |psi> = (|d>|d> + |d_perp>|d_perp>) / sqrt(2)

measured with analyzers at theta (Alice) and phi (Bob). Every quantity
depends on the settings only through phi - theta and is evaluated directly
from cos^2 / sin^2 of that difference; no state vectors are built.

All functions are pure and accept either an Angle or a float in radians.
"""
import math

from hvaudit.models import Angle, Outcome, JointDistribution, EXACT_TOL, OUTCOMES


def _delta(theta, phi):
    return Angle.of(phi).radians - Angle.of(theta).radians


def cos2(theta, phi):
    return math.cos(_delta(theta, phi)) ** 2


def sin2(theta, phi):
    return math.sin(_delta(theta, phi)) ** 2


def joint_prob(theta, phi, x, y):
    """P[X=x, Y=y | theta, phi]"""
    if Outcome.of(x) == Outcome.of(y):
        return 0.5 * cos2(theta, phi)
    return 0.5 * sin2(theta, phi)


def joint_distribution(theta, phi):
    return JointDistribution({(x, y): joint_prob(theta, phi, x, y) for x in OUTCOMES for y in OUTCOMES})


def marginal_x(theta, phi, x):
    """P[X=x | theta, phi]; always 1/2"""
    total = sum(joint_prob(theta, phi, x, y) for y in OUTCOMES)
    assert abs(total - 0.5) <= EXACT_TOL, f"x-marginal drifted to {total}"
    return total


def marginal_y(theta, phi, y):
    """P[Y=y | theta, phi]; always 1/2"""
    total = sum(joint_prob(theta, phi, x, y) for x in OUTCOMES)
    assert abs(total - 0.5) <= EXACT_TOL, f"y-marginal drifted to {total}"
    return total


def conditional_y_given_x(theta, phi, y, x):
    """P[Y=y | theta, phi, X=x]: cos^2 on agreement, sin^2 otherwise"""
    if Outcome.of(x) == Outcome.of(y):
        return cos2(theta, phi)
    return sin2(theta, phi)


def correlation(theta, phi):
    """E[XY] = cos^2 - sin^2 = cos(2(phi - theta))"""
    return math.cos(2.0 * _delta(theta, phi))


def chsh_value(a, a2, b, b2):
    """|E(a,b) + E(a,b2) + E(a2,b) - E(a2,b2)|"""
    return abs(correlation(a, b) + correlation(a, b2) + correlation(a2, b) - correlation(a2, b2))


TSIRELSON_BOUND = 2.0 * math.sqrt(2.0)
