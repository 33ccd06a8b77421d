"""
Hidden-variable models of the polarization experiment.

Two layers live here:

* ``CRModelInterface`` - the generic combined-model form in which Alice's
  and Bob's outcomes are conditioned on their own local hidden variable plus
  a nonlocal parameter N with a known law P_N. It is an interface only; no
  model with an independent nonlocal hidden variable is constructed.

* ``CounterexampleModel`` - the concrete family X = f(theta, U),
  Y = g(theta, phi, V, X), where Bob's response uses Alice's setting and
  outcome (the nonlocal parameter is X itself, distributed 1/2 : 1/2).
  U and V are uniform on [0, 1), so every probability is an exact interval
  measure.

Response sets for fixed (theta, phi):
    v1  = {v : g(theta, phi, v, +1) = +1}   measure cos^2(phi - theta)
    v2  = {v : g(theta, phi, v, -1) = +1}   measure sin^2(phi - theta)
    cap = v1 & v2

The DISJOINT variant partitions [0, 1) at cos^2; the MAXIMAL_OVERLAP variant
anchors both sets at 0 so the overlap is the shorter of the two.
"""
import abc
import logging
from dataclasses import dataclass, field

import numpy as np

from hvaudit import quantum_oracle
from hvaudit.intervals import IntervalSet
from hvaudit.models import Angle, Outcome, HVValue, Variant, Membership, OUTCOMES

logger = logging.getLogger(__name__)


# ---------------------------------------------------------------------------
# Alice's rule f(theta, U)
# ---------------------------------------------------------------------------

class XRule(abc.ABC):
    """Deterministic rule for Alice's outcome; its +1 set must have measure 1/2 for every theta"""
    name = 'abstract'

    @abc.abstractmethod
    def plus_set(self, theta):
        """Set of u values giving X = +1 at setting theta"""

    def outcome(self, theta, u):
        return Outcome.PLUS if self.plus_set(theta).contains(u) else Outcome.MINUS

    def outcomes(self, theta, u):
        """Vectorised outcome for an array of u draws"""
        return np.where(self.plus_set(theta).contains_many(u), 1, -1).astype(np.int8)


@dataclass(frozen=True)
class ThresholdRule(XRule):
    """X = +1 iff u < 1/2, for every theta"""
    name: str = field(default='threshold', init=False)

    def plus_set(self, theta):
        return IntervalSet.span(0.0, 0.5)


@dataclass(frozen=True)
class RotatingRule(XRule):
    """X = +1 on the half-circle [t, t + 1/2) mod 1 with t = theta / pi"""
    name: str = field(default='rotating', init=False)

    def plus_set(self, theta):
        start = Angle.of(theta).radians / np.pi
        end = start + 0.5
        if end <= 1.0:
            return IntervalSet.span(start, end)
        return IntervalSet(((start, 1.0), (0.0, end - 1.0)))


X_RULES = {
    'threshold': ThresholdRule,
    'rotating': RotatingRule,
}


def x_rule_by_name(name):
    try:
        return X_RULES[str(name).strip().lower()]()
    except KeyError:
        raise ValueError(f"Unknown x rule {name!r}. Valid rules: {sorted(X_RULES)}")


# ---------------------------------------------------------------------------
# Generic combined-model interface
# ---------------------------------------------------------------------------

class CRModelInterface(abc.ABC):
    """Outcome laws conditioned on a local hidden variable and a nonlocal parameter n"""

    @abc.abstractmethod
    def nonlocal_distribution(self):
        """Mapping n -> P_N(n)"""

    @abc.abstractmethod
    def prob_x(self, theta, phi, u, n, x):
        """P[X=x | theta, phi, U=u, N=n]"""

    @abc.abstractmethod
    def prob_y(self, theta, phi, v, n, y):
        """P[Y=y | theta, phi, V=v, N=n]"""


def averaged_x_conditional(model, theta, phi, u, x):
    """Sum over n of P_N(n) P[X=x | theta, phi, U=u, N=n]"""
    return sum(p * model.prob_x(theta, phi, u, n, x) for n, p in model.nonlocal_distribution().items())


def averaged_y_conditional(model, theta, phi, v, y):
    """Sum over n of P_N(n) P[Y=y | theta, phi, V=v, N=n]"""
    return sum(p * model.prob_y(theta, phi, v, n, y) for n, p in model.nonlocal_distribution().items())


# ---------------------------------------------------------------------------
# Counter-example family
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class ResponseSets:
    v1: IntervalSet
    v2: IntervalSet
    v_cap: IntervalSet

    @property
    def covered(self):
        return self.v1 | self.v2

    @property
    def neither(self):
        return self.covered.complement()

    def membership(self, v):
        in_v1, in_v2 = self.v1.contains(v), self.v2.contains(v)
        if in_v1 and in_v2:
            return Membership.BOTH
        if in_v1 or in_v2:
            return Membership.ONE
        return Membership.NEITHER

    def for_outcome(self, x):
        """Bob's +1 set when Alice obtained x"""
        return self.v1 if Outcome.of(x) is Outcome.PLUS else self.v2

    def to_dict(self):
        return {
            'v1': self.v1.to_list(),
            'v2': self.v2.to_list(),
            'v_cap': self.v_cap.to_list(),
            'measure_v1': self.v1.measure(),
            'measure_v2': self.v2.measure(),
            'measure_v_cap': self.v_cap.measure(),
        }


@dataclass(frozen=True)
class CounterexampleModel(CRModelInterface):
    variant: Variant
    x_rule: XRule = field(default_factory=ThresholdRule)

    @property
    def y_rule(self):
        return f"response sets ({self.variant.value})"

    def nonlocal_distribution(self):
        # N = X, with P[X = +1] = P[X = -1] = 1/2
        return {Outcome.PLUS: 0.5, Outcome.MINUS: 0.5}

    def prob_x(self, theta, phi, u, n, x):
        return 1.0 if eval_x(self, theta, u) == Outcome.of(x) else 0.0

    def prob_y(self, theta, phi, v, n, y):
        return 1.0 if eval_y(self, theta, phi, v, n) == Outcome.of(y) else 0.0

    def describe(self):
        return {'variant': self.variant.value, 'x_rule': self.x_rule.name, 'y_rule': self.y_rule}


def make_disjoint_model(x_rule=None):
    return CounterexampleModel(Variant.DISJOINT, x_rule or ThresholdRule())


def make_overlap_model(x_rule=None):
    return CounterexampleModel(Variant.MAXIMAL_OVERLAP, x_rule or ThresholdRule())


def make_model(variant, x_rule=None):
    if isinstance(x_rule, str):
        x_rule = x_rule_by_name(x_rule)
    return CounterexampleModel(Variant.of(variant), x_rule or ThresholdRule())


def eval_x(model, theta, u):
    """X = f(theta, U); never reads phi or v"""
    return model.x_rule.outcome(Angle.of(theta), HVValue.of(u).point)


# cos^2 of a right angle evaluates to about 4e-33, not 0
SNAP_TOL = 1e-15


def _snap(p):
    if p <= SNAP_TOL:
        return 0.0
    if p >= 1.0 - SNAP_TOL:
        return 1.0
    return p


def response_sets(model, theta, phi):
    c2 = _snap(quantum_oracle.cos2(theta, phi))
    s2 = _snap(quantum_oracle.sin2(theta, phi))
    v1 = IntervalSet.span(0.0, c2)
    if model.variant is Variant.DISJOINT:
        v2 = IntervalSet.span(c2, 1.0)
    else:
        v2 = IntervalSet.span(0.0, s2)
    return ResponseSets(v1=v1, v2=v2, v_cap=v1 & v2)


def eval_y(model, theta, phi, v, x):
    """Y = g(theta, phi, V, X): +1 iff v is in Bob's +1 set for Alice's outcome x"""
    sets = response_sets(model, theta, phi)
    return Outcome.PLUS if sets.for_outcome(x).contains(HVValue.of(v).point) else Outcome.MINUS


def eval_y_many(model, theta, phi, v, x):
    """Vectorised eval_y for arrays of v draws and Alice outcomes"""
    sets = response_sets(model, theta, phi)
    x = np.asarray(x)
    plus = np.where(x == 1, sets.v1.contains_many(v), sets.v2.contains_many(v))
    return np.where(plus, 1, -1).astype(np.int8)


def response_set(model, theta, phi, x, y):
    """Exact set {v : g(theta, phi, v, x) = y}"""
    plus = response_sets(model, theta, phi).for_outcome(x)
    return plus if Outcome.of(y) is Outcome.PLUS else plus.complement()


def induced_conditional(model, theta, phi, y, x):
    """P[Y=y | theta, phi, X=x] induced by uniform V, as an exact interval measure"""
    return response_set(model, theta, phi, x, y).measure()


def classify_membership(model, theta, phi, v):
    return response_sets(model, theta, phi).membership(HVValue.of(v).point)


def sample_run(model, theta, phi, rng):
    """One experimental run: draw u then v uniformly, return (X, Y)"""
    u = rng.random()
    v = rng.random()
    x = eval_x(model, theta, u)
    return x, eval_y(model, theta, phi, v, x)


def sample_runs(model, theta, phi, rng, n):
    """n runs at once; arrays of X and Y in {+1, -1}"""
    u = rng.random(n)
    v = rng.random(n)
    x = model.x_rule.outcomes(Angle.of(theta), u)
    return x, eval_y_many(model, theta, phi, v, x)


__all__ = [
    'XRule', 'ThresholdRule', 'RotatingRule', 'x_rule_by_name',
    'CRModelInterface', 'averaged_x_conditional', 'averaged_y_conditional',
    'ResponseSets', 'CounterexampleModel',
    'make_disjoint_model', 'make_overlap_model', 'make_model',
    'eval_x', 'response_sets', 'eval_y', 'eval_y_many', 'response_set',
    'induced_conditional', 'classify_membership', 'sample_run', 'sample_runs',
    'OUTCOMES',
]
