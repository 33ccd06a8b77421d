import math
from dataclasses import dataclass, field
from enum import Enum, IntEnum

# Exact-identity tolerance for closed-form probabilities
EXACT_TOL = 1e-12


class Outcome(IntEnum):
    """Binary polarization result: +1 along the analyzer axis, -1 perpendicular"""
    PLUS = 1
    MINUS = -1

    @classmethod
    def of(cls, value):
        if isinstance(value, Outcome):
            return value
        if isinstance(value, str):
            text = value.strip()
            if text in ('+', '+1', '1', 'plus'):
                return cls.PLUS
            if text in ('-', '-1', 'minus'):
                return cls.MINUS
            raise ValueError(f"Invalid outcome: {value!r}")
        try:
            return cls(int(value))
        except ValueError:
            raise ValueError(f"Invalid outcome: {value!r}")

    @property
    def label(self):
        return '+1' if self is Outcome.PLUS else '-1'


OUTCOMES = (Outcome.PLUS, Outcome.MINUS)


class Variant(Enum):
    DISJOINT = "disjoint"
    MAXIMAL_OVERLAP = "overlap"

    @classmethod
    def of(cls, value):
        if isinstance(value, Variant):
            return value
        text = str(value).strip().lower()
        for variant in cls:
            if text in (variant.value, variant.name.lower()):
                return variant
        valid = [v.value for v in cls]
        raise ValueError(f"Invalid variant {value!r}. Valid variants: {valid}")


class Membership(Enum):
    """Where a hidden-variable value sits relative to the two response sets"""
    BOTH = "both"
    ONE = "one"
    NEITHER = "neither"


@dataclass(frozen=True)
class Angle:
    """Analyzer setting in radians, stored canonically in [0, pi)"""
    radians: float

    def __post_init__(self):
        value = float(self.radians)
        if not math.isfinite(value):
            raise ValueError(f"Angle must be finite, got {self.radians!r}")
        canonical = value % math.pi
        if canonical >= math.pi:
            canonical = 0.0
        object.__setattr__(self, 'radians', canonical)

    @classmethod
    def of(cls, value):
        return value if isinstance(value, Angle) else cls(value)

    @classmethod
    def from_degrees(cls, degrees):
        return cls(math.radians(float(degrees)))

    def __float__(self):
        return self.radians

    def to_dict(self):
        return {'radians': self.radians, 'degrees': math.degrees(self.radians)}


@dataclass(frozen=True)
class HVValue:
    """A local hidden-variable draw under the uniform measure on [0, 1)"""
    point: float

    def __post_init__(self):
        value = float(self.point)
        if not 0.0 <= value < 1.0:
            raise ValueError(f"Hidden-variable value must lie in [0, 1), got {self.point!r}")
        object.__setattr__(self, 'point', value)

    @classmethod
    def of(cls, value):
        return value if isinstance(value, HVValue) else cls(value)

    def __float__(self):
        return self.point


@dataclass(frozen=True)
class JointDistribution:
    """Joint law of (X, Y) at fixed settings"""
    p: dict

    def __post_init__(self):
        if any(prob < -EXACT_TOL for prob in self.p.values()):
            raise ValueError("Joint distribution has a negative entry")
        total = sum(self.p.values())
        if abs(total - 1.0) > EXACT_TOL:
            raise ValueError(f"Joint distribution sums to {total}, not 1")

    def __getitem__(self, key):
        x, y = key
        return self.p[(Outcome.of(x), Outcome.of(y))]

    def to_dict(self):
        return {f"{x.label},{y.label}": prob for (x, y), prob in self.p.items()}


@dataclass(frozen=True)
class AuditReport:
    name: str
    quantity: float
    tolerance: float
    passed: bool
    detail: list = field(default_factory=list)
    witnesses: list = field(default_factory=list)

    @classmethod
    def evaluate(cls, name, quantity, tolerance, detail=None, witnesses=None):
        quantity = float(quantity)
        return cls(
            name=name,
            quantity=quantity,
            tolerance=float(tolerance),
            passed=quantity <= tolerance,
            detail=list(detail or []),
            witnesses=list(witnesses or []),
        )

    def to_dict(self):
        return {
            'name': self.name,
            'quantity': self.quantity,
            'tolerance': self.tolerance,
            'passed': self.passed,
            'witnesses': self.witnesses,
            'detail': self.detail,
        }


@dataclass(frozen=True)
class LScanReport:
    phi: Angle
    v: HVValue
    y: Outcome
    grid: list
    l_values: list
    spread: float

    def to_dict(self):
        return {
            'phi': self.phi.radians,
            'v': self.v.point,
            'y': int(self.y),
            'grid': [theta.radians for theta in self.grid],
            'l_values': list(self.l_values),
            'spread': self.spread,
        }


@dataclass(frozen=True)
class Estimate:
    """Monte Carlo proportion with its Wilson interval"""
    successes: int
    trials: int
    p_hat: float
    ci_low: float
    ci_high: float
    confidence: float
    seed: int

    def __post_init__(self):
        if not 0.0 <= self.ci_low <= self.p_hat <= self.ci_high <= 1.0:
            raise ValueError(
                f"Inconsistent estimate bounds: {self.ci_low} <= {self.p_hat} <= {self.ci_high}"
            )

    def covers(self, value):
        return self.ci_low <= value <= self.ci_high

    def to_dict(self):
        return {
            'successes': self.successes,
            'trials': self.trials,
            'p_hat': self.p_hat,
            'ci_low': self.ci_low,
            'ci_high': self.ci_high,
            'confidence': self.confidence,
            'seed': self.seed,
        }
