"""
Finite-dimensional check of the operator argument against observable hidden
variables.

If one Hermitian S produced both position and momentum as Z = c(S) and
P = d(S), then [Z, P] = [c(S), d(S)] = 0, because any two functions of one
Hermitian operator commute. Truncated position and momentum do not commute,
so no such S exists.

Here both premises are shown numerically on matrices. The truncation is not
faithful at the top level: for n harmonic-oscillator levels
[Z, P] / i = diag(1, ..., 1, 1 - n) instead of the identity, and the report
shows that last entry instead of hiding it. Nothing is claimed about
unbounded operators on a continuum.
"""
import logging
from dataclasses import dataclass, field

import numpy as np
from numpy.polynomial import polynomial
from scipy import linalg

logger = logging.getLogger(__name__)

HERMITIAN_TOL = 1e-12
PROFILE_TOL = 1e-10
LEMMA_TOL = 1e-8


def _hermitian_gap(entries):
    return float(np.max(np.abs(entries - entries.conj().T))) if entries.size else 0.0


@dataclass(frozen=True, eq=False)
class HermitianMatrix:
    entries: np.ndarray

    def __post_init__(self):
        entries = np.array(self.entries, dtype=complex)
        if entries.ndim != 2 or entries.shape[0] != entries.shape[1] or entries.shape[0] < 1:
            raise ValueError(f"expected a non-empty square matrix, got shape {entries.shape}")
        scale = max(1.0, float(np.max(np.abs(entries))))
        if _hermitian_gap(entries) > HERMITIAN_TOL * scale:
            raise ValueError("matrix not Hermitian")
        entries.setflags(write=False)
        object.__setattr__(self, 'entries', entries)

    @property
    def dim(self):
        return self.entries.shape[0]

    def eigvalsh(self):
        return linalg.eigvalsh(self.entries)

    def __array__(self, dtype=None, copy=None):
        return self.entries if dtype is None else self.entries.astype(dtype)


@dataclass(frozen=True)
class ScalarFunction:
    """A real function applied to eigenvalues"""
    name: str
    fn: object = field(compare=False, repr=False)

    def __call__(self, values):
        return np.asarray(self.fn(np.asarray(values, dtype=float)), dtype=float)

    @classmethod
    def polynomial(cls, coefficients):
        """sum_k coefficients[k] x**k"""
        coefficients = [float(c) for c in coefficients]
        return cls(f"poly{coefficients}", lambda x: polynomial.polyval(x, coefficients))

    @classmethod
    def named(cls, name):
        try:
            return cls(name, NAMED_FUNCTIONS[name])
        except KeyError:
            raise ValueError(f"Unknown function {name!r}. Valid names: {sorted(NAMED_FUNCTIONS)}")


NAMED_FUNCTIONS = {
    'identity': lambda x: x,
    'square': lambda x: x ** 2,
    'cube': lambda x: x ** 3,
    'sqrt': np.sqrt,
    'exp': np.exp,
    'sin': np.sin,
    'cos': np.cos,
    'tanh': np.tanh,
}

# Function pairs used by the lemma demonstration
DEFAULT_FUNCTION_PAIRS = [
    (ScalarFunction.named('square'), ScalarFunction.named('cube')),
    (ScalarFunction.named('exp'), ScalarFunction.named('sin')),
    (ScalarFunction.named('identity'), ScalarFunction.named('cos')),
    (ScalarFunction.polynomial([1, -2, 0, 3]), ScalarFunction.polynomial([0, 1, 0.5, 0, -0.25])),
    (ScalarFunction.named('tanh'), ScalarFunction.named('exp')),
    (ScalarFunction.polynomial([0, 0, 0, 0, 1]), ScalarFunction.named('sin')),
]


def as_matrix(m):
    return m.entries if isinstance(m, HermitianMatrix) else np.asarray(m, dtype=complex)


def random_hermitian(dim, rng):
    """Random Hermitian matrix with spectrum of order one"""
    g = rng.standard_normal((dim, dim)) + 1j * rng.standard_normal((dim, dim))
    return HermitianMatrix((g + g.conj().T) / (2.0 * np.sqrt(dim)))


def apply_function(s, f):
    """f(S) = V f(Lambda) V^dagger"""
    if not isinstance(s, HermitianMatrix):
        s = HermitianMatrix(s)
    eigenvalues, vectors = linalg.eigh(s.entries)
    mapped = f(eigenvalues)
    if not np.all(np.isfinite(mapped)):
        raise ValueError(f"function {f.name} is not defined on the spectrum")
    result = (vectors * mapped) @ vectors.conj().T
    logger.debug(f"apply_function {f.name} dim={s.dim} hermitian gap {_hermitian_gap(result):.3e}")
    return HermitianMatrix(result)


def commutator(a, b):
    """AB - BA"""
    a, b = as_matrix(a), as_matrix(b)
    if a.shape != b.shape:
        raise ValueError(f"dimension mismatch: {a.shape} vs {b.shape}")
    return a @ b - b @ a


def spectral_scale(s, f):
    """Largest |f| on the spectrum of s, floored at 1"""
    return max(1.0, float(np.max(np.abs(f(s.eigvalsh())))))


def lemma_bound(s, c, d):
    return LEMMA_TOL * s.dim * spectral_scale(s, c) * spectral_scale(s, d)


def lemma_check(s, c, d):
    """Frobenius norm of [c(S), d(S)]"""
    if not isinstance(s, HermitianMatrix):
        s = HermitianMatrix(s)
    return float(linalg.norm(commutator(apply_function(s, c), apply_function(s, d)), 'fro'))


def annihilation_operator(n):
    return np.diag(np.sqrt(np.arange(1, n, dtype=float)), 1)


def truncated_position_momentum(n):
    """Z = (a + a^dagger)/sqrt(2), P = i(a^dagger - a)/sqrt(2) on n oscillator levels"""
    if n < 2:
        raise ValueError("dimension must be at least 2")
    a = annihilation_operator(n)
    a_dag = a.T
    z = (a + a_dag) / np.sqrt(2.0)
    p = 1j * (a_dag - a) / np.sqrt(2.0)
    return HermitianMatrix(z), HermitianMatrix(p)


@dataclass(frozen=True)
class CommutatorProfile:
    dim: int
    diagonal: list
    max_off_diagonal: float
    trace: float
    frobenius_norm: float

    def to_dict(self):
        return {
            'dim': self.dim,
            'diagonal': self.diagonal,
            'max_off_diagonal': self.max_off_diagonal,
            'trace': self.trace,
            'frobenius_norm': self.frobenius_norm,
        }


def zp_commutator_profile(n):
    """Diagonal of [Z, P] / i for the n-level truncation"""
    z, p = truncated_position_momentum(n)
    c = commutator(z, p) / 1j
    diagonal = np.real(np.diag(c))
    off = c - np.diag(np.diag(c))
    profile = CommutatorProfile(
        dim=n,
        diagonal=[float(value) for value in diagonal],
        max_off_diagonal=float(np.max(np.abs(off))) if n > 1 else 0.0,
        trace=float(np.real(np.trace(c))),
        frobenius_norm=float(linalg.norm(c, 'fro')),
    )
    logger.info(f"[Z,P]/i at n={n}: last diagonal entry {profile.diagonal[-1]}, norm {profile.frobenius_norm:.6f}")
    return profile


@dataclass(frozen=True)
class LemmaTrial:
    dim: int
    c: str
    d: str
    norm: float
    bound: float

    @property
    def passed(self):
        return self.norm <= self.bound

    def to_dict(self):
        return {'dim': self.dim, 'c': self.c, 'd': self.d, 'norm': self.norm,
                'bound': self.bound, 'passed': self.passed}


def lemma_sweep(count, seed, min_dim=2, max_dim=32, pairs=None):
    """lemma_check over count seeded random Hermitian matrices and every function pair"""
    rng = np.random.default_rng(seed)
    pairs = pairs or DEFAULT_FUNCTION_PAIRS
    trials = []
    for _ in range(count):
        dim = int(rng.integers(min_dim, max_dim + 1))
        s = random_hermitian(dim, rng)
        for c, d in pairs:
            trials.append(LemmaTrial(dim, c.name, d.name, lemma_check(s, c, d), lemma_bound(s, c, d)))
    logger.info(f"lemma sweep: {len(trials)} trials, worst ratio "
                f"{max(t.norm / t.bound for t in trials):.3e}")
    return trials
