"""
Seeded Monte Carlo estimates with Wilson score intervals.

A master seed is split with numpy's SeedSequence into one substream per
fixed-size chunk of trials. Chunks are counted independently and summed, so
the result for a given (inputs, seed) is the same whether the chunks run
serially or on a thread pool.
"""
import logging
import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass

import numpy as np
from scipy import stats

from hvaudit import hv_models
from hvaudit.models import Angle, Outcome, HVValue, Estimate

logger = logging.getLogger(__name__)

CHUNK_TRIALS = 1 << 16
DEFAULT_CONFIDENCE = 0.99


def wilson_interval(successes, trials, confidence=DEFAULT_CONFIDENCE):
    """Wilson score interval for a binomial proportion"""
    if trials <= 0:
        raise ValueError("zero trials")
    if not 0.0 < confidence < 1.0:
        raise ValueError(f"confidence must lie in (0, 1), got {confidence}")
    if not 0 <= successes <= trials:
        raise ValueError(f"successes {successes} outside [0, {trials}]")

    z = stats.norm.ppf(0.5 + confidence / 2.0)
    p_hat = successes / trials

    denominator = 1.0 + z ** 2 / trials
    center = (p_hat + z ** 2 / (2 * trials)) / denominator
    margin = (z / denominator) * math.sqrt(p_hat * (1 - p_hat) / trials + z ** 2 / (4 * trials ** 2))

    # Clamp so the interval always brackets p_hat inside [0, 1]
    lower = min(max(0.0, float(center - margin)), p_hat)
    upper = max(min(1.0, float(center + margin)), p_hat)
    return lower, upper


def substreams(seed, n):
    """Split n trials into (generator, count) chunks derived from one master seed"""
    chunks = math.ceil(n / CHUNK_TRIALS)
    children = np.random.SeedSequence(seed).spawn(chunks)
    counts = [CHUNK_TRIALS] * (chunks - 1) + [n - CHUNK_TRIALS * (chunks - 1)]
    return [(np.random.default_rng(child), count) for child, count in zip(children, counts)]


def derive_seeds(seed, k):
    """k independent 64-bit seeds derived from a master seed"""
    return [int(s) for s in np.random.SeedSequence(seed).generate_state(k, dtype=np.uint64)]


def count_successes(seed, n, chunk_fn, workers=1):
    """Sum chunk_fn(rng, count) over the substreams of seed"""
    if n <= 0:
        raise ValueError("zero trials")
    streams = substreams(seed, n)
    if workers > 1 and len(streams) > 1:
        with ThreadPoolExecutor(max_workers=workers) as executor:
            counts = list(executor.map(lambda s: chunk_fn(*s), streams))
    else:
        counts = [chunk_fn(rng, count) for rng, count in streams]
    return int(sum(counts))


def _estimate(successes, n, confidence, seed):
    ci_low, ci_high = wilson_interval(successes, n, confidence)
    return Estimate(
        successes=successes,
        trials=n,
        p_hat=successes / n,
        ci_low=ci_low,
        ci_high=ci_high,
        confidence=confidence,
        seed=seed,
    )


def estimate_joint(model, theta, phi, x, y, n, seed, confidence=DEFAULT_CONFIDENCE, workers=1):
    """Empirical P[X=x, Y=y | theta, phi] from n simulated runs"""
    theta, phi = Angle.of(theta), Angle.of(phi)
    x, y = Outcome.of(x), Outcome.of(y)

    def chunk(rng, count):
        xs, ys = hv_models.sample_runs(model, theta, phi, rng, count)
        return int(np.count_nonzero((xs == int(x)) & (ys == int(y))))

    successes = count_successes(seed, n, chunk, workers)
    logger.debug(f"estimate_joint x={x.label} y={y.label} n={n} seed={seed}: {successes} hits")
    return _estimate(successes, n, confidence, seed)


def estimate_L(model, theta, phi, v, y, n, seed, confidence=DEFAULT_CONFIDENCE, workers=1):
    """Empirical averaged conditional: X drawn 1/2 : 1/2, v held fixed, count Y = y"""
    theta, phi = Angle.of(theta), Angle.of(phi)
    v, y = HVValue.of(v), Outcome.of(y)

    def chunk(rng, count):
        xs = np.where(rng.random(count) < 0.5, 1, -1).astype(np.int8)
        ys = hv_models.eval_y_many(model, theta, phi, np.full(count, v.point), xs)
        return int(np.count_nonzero(ys == int(y)))

    successes = count_successes(seed, n, chunk, workers)
    return _estimate(successes, n, confidence, seed)


def estimate_agreement(model, theta, phi, n, seed, confidence=DEFAULT_CONFIDENCE, workers=1):
    """Empirical P[X = Y | theta, phi]"""
    theta, phi = Angle.of(theta), Angle.of(phi)

    def chunk(rng, count):
        xs, ys = hv_models.sample_runs(model, theta, phi, rng, count)
        return int(np.count_nonzero(xs == ys))

    return _estimate(count_successes(seed, n, chunk, workers), n, confidence, seed)


@dataclass(frozen=True)
class CorrelationEstimate:
    """E[XY] = 2 P[X=Y] - 1 with the agreement interval mapped alongside"""
    agreement: Estimate
    value: float
    ci_low: float
    ci_high: float

    def to_dict(self):
        return {
            'value': self.value,
            'ci_low': self.ci_low,
            'ci_high': self.ci_high,
            'agreement': self.agreement.to_dict(),
        }


def estimate_correlation(model, theta, phi, n, seed, confidence=DEFAULT_CONFIDENCE, workers=1):
    agreement = estimate_agreement(model, theta, phi, n, seed, confidence, workers)
    return CorrelationEstimate(
        agreement=agreement,
        value=2.0 * agreement.p_hat - 1.0,
        ci_low=2.0 * agreement.ci_low - 1.0,
        ci_high=2.0 * agreement.ci_high - 1.0,
    )


@dataclass(frozen=True)
class CHSHEstimate:
    value: float
    ci_low: float
    ci_high: float
    terms: tuple

    def covers(self, target):
        return self.ci_low <= target <= self.ci_high

    def to_dict(self):
        return {
            'value': self.value,
            'ci_low': self.ci_low,
            'ci_high': self.ci_high,
            'terms': [term.to_dict() for term in self.terms],
        }


def estimate_chsh(model, a, a2, b, b2, n, seed, confidence=DEFAULT_CONFIDENCE, workers=1):
    """CHSH combination of four independently seeded correlation estimates.

    The interval is the interval-arithmetic combination of the four Wilson
    intervals; the returned value and bounds are for the signed sum
    E(a,b) + E(a,b2) + E(a2,b) - E(a2,b2), flipped when that sum is negative.
    """
    settings = [(a, b), (a, b2), (a2, b), (a2, b2)]
    seeds = derive_seeds(seed, len(settings))
    terms = tuple(
        estimate_correlation(model, theta, phi, n, term_seed, confidence, workers)
        for (theta, phi), term_seed in zip(settings, seeds)
    )
    e1, e2, e3, e4 = terms
    value = e1.value + e2.value + e3.value - e4.value
    low = e1.ci_low + e2.ci_low + e3.ci_low - e4.ci_high
    high = e1.ci_high + e2.ci_high + e3.ci_high - e4.ci_low
    if value < 0:
        value, low, high = -value, -high, -low
    return CHSHEstimate(value=value, ci_low=low, ci_high=high, terms=terms)
