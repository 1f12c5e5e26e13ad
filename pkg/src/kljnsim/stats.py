"""Closed-form attack statistics and confidence-interval helpers."""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np


def chi2_cdf_1(x: float) -> float:
    """CDF of the square of a standard normal (chi-squared, one degree of freedom).

    Equals erf(sqrt(x/2)); monotone nondecreasing on x >= 0.
    """
    if x < 0:
        raise ValueError("chi2_cdf_1 domain is x >= 0")
    return math.erf(math.sqrt(0.5 * x))


@dataclass(frozen=True)
class AttackProbabilities:
    """Outcome probabilities of the single-measurement threshold comparison."""

    p_success: float
    p_error: float
    p_no_answer: float
    expected_measurements: float
    conditional_fidelity: float


def analytic_attack_probabilities(ratio: float) -> AttackProbabilities:
    """Per-trial probabilities when the two mean squares differ by ``ratio``.

    The threshold sits at the larger normalized mean square.  One trial
    succeeds when the strong end alone exceeds it, errs when the weak end
    alone does, and gives no answer when both land on the same side.
    ``expected_measurements`` is the mean number of trials until some
    answer arrives; ``conditional_fidelity`` is the chance that answer is
    right.
    """
    if ratio < 1:
        raise ValueError("ratio must be >= 1 (orient the ratio before calling)")
    p_weak_below = chi2_cdf_1(ratio)  # weak end has unit mean square
    p_strong_below = chi2_cdf_1(1.0)  # threshold sits at the strong end's mean square
    p_success = p_weak_below * (1.0 - p_strong_below)
    p_error = (1.0 - p_weak_below) * p_strong_below
    p_no_answer = p_weak_below * p_strong_below + (1.0 - p_weak_below) * (1.0 - p_strong_below)
    p_answer = p_success + p_error
    return AttackProbabilities(
        p_success=p_success,
        p_error=p_error,
        p_no_answer=p_no_answer,
        expected_measurements=1.0 / p_answer if p_answer > 0 else math.inf,
        conditional_fidelity=p_success / p_answer if p_answer > 0 else math.nan,
    )


def wilson_ci(successes: int, trials: int, z: float) -> tuple[float, float]:
    """Wilson score interval for a binomial rate; always contained in [0, 1]."""
    if trials < 1:
        raise ValueError("trials must be >= 1")
    if not 0 <= successes <= trials:
        raise ValueError("successes must lie in [0, trials]")
    p = successes / trials
    z2 = z * z
    denom = 1.0 + z2 / trials
    center = p + z2 / (2.0 * trials)
    radius = z * math.sqrt(p * (1.0 - p) / trials + z2 / (4.0 * trials * trials))
    # the score interval pins its endpoints exactly at the boundaries
    lo = 0.0 if successes == 0 else max(0.0, (center - radius) / denom)
    hi = 1.0 if successes == trials else min(1.0, (center + radius) / denom)
    return lo, hi


@dataclass(frozen=True)
class Moments:
    mean: float
    mean_square: float
    variance: float


def empirical_moments(samples) -> Moments:
    """Sample mean, mean square and (population) variance of a sequence.

    ``mean_square`` is derived as ``variance + mean**2`` so the identity
    holds exactly in floating point.
    """
    arr = np.asarray(samples, dtype=float)
    if arr.size == 0:
        raise ValueError("empirical_moments needs at least one sample")
    mean = float(arr.mean())
    variance = float(np.mean((arr - mean) ** 2))
    return Moments(mean=mean, mean_square=variance + mean * mean, variance=variance)
