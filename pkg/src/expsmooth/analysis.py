"""Monte-Carlo and numerical-precision checks of the smoothers.

Random streams come from numpy's PCG64 generator (128-bit state) seeded with
the caller's integer seed. Normal draws use ``Generator.standard_normal``
(numpy's ziggurat transform of uniform draws), scaled as ``mu + sigma * z``.
"""
from __future__ import annotations

import math
from dataclasses import asdict, dataclass, field

import numpy as np

from . import kernels
from .calibration import variance_ratio
from .core import Method, decay_factor, oracle_series, smooth_series
from .errors import InvalidArgumentError

__all__ = [
    "GAP_LAWS",
    "SimulationConfig",
    "MomentReport",
    "StressReport",
    "make_rng",
    "simulate_constant_rate",
    "stress_extreme_alpha",
    "variable_rate_divergence",
    "draw_gaps",
    "max_relative_error",
]

GAP_LAWS = ("constant", "exponential", "uniform", "bursty")

# above this length the direct-sum oracle (quadratic) gives way to the
# double-double recursion
DIRECT_ORACLE_MAX_STEPS = 5000


def make_rng(seed):
    seed = int(seed)
    if not 0 <= seed < 2**64:
        raise InvalidArgumentError(f"seed must be an unsigned 64-bit integer, got {seed}")
    return np.random.Generator(np.random.PCG64(seed))


@dataclass(frozen=True)
class SimulationConfig:
    steps: int
    tau: float
    seed: int
    burn_in: int = 1000
    mu: float = 0.0
    sigma: float = 1.0
    gap: float = 1.0
    method: Method = Method.V1

    def __post_init__(self):
        object.__setattr__(self, "method", Method(self.method))
        if self.steps < 1:
            raise InvalidArgumentError("steps must be positive")
        if not 0 <= self.burn_in < self.steps:
            raise InvalidArgumentError("burn_in must satisfy 0 <= burn_in < steps")
        if not (math.isfinite(self.sigma) and self.sigma >= 0):
            raise InvalidArgumentError("sigma must be finite and non-negative")
        if not math.isfinite(self.mu):
            raise InvalidArgumentError("mu must be finite")
        if not (math.isfinite(self.gap) and self.gap > 0):
            raise InvalidArgumentError("gap must be positive")
        if not (math.isfinite(self.tau) and self.tau > 0):
            raise InvalidArgumentError("tau must be positive")
        make_rng(self.seed)

    @property
    def alpha(self):
        return decay_factor(self.gap, self.tau)


@dataclass(frozen=True)
class MomentReport:
    empirical_mean: float
    empirical_variance: float
    predicted_mean: float
    predicted_variance: float
    alpha: float
    samples_used: int

    def as_dict(self):
        return asdict(self)


@dataclass(frozen=True)
class StressReport:
    """Worst-case deviations of the three recursions from a reference.

    Relative errors are scaled by the weighted mean of ``|x|`` at each step,
    the magnitude a weighted average of those samples can carry.
    """

    alpha: float
    steps: int
    max_rel_error_v1: float
    max_rel_error_v2: float
    max_rel_error_v2c: float
    max_tilde_w: float
    min_bar_w: float
    max_bar_w: float
    # constant-rate runs only: V1 weight against (1 - alpha**k)/(1 - alpha)
    max_rel_error_v1_weight: float | None = None
    gap_law: str = "constant"
    oracle: str = field(default="reference")

    def as_dict(self):
        return asdict(self)


def max_relative_error(values, reference, scale):
    values = np.asarray(values, dtype=float)
    reference = np.asarray(reference, dtype=float)
    scale = np.asarray(scale, dtype=float)
    err = np.abs(values - reference)
    # all-zero input: any nonzero output is an infinite relative error
    denom = np.where(scale > 0, scale, 1.0)
    rel = np.where(scale > 0, err / denom, np.where(err > 0, np.inf, 0.0))
    return float(np.max(rel)) if rel.size else 0.0


def _fold(method, alphas, x, alpha1):
    if method is Method.V1:
        return kernels.fold_v1(alphas, x)
    if method is Method.V2:
        return kernels.fold_v2(alphas, x, alpha1)
    return kernels.fold_v2c(alphas, x, alpha1)


def simulate_constant_rate(config: SimulationConfig) -> MomentReport:
    """Smooth an i.i.d. normal stream at constant rate and compare moments."""
    rng = make_rng(config.seed)
    x = config.mu + config.sigma * rng.standard_normal(config.steps)
    alpha = config.alpha
    alphas = np.full(config.steps, alpha)
    xhat, _ = _fold(config.method, alphas, x, alpha)
    kept = xhat[config.burn_in:]
    predicted = variance_ratio(alpha) * config.sigma**2 if alpha < 1.0 else 0.0
    return MomentReport(
        empirical_mean=float(np.mean(kept)),
        empirical_variance=float(np.var(kept)),
        predicted_mean=config.mu,
        predicted_variance=predicted,
        alpha=alpha,
        samples_used=int(kept.size),
    )


def stress_extreme_alpha(alpha, steps, seed) -> StressReport:
    """Run all three recursions at a fixed decay ``alpha`` per step.

    The reference is the unnormalized recursion carried in double-double
    arithmetic with the same ``alpha``.
    """
    alpha = float(alpha)
    if not 0.0 < alpha < 1.0:
        raise InvalidArgumentError(f"alpha must lie in (0, 1), got {alpha!r}")
    steps = int(steps)
    if steps < 1:
        raise InvalidArgumentError("steps must be positive")
    x = make_rng(seed).standard_normal(steps)
    alphas = np.full(steps, alpha)
    ref, _ = kernels.fold_reference(alphas, x)
    scale, _ = kernels.fold_reference(alphas, np.abs(x))
    v1, w1 = kernels.fold_v1(alphas, x)
    v2, w2 = kernels.fold_v2(alphas, x, alpha)
    v2c, _ = kernels.fold_v2c(alphas, x, alpha)
    k = np.arange(1, steps + 1)
    closed = -np.expm1(k * math.log(alpha)) / (1.0 - alpha)
    return StressReport(
        alpha=alpha,
        steps=steps,
        max_rel_error_v1=max_relative_error(v1, ref, scale),
        max_rel_error_v2=max_relative_error(v2, ref, scale),
        max_rel_error_v2c=max_relative_error(v2c, ref, scale),
        max_tilde_w=float(np.max(w1)),
        min_bar_w=float(np.min(w2)),
        max_bar_w=float(np.max(w2)),
        max_rel_error_v1_weight=float(np.max(np.abs(w1 - closed) / closed)),
        gap_law="constant",
        oracle="reference",
    )


def draw_gaps(gap_law, steps, rng):
    """Draw ``steps - 1`` positive gaps with mean 1 from ``gap_law``.

    ``bursty`` mixes short gaps (mean 0.1, probability 0.8) with long pauses
    (mean 4.6). Draws are floored at 1e-9 so timestamps stay strictly
    increasing.
    """
    n = max(int(steps) - 1, 0)
    if gap_law == "constant":
        gaps = np.ones(n)
    elif gap_law == "exponential":
        gaps = rng.exponential(1.0, n)
    elif gap_law == "uniform":
        gaps = rng.uniform(0.5, 1.5, n)
    elif gap_law == "bursty":
        short = rng.random(n) < 0.8
        gaps = np.where(short, rng.exponential(0.1, n), rng.exponential(4.6, n))
    else:
        raise InvalidArgumentError(f"unknown gap law {gap_law!r}; expected one of {GAP_LAWS}")
    return np.maximum(gaps, 1e-9)


def variable_rate_divergence(gap_law, steps, tau, seed, oracle=None) -> StressReport:
    """Measure how far each recursion drifts from the oracle on random gaps.

    ``oracle`` is ``"direct"`` (quadratic direct summation) or
    ``"reference"`` (double-double recursion); by default direct summation is
    used up to ``DIRECT_ORACLE_MAX_STEPS`` observations.
    """
    steps = int(steps)
    if steps < 1:
        raise InvalidArgumentError("steps must be positive")
    tau = float(tau)
    if not (math.isfinite(tau) and tau > 0):
        raise InvalidArgumentError("tau must be positive")
    if oracle is None:
        oracle = "direct" if steps <= DIRECT_ORACLE_MAX_STEPS else "reference"
    rng = make_rng(seed)
    gaps = draw_gaps(gap_law, steps, rng)
    t = np.concatenate([[0.0], np.cumsum(gaps)])
    x = rng.standard_normal(steps)
    if oracle == "direct":
        ref, scale = oracle_series(t, x, tau)
    elif oracle == "reference":
        alphas = np.ones(steps)
        alphas[1:] = np.exp(-np.diff(t) / tau)
        ref, _ = kernels.fold_reference(alphas, x)
        scale, _ = kernels.fold_reference(alphas, np.abs(x))
    else:
        raise InvalidArgumentError(f"unknown oracle {oracle!r}")
    v1, w1 = smooth_series(t, x, tau, Method.V1)
    v2, w2 = smooth_series(t, x, tau, Method.V2)
    v2c, _ = smooth_series(t, x, tau, Method.V2C)
    mean_gap = float(np.mean(gaps)) if gaps.size else 1.0
    return StressReport(
        alpha=math.exp(-mean_gap / tau),
        steps=steps,
        max_rel_error_v1=max_relative_error(v1, ref, scale),
        max_rel_error_v2=max_relative_error(v2, ref, scale),
        max_rel_error_v2c=max_relative_error(v2c, ref, scale),
        max_tilde_w=float(np.max(w1)),
        min_bar_w=float(np.min(w2)),
        max_bar_w=float(np.max(w2)),
        gap_law=gap_law,
        oracle=oracle,
    )
