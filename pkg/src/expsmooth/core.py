"""Normalized exponential smoothing of irregularly sampled series.

The smoothed value at time ``t`` is the ratio of two decay-weighted sums::

    xhat(t) = sum_k exp(-(t - t_k)/tau) * x_k  /  sum_k exp(-(t - t_k)/tau)

Two recursions produce it without storing past observations:

* version 1 keeps the unnormalized sums (``tilde_x``, ``tilde_w``) and is
  exact for any spacing of the timestamps;
* version 2 keeps both sums scaled by ``1 - alpha`` (``bar_x``, ``bar_w``),
  which keeps the weight bounded by one. The plain recursion is exact only
  when the sampling interval is constant; :func:`v2_update_gap_corrected`
  rescales the carried state so that it is exact for any spacing.

States are immutable values; every update returns a new state.
"""
from __future__ import annotations

import enum
import math
from collections.abc import Iterable, Iterator, Sequence
from dataclasses import dataclass

import numpy as np

from . import kernels
from .errors import (
    DegenerateStateError,
    EmptyInputError,
    InvalidArgumentError,
    OutOfOrderError,
)

__all__ = [
    "Method",
    "Observation",
    "TimeScale",
    "StateV1",
    "StateV2",
    "SmoothedValue",
    "decay_factor",
    "v1_init",
    "v1_update",
    "v1_value_at",
    "v2_init",
    "v2_update",
    "v2_update_gap_corrected",
    "v2_value",
    "oracle_smooth",
    "oracle_series",
    "decay_factors",
    "smooth_series",
    "smooth_stream",
]


class Method(str, enum.Enum):
    V1 = "v1"
    V2 = "v2"
    V2C = "v2c"


def _finite(name, value):
    value = float(value)
    if not math.isfinite(value):
        raise InvalidArgumentError(f"{name} must be finite, got {value!r}")
    return value


@dataclass(frozen=True, slots=True)
class Observation:
    t: float
    x: float

    def __post_init__(self):
        object.__setattr__(self, "t", _finite("timestamp", self.t))
        object.__setattr__(self, "x", _finite("value", self.x))


@dataclass(frozen=True, slots=True)
class TimeScale:
    """Decay time scale ``tau`` (same unit as the timestamps).

    Accepted anywhere a plain float ``tau`` is.
    """

    tau: float

    def __post_init__(self):
        tau = float(self.tau)
        if not (math.isfinite(tau) and tau > 0):
            raise InvalidArgumentError(f"tau must be positive and finite, got {tau!r}")
        object.__setattr__(self, "tau", tau)

    def __float__(self):
        return self.tau

    def decay(self, gap):
        return decay_factor(gap, self.tau)

    @property
    def half_life(self):
        return self.tau * math.log(2.0)


def _tau(tau):
    return TimeScale(float(tau)).tau


@dataclass(frozen=True, slots=True)
class StateV1:
    tilde_x: float
    tilde_w: float
    last_t: float


@dataclass(frozen=True, slots=True)
class StateV2:
    bar_x: float
    bar_w: float
    last_t: float
    last_alpha: float


@dataclass(frozen=True, slots=True)
class SmoothedValue:
    x_hat: float
    weight: float


def decay_factor(gap, tau):
    """Return ``exp(-gap/tau)``, the weight multiplier across a gap."""
    gap = float(gap)
    if not (math.isfinite(gap) and gap >= 0):
        raise InvalidArgumentError(f"gap must be finite and non-negative, got {gap!r}")
    return math.exp(-gap / _tau(tau))


def _check_alpha(alpha, name="alpha"):
    alpha = float(alpha)
    if not (0.0 <= alpha <= 1.0):
        raise InvalidArgumentError(f"{name} must lie in [0, 1], got {alpha!r}")
    return alpha


# -- version 1 ---------------------------------------------------------------


def v1_init(obs: Observation) -> StateV1:
    return StateV1(tilde_x=obs.x, tilde_w=1.0, last_t=obs.t)


def v1_update(state: StateV1, obs: Observation, tau) -> StateV1:
    """Absorb ``obs`` into unnormalized sums; equal timestamps are allowed."""
    if obs.t < state.last_t:
        raise OutOfOrderError(
            f"timestamp {obs.t!r} precedes previous timestamp {state.last_t!r} "
            "(v1 requires non-decreasing timestamps)",
            t=obs.t,
            last_t=state.last_t,
        )
    alpha = decay_factor(obs.t - state.last_t, tau)
    return StateV1(
        tilde_x=obs.x + alpha * state.tilde_x,
        tilde_w=1.0 + alpha * state.tilde_w,
        last_t=obs.t,
    )


def v1_value_at(state: StateV1, t, tau) -> SmoothedValue:
    """Evaluate the smoother at ``t >= state.last_t``.

    Both sums decay by the same factor between samples, so ``x_hat`` does not
    change; only the returned weight shrinks.
    """
    t = _finite("t", t)
    if t < state.last_t:
        raise OutOfOrderError(
            f"evaluation time {t!r} precedes last observation {state.last_t!r}",
            t=t,
            last_t=state.last_t,
        )
    decay = decay_factor(t - state.last_t, tau)
    return SmoothedValue(x_hat=state.tilde_x / state.tilde_w, weight=decay * state.tilde_w)


# -- version 2 ---------------------------------------------------------------


def v2_init(obs: Observation, alpha1) -> StateV2:
    """Seed normalized sums as ``(1 - alpha1) * (x, 1)``.

    With a constant decay ``alpha`` per step, ``alpha1 = alpha`` makes the
    weight after ``k`` observations equal ``1 - alpha**k``.
    """
    alpha1 = _check_alpha(alpha1, "alpha1")
    if alpha1 == 1.0:
        raise InvalidArgumentError("alpha1 must be < 1; the normalization vanishes at 1")
    c = 1.0 - alpha1
    return StateV2(bar_x=c * obs.x, bar_w=c, last_t=obs.t, last_alpha=alpha1)


def _v2_alpha(state, obs, tau):
    if obs.t <= state.last_t:
        raise OutOfOrderError(
            f"timestamp {obs.t!r} does not follow previous timestamp {state.last_t!r} "
            "(v2 requires strictly increasing timestamps; use v1 for duplicates)",
            t=obs.t,
            last_t=state.last_t,
            strict=True,
        )
    return decay_factor(obs.t - state.last_t, tau)


def v2_update(state: StateV2, obs: Observation, tau) -> StateV2:
    """Normalized recursion. Exact only at a constant sampling interval."""
    alpha = _v2_alpha(state, obs, tau)
    c = 1.0 - alpha
    return StateV2(
        bar_x=c * obs.x + alpha * state.bar_x,
        bar_w=c + alpha * state.bar_w,
        last_t=obs.t,
        last_alpha=alpha,
    )


def v2_update_gap_corrected(state: StateV2, obs: Observation, tau) -> StateV2:
    """Normalized recursion that stays exact for arbitrary spacing.

    The carried sums are scaled by ``(1 - alpha_prev)``; they are rescaled by
    ``(1 - alpha) / (1 - alpha_prev)`` before decaying.
    """
    if state.last_alpha >= 1.0:
        raise DegenerateStateError("state was built with alpha = 1 and cannot be rescaled")
    alpha = _v2_alpha(state, obs, tau)
    c = 1.0 - alpha
    carry = alpha * (c / (1.0 - state.last_alpha))
    return StateV2(
        bar_x=c * obs.x + carry * state.bar_x,
        bar_w=c + carry * state.bar_w,
        last_t=obs.t,
        last_alpha=alpha,
    )


def v2_value(state: StateV2) -> SmoothedValue:
    if state.bar_w == 0.0:
        raise DegenerateStateError("normalized weight is zero")
    return SmoothedValue(x_hat=state.bar_x / state.bar_w, weight=state.bar_w)


# -- oracle ------------------------------------------------------------------


def oracle_smooth(observations: Sequence[Observation], t, tau) -> SmoothedValue:
    """Direct evaluation of the defining weighted average at time ``t``.

    Weights are taken relative to the newest observation (the common factor
    cancels in the ratio, and underflow is avoided); sums are accumulated
    oldest first with :func:`math.fsum`. The returned weight is the true
    decayed weight sum at ``t``.
    """
    if not observations:
        raise EmptyInputError("oracle needs at least one observation")
    tau = _tau(tau)
    t = _finite("t", t)
    newest = observations[-1].t
    prev = -math.inf
    for obs in observations:
        if obs.t < prev:
            raise OutOfOrderError("observations must be ordered by timestamp", t=obs.t, last_t=prev)
        prev = obs.t
    if t < newest:
        raise OutOfOrderError("evaluation time precedes an observation", t=t, last_t=newest)
    weights = [math.exp(-(newest - obs.t) / tau) for obs in observations]
    num = math.fsum(w * obs.x for w, obs in zip(weights, observations))
    den = math.fsum(weights)
    return SmoothedValue(x_hat=num / den, weight=den * math.exp(-(t - newest) / tau))


def oracle_series(t, x, tau):
    """Oracle value after every observation, by direct summation.

    Returns ``(xhat, scale)`` arrays where ``scale[k]`` is the weighted mean
    of ``|x|`` at step ``k``, the natural magnitude for relative errors of a
    weighted average. Quadratic in the series length.
    """
    tau = _tau(tau)
    t = np.asarray(t, dtype=float)
    x = np.asarray(x, dtype=float)
    n = len(t)
    xhat = np.empty(n)
    scale = np.empty(n)
    ax = np.abs(x)
    for k in range(n):
        w = np.exp(-(t[k] - t[: k + 1]) / tau)
        den = math.fsum(w)
        xhat[k] = math.fsum(w * x[: k + 1]) / den
        scale[k] = math.fsum(w * ax[: k + 1]) / den
    return xhat, scale


# -- batch and streaming drivers ----------------------------------------------


def decay_factors(t, tau):
    """Per-step decay factors for timestamps ``t``; element 0 is set to 1."""
    t = np.asarray(t, dtype=float)
    alphas = np.ones(len(t))
    if len(t) > 1:
        alphas[1:] = np.exp(-np.diff(t) / _tau(tau))
    return alphas


def _validate_series(t, x, strict):
    t = np.ascontiguousarray(t, dtype=float)
    x = np.ascontiguousarray(x, dtype=float)
    if t.shape != x.shape or t.ndim != 1:
        raise InvalidArgumentError("t and x must be 1-d arrays of equal length")
    if not (np.all(np.isfinite(t)) and np.all(np.isfinite(x))):
        raise InvalidArgumentError("timestamps and values must be finite")
    gaps = np.diff(t)
    bad = np.flatnonzero(gaps <= 0 if strict else gaps < 0)
    if bad.size:
        i = int(bad[0]) + 1
        kind = "strictly increasing" if strict else "non-decreasing"
        raise OutOfOrderError(
            f"timestamp at index {i} ({t[i]!r}) breaks the {kind} ordering",
            t=float(t[i]),
            last_t=float(t[i - 1]),
            strict=strict,
        )
    return t, x


def smooth_series(t, x, tau, method=Method.V1, alpha1=None):
    """Smooth a whole series; returns ``(xhat, weight)`` arrays.

    Runs on the compiled kernels when available. For the version 2 methods
    ``alpha1`` defaults to the decay factor of the first gap (0 for a single
    observation).
    """
    method = Method(method)
    t, x = _validate_series(t, x, strict=method is not Method.V1)
    if len(t) == 0:
        return np.empty(0), np.empty(0)
    alphas = decay_factors(t, tau)
    if method is Method.V1:
        return kernels.fold_v1(alphas, x)
    if alpha1 is None:
        alpha1 = alphas[1] if len(t) > 1 else 0.0
    alpha1 = _check_alpha(alpha1, "alpha1")
    if alpha1 == 1.0:
        raise InvalidArgumentError("alpha1 must be < 1")
    fold = kernels.fold_v2 if method is Method.V2 else kernels.fold_v2c
    return fold(alphas, x, alpha1)


def smooth_stream(observations: Iterable[Observation], tau, method=Method.V1) -> Iterator[tuple[Observation, SmoothedValue]]:
    """Lazily smooth a stream, yielding ``(observation, value)`` pairs.

    Version 2 methods seed ``alpha1`` with the decay factor of the first gap,
    so the first pair is held back until the second observation arrives. A
    single-observation stream is seeded with ``alpha1 = 0``.
    """
    method = Method(method)
    tau = _tau(tau)
    it = iter(observations)
    first = next(it, None)
    if first is None:
        return
    if method is Method.V1:
        state = v1_init(first)
        yield first, SmoothedValue(state.tilde_x / state.tilde_w, state.tilde_w)
        for obs in it:
            state = v1_update(state, obs, tau)
            yield obs, SmoothedValue(state.tilde_x / state.tilde_w, state.tilde_w)
        return
    update = v2_update if method is Method.V2 else v2_update_gap_corrected
    second = next(it, None)
    if second is None:
        yield first, v2_value(v2_init(first, 0.0))
        return
    if second.t <= first.t:
        # same error as the update would raise
        _v2_alpha(StateV2(0.0, 1.0, first.t, 0.0), second, tau)
    state = v2_init(first, decay_factor(second.t - first.t, tau))
    yield first, v2_value(state)
    state = update(state, second, tau)
    yield second, v2_value(state)
    for obs in it:
        state = update(state, obs, tau)
        yield obs, v2_value(state)
