"""Conversions between equivalent smoother parameterizations.

At a constant sampling interval ``gap`` the decay per step is
``alpha = exp(-gap/tau)``. The smoother's steady-state output variance for
i.i.d. input is ``(1 - alpha)/(1 + alpha)`` times the input variance, so it
behaves like a plain average of ``n = (1 + alpha)/(1 - alpha)`` samples, or a
boxcar window of length ``T = n * gap``.
"""
from __future__ import annotations

import math
from dataclasses import asdict, dataclass

from .errors import InvalidArgumentError

__all__ = [
    "CalibrationReport",
    "effective_n_from_alpha",
    "alpha_from_effective_n",
    "alpha_from_window",
    "tau_from_window_exact",
    "tau_from_window_limit",
    "tau_from_alpha",
    "effective_n_smallgap",
    "equilibrium_weight_v1",
    "variance_ratio",
    "barw_closed_form",
    "resolve_tau",
]


def _alpha_below_one(alpha):
    alpha = float(alpha)
    if not 0.0 <= alpha < 1.0:
        raise InvalidArgumentError(f"alpha must lie in [0, 1), got {alpha!r}")
    return alpha


def _positive(name, value):
    value = float(value)
    if not (math.isfinite(value) and value > 0):
        raise InvalidArgumentError(f"{name} must be positive and finite, got {value!r}")
    return value


def effective_n_from_alpha(alpha):
    alpha = _alpha_below_one(alpha)
    return (1.0 + alpha) / (1.0 - alpha)


def alpha_from_effective_n(n):
    n = float(n)
    if not (math.isfinite(n) and n >= 1.0):
        raise InvalidArgumentError(f"effective n must be >= 1, got {n!r}")
    return (n - 1.0) / (n + 1.0)


def _window_gap(window, gap):
    window = _positive("window", window)
    gap = _positive("gap", gap)
    if gap >= window:
        raise InvalidArgumentError(f"gap ({gap!r}) must be smaller than the window ({window!r})")
    return window, gap


def alpha_from_window(window, gap):
    """Decay factor of a smoother matching a boxcar of length ``window``."""
    window, gap = _window_gap(window, gap)
    return (window - gap) / (window + gap)


def tau_from_window_exact(window, gap):
    """``tau`` with ``exp(-gap/tau) == (window - gap)/(window + gap)``."""
    window, gap = _window_gap(window, gap)
    # log1p form: the difference of logs cancels badly when gap << window
    r = gap / window
    return gap / (math.log1p(r) - math.log1p(-r))


def tau_from_window_limit(window):
    """Small-gap limit of :func:`tau_from_window_exact`: half the window."""
    return _positive("window", window) / 2.0


def tau_from_alpha(alpha, gap):
    """Inverse of ``alpha = exp(-gap/tau)``; ``alpha = 0`` maps to ``tau = 0``."""
    alpha = _alpha_below_one(alpha)
    gap = _positive("gap", gap)
    if alpha == 0.0:
        return 0.0
    return -gap / math.log(alpha)


def effective_n_smallgap(alpha):
    """Effective sample count from the approximation ``alpha = exp(-2/n)``.

    Returns ``2 / log(1/alpha)``, the inverse of that approximation.
    """
    alpha = float(alpha)
    if not 0.0 < alpha < 1.0:
        raise InvalidArgumentError(f"alpha must lie in (0, 1), got {alpha!r}")
    return -2.0 / math.log(alpha)


def equilibrium_weight_v1(alpha):
    """Fixed point ``1/(1 - alpha)`` of ``w <- 1 + alpha * w``."""
    alpha = _alpha_below_one(alpha)
    return 1.0 / (1.0 - alpha)


def variance_ratio(alpha):
    """Steady-state ``Var[xhat] / Var[x]`` for i.i.d. input at constant rate."""
    alpha = _alpha_below_one(alpha)
    return (1.0 - alpha) / (1.0 + alpha)


def barw_closed_form(alpha, k):
    """Normalized weight ``1 - alpha**k`` after ``k`` constant-rate steps."""
    alpha = _alpha_below_one(alpha)
    if int(k) != k or k < 1:
        raise InvalidArgumentError(f"k must be a positive integer, got {k!r}")
    return 1.0 - alpha ** int(k)


@dataclass(frozen=True)
class CalibrationReport:
    """Mutually consistent parameterizations at reference interval ``gap``.

    ``tau`` (and ``half_life``) is 0 when ``alpha`` is 0, the limit where each
    output is the newest sample.
    """

    tau: float
    gap: float
    alpha: float
    effective_n: float
    window: float
    half_life: float
    variance_ratio: float

    @classmethod
    def from_alpha(cls, alpha, gap, tau=None):
        gap = _positive("gap", gap)
        alpha = _alpha_below_one(alpha)
        if tau is None:
            tau = tau_from_alpha(alpha, gap)
        n = effective_n_from_alpha(alpha)
        return cls(
            tau=tau,
            gap=gap,
            alpha=alpha,
            effective_n=n,
            window=gap * n,
            half_life=tau * math.log(2.0),
            variance_ratio=variance_ratio(alpha),
        )

    @classmethod
    def from_tau(cls, tau, gap):
        tau = _positive("tau", tau)
        gap = _positive("gap", gap)
        return cls.from_alpha(math.exp(-gap / tau), gap, tau=tau)

    def as_dict(self):
        return asdict(self)


def resolve_tau(*, tau=None, half_life=None, window=None, gap=None, n=None, alpha=None):
    """Resolve exactly one parameterization to ``(tau, alpha_at_gap)``.

    Accepted forms: ``tau``; ``half_life``; ``window`` (with ``gap`` the exact
    conversion, without it the ``window/2`` limit); ``n`` with ``gap``;
    ``alpha`` with ``gap``. ``gap`` on its own only sets the reference
    interval. ``alpha_at_gap`` is None when no gap is given.
    Raises InvalidArgumentError for zero or several specifications.
    """
    given = {
        name: value
        for name, value in (("tau", tau), ("half_life", half_life), ("window", window), ("n", n), ("alpha", alpha))
        if value is not None
    }
    if len(given) != 1:
        names = ", ".join(sorted(given)) or "none"
        raise InvalidArgumentError(f"exactly one time-scale specification is required (got: {names})")
    if gap is not None:
        gap = _positive("gap", gap)
    if tau is not None:
        tau = _positive("tau", tau)
    elif half_life is not None:
        tau = _positive("half_life", half_life) / math.log(2.0)
    elif window is not None:
        if gap is None:
            return tau_from_window_limit(window), None
        return tau_from_window_exact(window, gap), alpha_from_window(window, gap)
    else:
        if gap is None:
            raise InvalidArgumentError(f"--{'n' if n is not None else 'alpha'} needs a reference --gap")
        a = alpha_from_effective_n(n) if n is not None else _alpha_below_one(alpha)
        tau = tau_from_alpha(a, gap)
        return tau, a
    return tau, (math.exp(-gap / tau) if gap is not None else None)
