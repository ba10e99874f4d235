"""Normalized exponential smoothing for irregularly sampled time series."""
from .core import (
    Method,
    Observation,
    SmoothedValue,
    StateV1,
    StateV2,
    TimeScale,
    decay_factor,
    oracle_series,
    oracle_smooth,
    smooth_series,
    smooth_stream,
    v1_init,
    v1_update,
    v1_value_at,
    v2_init,
    v2_update,
    v2_update_gap_corrected,
    v2_value,
)
from .errors import (
    DegenerateStateError,
    EmptyInputError,
    InvalidArgumentError,
    OutOfOrderError,
    SmoothingError,
)
from .kernels import BACKEND

__version__ = "0.1.0"
