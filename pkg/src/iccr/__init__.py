"""Degrees of freedom of the two-user MIMO interference channel with a cognitive relay.

Exact DoF regions, retransmission schemes that reach them with delayed
feedback, a linear decoder and Monte Carlo checks of both.
"""

from .channel import AntennaConfig, Condition, FeedbackKind, FeedbackMode, NoiseSpec, classify_condition
from .decoder import decode, decode_frame, eliminate_known_interference, streams_per_frame
from .montecarlo import TrialBatchSpec, estimate_dof_sweep, run_batch
from .regions import (
    RationalPolytope2D,
    achievable_region_no_cr_feedback,
    cognitive_ic_bounds,
    region_csi,
    region_no,
    region_outer_delayed,
    region_output,
    region_perfect_siso,
    region_shannon,
    sum_dof_comparison,
)
from .schemes import build_scheme, run_scheme

__version__ = "0.1.0"
