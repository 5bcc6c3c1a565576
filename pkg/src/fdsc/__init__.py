"""Side-channel assisted MIMO full-duplex network analysis.

Capacity-region bounds per fading realization, generalized degrees of
freedom, and diversity-multiplexing tradeoffs with and without transmitter
channel knowledge, cross-validated between exact linear programs and
closed forms.  All rates are bits/s per main-channel Hz (W_m = 1).
"""

from ._backend import BACKEND
from .model import (
    AntennaConfig,
    DerivedDims,
    LinkLevels,
    NetworkSpec,
    PiecewiseLinear,
    derived_dims,
    eval_pl,
    f_spatial,
    min_pl,
    ptp_dmt,
)
from .channel import ChannelRealization, SnrPoint, make_rng, sample_rayleigh, snrs_from_levels
from .capacity import (
    PowerSplit,
    RateBounds,
    achievable_mi_exact,
    gap_constants,
    high_snr_sum,
    inner_bound_bc,
    nocsit_region,
    outer_bound,
)
from .gdof import GdofRegion, gdof_csit, gdof_nocsit
from .dmt import (
    DmtQuery,
    closed_form_general,
    closed_form_m11m,
    compensate_csit_bandwidth,
    d_sum_csit,
    d_sum_nocsit,
    dmt_curve_symmetric,
    dmt_overall,
    interference_free_bandwidth,
)
from .outage import OutageConfig, OutageEstimate, fit_diversity_slope, simulate_outage

__version__ = "0.1.0"
