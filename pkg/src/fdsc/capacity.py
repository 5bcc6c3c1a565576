"""Per-realization rate-region bounds for the side-channel assisted network.

Every region is reported as three constraints (c_dl, c_ul, c_sum) describing
{(R_dl, R_ul): R_dl <= c_dl, R_ul <= c_ul, R_dl + R_ul <= c_sum} in bits/s
per main-channel Hz, log base 2 throughout.  The side-channel contributes
w * log2|I + x/w| terms, defined as 0 when w = 0.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .channel import ChannelRealization, SnrPoint, gram, gram_t, logdet_i_plus, solve_psd
from .model import AntennaConfig, derived_dims


@dataclass(frozen=True)
class RateBounds:
    c_dl: float
    c_ul: float
    c_sum: float

    def __post_init__(self):
        if not (self.c_dl >= 0 and self.c_ul >= 0 and self.c_sum >= 0):
            raise ValueError(f"rate bounds must be nonnegative, got {self}")

    def contains(self, r_dl: float, r_ul: float, tol: float = 0.0) -> bool:
        return (
            r_dl <= self.c_dl + tol
            and r_ul <= self.c_ul + tol
            and r_dl + r_ul <= self.c_sum + tol
        )

    def componentwise_leq(self, other: "RateBounds", tol: float = 1e-9) -> bool:
        return (
            self.c_dl <= other.c_dl + tol
            and self.c_ul <= other.c_ul + tol
            and self.c_sum <= other.c_sum + tol
        )


@dataclass(frozen=True)
class PowerSplit:
    """Fraction lam of the uplink power budget spent on the side-channel."""

    lam: float = 0.5

    def __post_init__(self):
        if not 0.0 <= self.lam <= 1.0:
            raise ValueError(f"lambda must lie in [0, 1], got {self.lam}")

    @property
    def lam_bar(self) -> float:
        return 1.0 - self.lam


def side_channel_rate(w: float, power: float, h_s: np.ndarray, per_antenna_div: float = 1.0) -> float:
    """w * log2|I + power/(w*div) Hs Hs^dag|; identically 0 when w = 0."""
    if w < 0:
        raise ValueError("bandwidth ratio must be nonnegative")
    if w == 0.0 or power == 0.0:
        return 0.0
    return w * logdet_i_plus((power / (w * per_antenna_div)) * gram(h_s))


def _dims_of(h: ChannelRealization) -> AntennaConfig:
    n_dl, m_dl = h.h_dl.shape
    n_ul, m_ul = h.h_ul.shape
    cfg = AntennaConfig(m_dl=m_dl, n_dl=n_dl, m_ul=m_ul, n_ul=n_ul)
    h.check_dims(cfg)
    return cfg


def outer_bound(h: ChannelRealization, snr: SnrPoint, w: float, split: PowerSplit) -> RateBounds:
    """Capacity outer bound: two point-to-point cuts plus the genie-aided sum cut
    (which carries an additive n_dl bits/s/Hz constant)."""
    cfg = _dims_of(h)
    lb = split.lam_bar
    c_dl = logdet_i_plus(snr.rho_dl * gram(h.h_dl))
    c_ul = logdet_i_plus(lb * snr.rho_ul * gram(h.h_ul))

    t_mac = logdet_i_plus(snr.rho_dl * gram(h.h_dl) + lb * snr.rho_i * gram(h.h_i))
    t_side = side_channel_rate(w, split.lam * snr.rho_s, h.h_s)
    a = np.eye(cfg.m_ul) + lb * snr.rho_i * gram_t(h.h_i)
    mixed = h.h_ul @ solve_psd(a, h.h_ul.conj().T)
    t_ul_res = logdet_i_plus(lb * snr.rho_ul * mixed)
    c_sum = t_mac + t_side + t_ul_res + cfg.n_dl
    return RateBounds(c_dl, c_ul, c_sum)


def gap_constants(antennas: AntennaConfig, w: float) -> tuple:
    """Constant rate penalties (c1, c2) of the bin-and-cancel scheme.

    SISO gives c1 = c2 = 1 for every w.
    """
    d = derived_dims(antennas)
    m_hat_i = d.m_i * math.log2(1.0 + 1.0 / antennas.m_ul)
    c1 = min(antennas.m_dl + antennas.m_ul, antennas.n_dl) * math.log2(
        max(antennas.m_dl, antennas.m_ul)
    ) + m_hat_i
    c2 = (d.m_ul_min + w * d.m_i) * math.log2(antennas.m_ul) + d.m_x * math.log2(
        antennas.m_ul + 1
    )
    return c1, c2


def inner_bound_bc(h: ChannelRealization, snr: SnrPoint, w: float, split: PowerSplit) -> RateBounds:
    """Bin-and-cancel achievable region: outer bound minus (c1, c2, c1+c2), clamped at 0."""
    cfg = _dims_of(h)
    outer = outer_bound(h, snr, w, split)
    c1, c2 = gap_constants(cfg, w)
    return RateBounds(
        max(outer.c_dl - c1, 0.0),
        max(outer.c_ul - c2, 0.0),
        max(outer.c_sum - (c1 + c2), 0.0),
    )


def achievable_mi_exact(h: ChannelRealization, snr: SnrPoint, w: float, split: PowerSplit) -> RateBounds:
    """Exact mutual-information region of the bin-and-cancel Gaussian inputs.

    Private uplink covariance K_u = (1/m_ul)(I + lam_bar rho_i Hi^dag Hi)^-1
    keeps the private signal at the victim's noise floor; all other inputs use
    equal power allocation across transmit antennas.
    """
    cfg = _dims_of(h)
    if w > 0 and not (0.0 < split.lam < 1.0):
        raise ValueError("power split must lie strictly inside (0, 1) when w > 0")
    lb = split.lam_bar
    m_dl, m_ul = cfg.m_dl, cfg.m_ul

    a_u = np.eye(m_ul) + lb * snr.rho_i * gram_t(h.h_i)
    # residual private-uplink interference at the downlink receiver
    b_res = (lb * snr.rho_i / m_ul) * (h.h_i @ solve_psd(a_u, h.h_i.conj().T))
    logdet_b = logdet_i_plus(b_res)

    i_xdl = logdet_i_plus((snr.rho_dl / m_dl) * gram(h.h_dl) + b_res) - logdet_b
    i_joint_ul = logdet_i_plus((lb * snr.rho_ul / m_ul) * gram(h.h_ul))
    i_uul = logdet_i_plus((lb * snr.rho_ul / m_ul) * (h.h_ul @ solve_psd(a_u, h.h_ul.conj().T)))
    i_sul_dl = logdet_i_plus((lb * snr.rho_i / m_ul) * gram(h.h_i)) - logdet_b
    i_xs = side_channel_rate(w, split.lam * snr.rho_s, h.h_s, per_antenna_div=m_ul)
    i_xdl_sul = (
        logdet_i_plus((snr.rho_dl / m_dl) * gram(h.h_dl) + (lb * snr.rho_i / m_ul) * gram(h.h_i))
        - logdet_b
    )

    c_dl = i_xdl
    c_ul = min(i_joint_ul, i_uul + i_sul_dl + i_xs)
    c_sum = i_uul + i_xdl_sul + i_xs
    return RateBounds(max(c_dl, 0.0), max(c_ul, 0.0), max(c_sum, 0.0))


def nocsit_region(
    h: ChannelRealization,
    snr: SnrPoint,
    w: float,
    split: PowerSplit = PowerSplit(0.5),
    for_outage: bool = False,
) -> RateBounds:
    """Achievable region without transmitter channel knowledge.

    Equal-power covariances (1/m) I everywhere; the uplink message is all
    common.  In outage analysis the cross-link decoding constraint on R_ul is
    dropped: the downlink mobile failing to decode the interferer is not an
    uplink error event.
    """
    cfg = _dims_of(h)
    lb = split.lam_bar
    c_dl = logdet_i_plus((snr.rho_dl / cfg.m_dl) * gram(h.h_dl))
    direct = logdet_i_plus((lb * snr.rho_ul / cfg.m_ul) * gram(h.h_ul))
    side = side_channel_rate(w, split.lam * snr.rho_s, h.h_s, per_antenna_div=cfg.m_ul)
    if for_outage:
        c_ul = direct
    else:
        cross = logdet_i_plus((lb * snr.rho_i / cfg.m_ul) * gram(h.h_i)) + side
        c_ul = min(direct, cross)
    c_sum = (
        logdet_i_plus((snr.rho_dl / cfg.m_dl) * gram(h.h_dl) + (lb * snr.rho_i / cfg.m_ul) * gram(h.h_i))
        + side
    )
    return RateBounds(c_dl, c_ul, c_sum)


def high_snr_sum(h: ChannelRealization, snr: SnrPoint, w: float, split: PowerSplit) -> float:
    """Asymptotic sum-capacity: the outer-bound sum cut without its n_dl constant."""
    cfg = _dims_of(h)
    return outer_bound(h, snr, w, split).c_sum - cfg.n_dl


def csit_outage_region(h: ChannelRealization, snr: SnrPoint, w: float, split: PowerSplit) -> RateBounds:
    """Instantaneous region used for outage with CSIT (sum cut without + n_dl)."""
    outer = outer_bound(h, snr, w, split)
    cfg = _dims_of(h)
    return RateBounds(outer.c_dl, outer.c_ul, outer.c_sum - cfg.n_dl)


def sum_capacity_max_lambda(h, snr, w, grid=None) -> tuple:
    """Optional grid maximization of the outer-bound sum cut over the power split.

    Returns (best_lambda, best_sum).  Not used in DMT computations.
    """
    if grid is None:
        grid = [k / 100.0 for k in range(5, 100, 5)]
    best = None
    for lam in grid:
        val = high_snr_sum(h, snr, w, PowerSplit(lam))
        if best is None or val > best[1]:
            best = (lam, val)
    return best


def psd_gap_bound_check(g_dl: np.ndarray, g_ul: np.ndarray, tol: float = 1e-9) -> bool:
    """Numeric check of log2|I + (I+G_dl)^-1 G_ul| <= n for G_ul <= G_dl (PSD order).

    Evaluated via log2|I + G_dl + G_ul| - log2|I + G_dl|, which is the same
    determinant ratio in a stable form.  Property-test fixture only.
    """
    n = g_dl.shape[0]
    lhs = logdet_i_plus(np.asarray(g_dl) + np.asarray(g_ul)) - logdet_i_plus(g_dl)
    return lhs <= n + tol
