"""Generalized degrees-of-freedom regions and their closed-form special cases.

Regions follow the triangle-with-cap shape {dof_dl <= a, dof_ul <= b,
dof_dl + dof_ul <= c}.  The two-slope allocation terms are evaluated with the
stronger slope first (f_spatial_ordered); the attainable sum GDoF is the
minimum of the sum constraint and a + b.
"""

from __future__ import annotations

from dataclasses import dataclass

from .model import AntennaConfig, NetworkSpec, derived_dims, f_spatial, f_spatial_ordered, pos


@dataclass(frozen=True)
class GdofRegion:
    dof_dl_max: float
    dof_ul_max: float
    dof_sum_max: float

    def __post_init__(self):
        if min(self.dof_dl_max, self.dof_ul_max, self.dof_sum_max) < 0:
            raise ValueError("GDoF constraints must be nonnegative")

    def sum_gdof(self) -> float:
        """Largest attainable dof_dl + dof_ul inside the region."""
        return min(self.dof_dl_max + self.dof_ul_max, self.dof_sum_max)

    def contains(self, dof_dl: float, dof_ul: float, tol: float = 1e-12) -> bool:
        return (
            dof_dl <= self.dof_dl_max + tol
            and dof_ul <= self.dof_ul_max + tol
            and dof_dl + dof_ul <= self.dof_sum_max + tol
        )


def _require_unit_direct_links(spec: NetworkSpec):
    if spec.levels.alpha_dl != 1.0 or spec.levels.alpha_ul != 1.0:
        raise ValueError(
            "GDoF region formulas assume alpha_dl = alpha_ul = 1 "
            f"(got {spec.levels.alpha_dl}, {spec.levels.alpha_ul})"
        )


def gdof_csit(spec: NetworkSpec) -> GdofRegion:
    """GDoF region with transmitter channel knowledge."""
    _require_unit_direct_links(spec)
    a = spec.antennas
    d = derived_dims(a)
    ai, as_, w = spec.levels.alpha_i, spec.levels.alpha_s, spec.w

    # uplink private streams: null-space dims at full strength plus aligned
    # dims arriving at the BS at reduced strength
    t_private = f_spatial_ordered(
        a.n_ul, (pos(1.0 - ai), d.m_i), (1.0, pos(a.m_ul - a.n_dl))
    )
    # downlink-receiver multiple access: interference at level alpha_i,
    # intended signal at level 1
    t_mac = f_spatial_ordered(a.n_dl, (ai, a.m_ul), (1.0, a.m_dl))
    t_side = w * f_spatial(a.n_dl, (as_, a.m_ul))
    return GdofRegion(
        dof_dl_max=float(d.m_dl_min),
        dof_ul_max=float(d.m_ul_min),
        dof_sum_max=t_private + t_mac + t_side,
    )


def gdof_nocsit(spec: NetworkSpec) -> GdofRegion:
    """Achievable GDoF region without transmitter channel knowledge."""
    _require_unit_direct_links(spec)
    a = spec.antennas
    d = derived_dims(a)
    ai, as_, w = spec.levels.alpha_i, spec.levels.alpha_s, spec.w

    dof_ul = min(float(d.m_ul_min), ai * d.m_i + w * as_ * d.m_i)
    t_mac = f_spatial_ordered(a.n_dl, (ai, a.m_ul), (1.0, a.m_dl))
    t_side = w * f_spatial(a.n_dl, (as_, a.m_ul))
    return GdofRegion(
        dof_dl_max=float(d.m_dl_min),
        dof_ul_max=dof_ul,
        dof_sum_max=t_mac + t_side,
    )


def sum_gdof_per_antenna_case_a(m: int, n: int, alpha_i: float, w: float, alpha_s: float) -> float:
    """Symmetric antennas (m, n, m, n): sum GDoF divided by min(m, n)."""
    if m < 1 or n < 1:
        raise ValueError("antenna counts must be >= 1")
    ratio = max(m, n) / min(m, n)
    ws = w * alpha_s
    if alpha_i < 1.0:
        return min(2.0, 2.0 - pos(2.0 - ratio) * alpha_i + ws)
    return min(2.0, alpha_i + ratio - 1.0 + ws)


def sum_gdof_per_antenna_case_b(antennas: AntennaConfig, alpha_i: float, w: float, alpha_s: float) -> float:
    """BS-rich configuration (m_dl, n_ul >= m_ul, n_dl): sum GDoF per min(m_ul, n_dl)."""
    a = antennas
    if not (a.m_dl >= max(a.m_ul, a.n_dl) and a.n_ul >= max(a.m_ul, a.n_dl)):
        raise ValueError("case B requires the BS to have at least as many antennas as the mobiles")
    d = derived_dims(a)
    ratio = d.m_x / d.m_i
    ws = w * alpha_s
    if alpha_i < 1.0:
        return min(ratio + 1.0, ratio + 1.0 - alpha_i + ws)
    return min(ratio + 1.0, ratio - 1.0 + alpha_i + ws)


def required_w_gdof(
    antennas: AntennaConfig,
    alpha_i: float,
    alpha_s: float,
    csit: bool,
    case: str,
) -> float:
    """Minimal side-channel bandwidth ratio that removes the interference
    penalty from the sum GDoF.

    case "A": symmetric antennas; case "B": BS-rich.  The no-CSIT formulas are
    stated for alpha_i = 1 only.
    """
    if alpha_s <= 0:
        raise ValueError("alpha_s must be positive")
    if case not in ("A", "B"):
        raise ValueError(f"case must be 'A' or 'B', got {case!r}")
    a = antennas
    if case == "A":
        if not (a.m_dl == a.m_ul and a.n_dl == a.n_ul):
            raise ValueError("case A requires m_dl = m_ul and n_dl = n_ul")
        m, n = a.m_dl, a.n_dl
        ratio = max(m, n) / min(m, n)
        if csit:
            if alpha_i < 1.0:
                return (alpha_i / alpha_s) * pos(2.0 - ratio)
            return (1.0 / alpha_s) * pos(3.0 - ratio - alpha_i)
        if alpha_i != 1.0:
            raise ValueError("no-CSIT required bandwidth is only stated for alpha_i = 1")
        if n >= m:
            return (1.0 / alpha_s) * pos(2.0 - n / m)
        return 1.0 / alpha_s

    # case B
    if not (a.m_dl >= max(a.m_ul, a.n_dl) and a.n_ul >= max(a.m_ul, a.n_dl)):
        raise ValueError("case B requires the BS to have at least as many antennas as the mobiles")
    if csit:
        if alpha_i < 1.0:
            return alpha_i / alpha_s
        return pos(2.0 - alpha_i) / alpha_s
    if alpha_i != 1.0:
        raise ValueError("no-CSIT required bandwidth is only stated for alpha_i = 1")
    if a.n_dl >= a.m_ul:
        return 1.0 / alpha_s
    return a.m_ul / (a.n_dl * alpha_s)
