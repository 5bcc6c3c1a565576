"""Core configuration types and piecewise-linear curve primitives.

All rates produced by this package are normalized to the main-channel
bandwidth (W_m = 1), i.e. reported in bits/s per main-channel Hz.  The
side-channel enters only through the bandwidth ratio ``w`` and its strength
exponent ``alpha_s``.
"""

from __future__ import annotations

import bisect
from dataclasses import dataclass, field


@dataclass(frozen=True)
class AntennaConfig:
    """Antenna counts (m_dl, n_dl, m_ul, n_ul) = (BS tx, DL mobile rx, UL mobile tx, BS rx)."""

    m_dl: int
    n_dl: int
    m_ul: int
    n_ul: int

    def __post_init__(self):
        for name in ("m_dl", "n_dl", "m_ul", "n_ul"):
            v = getattr(self, name)
            if not isinstance(v, int) or v < 1:
                raise ValueError(f"{name} must be a positive integer, got {v!r}")


@dataclass(frozen=True)
class LinkLevels:
    """Per-link strength exponents relative to the nominal SNR rho.

    A link with exponent a operates at SNR rho**a; a = 0 means the link sits
    at the noise floor.
    """

    alpha_dl: float = 1.0
    alpha_ul: float = 1.0
    alpha_i: float = 1.0
    alpha_s: float = 1.0

    def __post_init__(self):
        for name in ("alpha_dl", "alpha_ul", "alpha_i", "alpha_s"):
            v = getattr(self, name)
            if v < 0:
                raise ValueError(f"{name} must be nonnegative, got {v}")


@dataclass(frozen=True)
class NetworkSpec:
    """Full network description: antennas, link exponents, bandwidth ratio w = W_s/W_m."""

    antennas: AntennaConfig
    levels: LinkLevels = field(default_factory=LinkLevels)
    w: float = 0.0

    def __post_init__(self):
        if self.w < 0:
            raise ValueError(f"bandwidth ratio w must be nonnegative, got {self.w}")


@dataclass(frozen=True)
class DerivedDims:
    """Min/max antenna quantities shared by the capacity, GDoF and DMT formulas."""

    m_dl_min: int
    m_ul_min: int
    m_i: int
    m_x: int


def derived_dims(antennas: AntennaConfig) -> DerivedDims:
    """Rank-type quantities: min per direct link, min/max across the mobiles."""
    return DerivedDims(
        m_dl_min=min(antennas.m_dl, antennas.n_dl),
        m_ul_min=min(antennas.m_ul, antennas.n_ul),
        m_i=min(antennas.m_ul, antennas.n_dl),
        m_x=max(antennas.m_ul, antennas.n_dl),
    )


def pos(x: float) -> float:
    """Positive part (x)+ = max(x, 0)."""
    return x if x > 0.0 else 0.0


def f_spatial(x, pair1, pair2=None):
    """Two-slope receive-dimension allocation.

    ``f(x, (y1, x1), (y2, x2)) = min(x, x1)*y1+ + min((x-x1)+, x2)*y2+``
    with the stronger slope first (y1 >= y2).  The one-pair form drops the
    second term.  Arguments must be pre-ordered by the caller; see
    :func:`f_spatial_ordered` for the sorting wrapper.
    """
    y1, x1 = pair1
    if pair2 is None:
        return min(x, x1) * pos(y1)
    y2, x2 = pair2
    if y1 < y2:
        raise ValueError(f"slopes must satisfy y1 >= y2, got y1={y1} < y2={y2}")
    return min(x, x1) * pos(y1) + min(pos(x - x1), x2) * pos(y2)


def f_spatial_ordered(x, pair1, pair2):
    """f_spatial with the pairs sorted so the stronger slope is consumed first."""
    if pair1[0] >= pair2[0]:
        return f_spatial(x, pair1, pair2)
    return f_spatial(x, pair2, pair1)


class PiecewiseLinear:
    """Piecewise-linear curve stored as exact breakpoints (x strictly increasing).

    Evaluation interpolates linearly between breakpoints; querying outside the
    domain raises.  A single-breakpoint curve is a degenerate point.
    """

    __slots__ = ("xs", "ys")

    def __init__(self, breakpoints):
        pts = [(float(x), float(y)) for x, y in breakpoints]
        if not pts:
            raise ValueError("need at least one breakpoint")
        xs = [p[0] for p in pts]
        if any(b <= a for a, b in zip(xs, xs[1:])):
            raise ValueError(f"x coordinates must be strictly increasing, got {xs}")
        self.xs = xs
        self.ys = [p[1] for p in pts]

    @property
    def breakpoints(self):
        return list(zip(self.xs, self.ys))

    @property
    def x_min(self) -> float:
        return self.xs[0]

    @property
    def x_max(self) -> float:
        return self.xs[-1]

    def __call__(self, x: float) -> float:
        return eval_pl(self, x)

    def __eq__(self, other):
        return isinstance(other, PiecewiseLinear) and self.breakpoints == other.breakpoints

    def __repr__(self):
        pts = ", ".join(f"({x:g}, {y:g})" for x, y in self.breakpoints)
        return f"PiecewiseLinear([{pts}])"

    def shift_scale_x(self, shift: float = 0.0, scale: float = 1.0) -> "PiecewiseLinear":
        """Curve g with g(scale*x + shift) = self(x); scale must be positive."""
        if scale <= 0:
            raise ValueError("scale must be positive")
        return PiecewiseLinear([(scale * x + shift, y) for x, y in self.breakpoints])

    def add_const(self, c: float) -> "PiecewiseLinear":
        return PiecewiseLinear([(x, y + c) for x, y in self.breakpoints])


def eval_pl(curve: PiecewiseLinear, x: float, tol: float = 1e-12) -> float:
    """Evaluate by linear interpolation; x outside [x_min, x_max] is an error."""
    xs, ys = curve.xs, curve.ys
    if x < xs[0] - tol or x > xs[-1] + tol:
        raise ValueError(f"x={x} outside curve domain [{xs[0]}, {xs[-1]}]")
    x = min(max(x, xs[0]), xs[-1])
    if len(xs) == 1:
        return ys[0]
    j = bisect.bisect_right(xs, x)
    if j == len(xs):
        return ys[-1]
    if j == 0:
        return ys[0]
    x0, x1 = xs[j - 1], xs[j]
    y0, y1 = ys[j - 1], ys[j]
    if x1 == x0:
        return y0
    t = (x - x0) / (x1 - x0)
    return y0 + t * (y1 - y0)


def _merge_knots(curves):
    knots = set()
    for c in curves:
        knots.update(c.xs)
    return sorted(knots)


def min_pl(curves) -> PiecewiseLinear:
    """Exact pointwise minimum over the intersected domain.

    Crossing points between segments are inserted as breakpoints, so the
    result evaluates to min_i curves[i](x) everywhere, not just on the union
    of input knots.
    """
    curves = list(curves)
    if not curves:
        raise ValueError("min_pl needs at least one curve")
    if len(curves) == 1:
        return PiecewiseLinear(curves[0].breakpoints)
    lo = max(c.x_min for c in curves)
    hi = min(c.x_max for c in curves)
    if hi < lo:
        raise ValueError("curve domains do not intersect")
    if hi == lo:
        return PiecewiseLinear([(lo, min(c(lo) for c in curves))])

    knots = [x for x in _merge_knots(curves) if lo <= x <= hi]
    if knots[0] > lo:
        knots.insert(0, lo)
    if knots[-1] < hi:
        knots.append(hi)

    # Within each knot interval every curve is a single segment, so the lower
    # envelope can only switch at pairwise segment intersections.
    xs = []
    for a, b in zip(knots, knots[1:]):
        xs.append(a)
        segs = []
        for c in curves:
            ya, yb = c(a), c(b)
            segs.append(((yb - ya) / (b - a), ya))
        cross = set()
        for i in range(len(segs)):
            si, yi = segs[i]
            for j in range(i + 1, len(segs)):
                sj, yj = segs[j]
                if si == sj:
                    continue
                t = (yj - yi) / (si - sj)
                if 1e-12 < t < (b - a) - 1e-12:
                    cross.add(a + t)
        xs.extend(sorted(cross))
    xs.append(knots[-1])

    pts = [(x, min(c(x) for c in curves)) for x in xs]
    # Drop collinear interior points to keep the breakpoint list minimal.
    out = [pts[0]]
    for k in range(1, len(pts) - 1):
        (x0, y0), (x1, y1), (x2, y2) = out[-1], pts[k], pts[k + 1]
        lhs = (y1 - y0) * (x2 - x0)
        rhs = (y2 - y0) * (x1 - x0)
        if abs(lhs - rhs) > 1e-12 * max(1.0, abs(lhs), abs(rhs)):
            out.append(pts[k])
    if len(pts) > 1:
        out.append(pts[-1])
    return PiecewiseLinear(out)


def ptp_dmt(m: int, n: int, alpha: float) -> PiecewiseLinear:
    """Point-to-point MIMO diversity-multiplexing curve at link exponent alpha.

    Breakpoints sit at r = k*alpha with value alpha*(m-k)*(n-k) for
    k = 0..min(m, n); alpha = 0 collapses to the single point (0, 0).
    """
    if m < 1 or n < 1:
        raise ValueError("antenna counts must be >= 1")
    if alpha < 0:
        raise ValueError("alpha must be nonnegative")
    if alpha == 0.0:
        return PiecewiseLinear([(0.0, 0.0)])
    kmax = min(m, n)
    return PiecewiseLinear(
        [(k * alpha, alpha * (m - k) * (n - k)) for k in range(kmax + 1)]
    )


def ptp_dmt_unit(m: int, n: int) -> PiecewiseLinear:
    """d_{m,n}: the unit-exponent point-to-point curve joining integer points."""
    return ptp_dmt(m, n, 1.0)
