"""Diversity-multiplexing tradeoff computation.

The sum-event diversity order is the minimum of a piecewise-linear exponent
functional over ordered eigenvalue-exponent vectors; it is solved exactly as
a linear program (positive parts rewritten through epigraph variables).  The
overall tradeoff is the minimum of the two single-link curves and the sum
event.  Closed forms exist for base stations with equal transmit and receive
antenna counts; they are implemented independently of the LP so the two
routes cross-validate.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

from . import gdof
from .lp import LpBuilder, solve, check_certificate
from .model import (
    NetworkSpec,
    PiecewiseLinear,
    derived_dims,
    eval_pl,
    min_pl,
    pos,
    ptp_dmt,
    ptp_dmt_unit,
)

_NEG_TOL = 1e-7


class NoClosedFormError(ValueError):
    """Raised when parameters fall outside every stated closed-form regime."""


@dataclass(frozen=True)
class ExponentVars:
    """Optimal eigenvalue-exponent allocation behind a sum-event LP solution.

    mu: downlink block, sigma: uplink block (empty without CSIT), theta:
    interference block, nu: side-channel block (empty when w = 0).  Each block
    is nonnegative and nondecreasing; exponents of links sharing receive
    dimensions are coupled from below by the interference level.
    """

    mu: tuple
    sigma: tuple
    theta: tuple
    nu: tuple

    def validate(self, spec: NetworkSpec, tol: float = 1e-7):
        a = spec.antennas
        ai = spec.levels.alpha_i
        for block in (self.mu, self.sigma, self.theta, self.nu):
            if any(v < -tol for v in block):
                raise AssertionError(f"negative exponent in {block}")
            if any(b < a_ - tol for a_, b in zip(block, block[1:])):
                raise AssertionError(f"exponent block not nondecreasing: {block}")
        for i, m in enumerate(self.mu, start=1):
            for k, t in enumerate(self.theta, start=1):
                if i + k >= a.n_dl + 1 and m + t < ai - tol:
                    raise AssertionError(f"mu_{i} + theta_{k} = {m + t} < {ai}")
        for j, s in enumerate(self.sigma, start=1):
            for k, t in enumerate(self.theta, start=1):
                if j + k >= a.m_ul + 1 and s + t < ai - tol:
                    raise AssertionError(f"sigma_{j} + theta_{k} = {s + t} < {ai}")
        return True


def sum_diversity_exponents(spec: NetworkSpec, r_sum: float, csit: bool) -> ExponentVars:
    """Solve the sum-event LP and unpack the optimal exponent vectors
    (side-channel exponents are de-scaled back from nu' = w * nu)."""
    if r_sum < 0:
        raise ValueError("sum multiplexing gain must be nonnegative")
    lp, _ = build_sum_diversity_lp(spec, r_sum, csit)
    sol = solve(lp)
    if sol.status != "optimal":
        raise RuntimeError(f"sum-diversity LP ended {sol.status}")
    d = derived_dims(spec.antennas)
    by_name = {name: float(v) for name, v in zip(lp.names, sol.x)}
    out = ExponentVars(
        mu=tuple(by_name[f"mu{i}"] for i in range(1, d.m_dl_min + 1)),
        sigma=tuple(by_name[f"sigma{j}"] for j in range(1, d.m_ul_min + 1)) if csit else (),
        theta=tuple(by_name[f"theta{k}"] for k in range(1, d.m_i + 1)),
        nu=tuple(by_name[f"nu{l}"] / spec.w for l in range(1, d.m_i + 1)) if spec.w > 0 else (),
    )
    out.validate(spec)
    return out


@dataclass(frozen=True)
class DmtQuery:
    spec: NetworkSpec
    r_dl: float
    r_ul: float
    csit: bool = True

    def __post_init__(self):
        if self.r_dl < 0 or self.r_ul < 0:
            raise ValueError("multiplexing gains must be nonnegative")
        d = derived_dims(self.spec.antennas)
        lv = self.spec.levels
        if self.r_dl > d.m_dl_min * lv.alpha_dl + 1e-12:
            raise ValueError(f"r_dl={self.r_dl} exceeds downlink cap {d.m_dl_min * lv.alpha_dl}")
        if self.r_ul > d.m_ul_min * lv.alpha_ul + 1e-12:
            raise ValueError(f"r_ul={self.r_ul} exceeds uplink cap {d.m_ul_min * lv.alpha_ul}")


def build_sum_diversity_lp(spec: NetworkSpec, r_sum: float, csit: bool):
    """LP whose optimum (plus a constant) is the sum-event diversity order.

    Exponent blocks: mu (downlink), sigma (uplink, CSIT only), theta
    (interference), nu' = w * nu (side-channel, only when w > 0 so that the
    budget term reads (w*alpha_s - nu')+ with unit weight and the objective
    carries 1/w).  Returns (lp, constant); the budget row is the last
    constraint of the LP.
    """
    a = spec.antennas
    d = derived_dims(a)
    lv = spec.levels
    w = spec.w

    b = LpBuilder()
    mu = [b.new_var(f"mu{i}") for i in range(1, d.m_dl_min + 1)]
    sigma = [b.new_var(f"sigma{j}") for j in range(1, d.m_ul_min + 1)] if csit else []
    theta = [b.new_var(f"theta{k}") for k in range(1, d.m_i + 1)]
    nu = [b.new_var(f"nu{l}") for l in range(1, d.m_i + 1)] if w > 0 else []

    for i, v in enumerate(mu, start=1):
        b.add_objective(v, a.m_dl + a.n_dl + 1 - 2 * i)
    if csit:
        for j, v in enumerate(sigma, start=1):
            b.add_objective(v, a.m_ul + a.n_ul + 1 - 2 * j)
        theta_coeff = lambda k: a.m_dl + a.n_ul + a.m_ul + a.n_dl + 1 - 2 * k
        constant = -(a.m_dl + a.n_ul) * d.m_i * lv.alpha_i
    else:
        theta_coeff = lambda k: a.m_ul + a.n_dl + a.m_dl + 1 - 2 * k
        constant = -a.m_dl * d.m_i * lv.alpha_i
    for k, v in enumerate(theta, start=1):
        b.add_objective(v, theta_coeff(k))
    for l, v in enumerate(nu, start=1):
        b.add_objective(v, (a.m_ul + a.n_dl + 1 - 2 * l) / w)

    # positive parts in the objective: joint eigenvalue-exponent penalties
    for i, vi in enumerate(mu, start=1):
        for k in range(1, min(a.n_dl - i, a.m_ul) + 1):
            b.add_pos_part_in_objective((lv.alpha_i, {vi: -1.0, theta[k - 1]: -1.0}), 1.0)
    if csit:
        for j, vj in enumerate(sigma, start=1):
            for k in range(1, min(a.m_ul - j, a.n_dl) + 1):
                b.add_pos_part_in_objective((lv.alpha_i, {vj: -1.0, theta[k - 1]: -1.0}), 1.0)

    # ordering within each block
    for block in (mu, sigma, theta, nu):
        for lo, hi in zip(block, block[1:]):
            b.add_constraint({hi: 1.0, lo: -1.0}, ">=", 0.0)

    # coupling between direct-link and interference exponents
    for i, vi in enumerate(mu, start=1):
        for k, vk in enumerate(theta, start=1):
            if i + k >= a.n_dl + 1:
                b.add_constraint({vi: 1.0, vk: 1.0}, ">=", lv.alpha_i)
    if csit:
        for j, vj in enumerate(sigma, start=1):
            for k, vk in enumerate(theta, start=1):
                if j + k >= a.m_ul + 1:
                    b.add_constraint({vj: 1.0, vk: 1.0}, ">=", lv.alpha_i)

    # rate budget over the positive parts of the unrealized exponents
    budget = [(lv.alpha_dl, {v: -1.0}) for v in mu]
    if csit:
        budget += [(lv.alpha_ul, {v: -1.0}) for v in sigma]
    budget += [(lv.alpha_i, {v: -1.0}) for v in theta]
    budget += [(w * lv.alpha_s, {v: -1.0}) for v in nu]
    b.add_pos_part_budget(budget, r_sum)

    return b.build(), constant


_LP_CACHE = {}
_LP_LOCK = __import__("threading").Lock()


def _d_sum(spec: NetworkSpec, r_sum: float, csit: bool, check: bool = False) -> float:
    if r_sum < 0:
        raise ValueError(f"sum multiplexing gain must be nonnegative, got {r_sum}")
    # the cached LP is mutated in place (budget rhs), so mutate+solve is atomic
    with _LP_LOCK:
        key = (spec, csit)
        cached = _LP_CACHE.get(key)
        if cached is None:
            lp, constant = build_sum_diversity_lp(spec, r_sum, csit)
            _LP_CACHE[key] = (lp, constant)
        else:
            lp, constant = cached
            coeffs, sense, _ = lp.rows[-1]
            lp.rows[-1] = (coeffs, sense, float(r_sum))
        sol = solve(lp)
    if sol.status != "optimal":
        raise RuntimeError(f"sum-diversity LP ended {sol.status} at r_sum={r_sum}")
    if check:
        check_certificate(sol)
    value = sol.value + constant
    if value < -_NEG_TOL:
        raise RuntimeError(f"sum-diversity LP produced negative order {value}")
    return max(value, 0.0)


def d_sum_csit(spec: NetworkSpec, r_sum: float) -> float:
    """Sum-event diversity order with CSIT at sum multiplexing gain r_sum."""
    return _d_sum(spec, r_sum, csit=True)


def d_sum_nocsit(spec: NetworkSpec, r_sum: float) -> float:
    """Sum-event diversity order without CSIT at sum multiplexing gain r_sum."""
    return _d_sum(spec, r_sum, csit=False)


def sum_multiplexing_cap(spec: NetworkSpec, csit: bool) -> float:
    """Sum multiplexing gain where the sum-event diversity reaches zero
    (the sum constraint of the matching GDoF region)."""
    region = gdof.gdof_csit(spec) if csit else gdof.gdof_nocsit(spec)
    return region.dof_sum_max


def dmt_overall(q: DmtQuery) -> float:
    """min over the downlink, uplink and sum outage events."""
    a = q.spec.antennas
    lv = q.spec.levels
    d_dl = eval_pl(ptp_dmt(a.m_dl, a.n_dl, lv.alpha_dl), q.r_dl)
    d_ul = eval_pl(ptp_dmt(a.m_ul, a.n_ul, lv.alpha_ul), q.r_ul)
    ds = _d_sum(q.spec, q.r_dl + q.r_ul, q.csit)
    return min(d_dl, d_ul, ds)


def dmt_curve_symmetric(spec: NetworkSpec, csit: bool, r_grid) -> list:
    """Symmetric-rate sweep: returns [(r, d)] with r_dl = r_ul = r.

    Asserts that the sampled overall curve is nonincreasing and that the
    sum-event component is convex (it is an LP value function of its budget);
    the overall minimum itself is legitimately non-convex in some regimes.
    """
    a = spec.antennas
    lv = spec.levels
    d = derived_dims(a)
    r_grid = [float(r) for r in r_grid]
    if any(b < a_ for a_, b in zip(r_grid, r_grid[1:])):
        raise ValueError("r grid must be nondecreasing")
    rmax = min(d.m_dl_min * lv.alpha_dl, d.m_ul_min * lv.alpha_ul)
    if r_grid and (r_grid[0] < 0 or r_grid[-1] > rmax + 1e-12):
        raise ValueError(f"r grid outside the symmetric domain [0, {rmax}]")

    dl_curve = ptp_dmt(a.m_dl, a.n_dl, lv.alpha_dl)
    ul_curve = ptp_dmt(a.m_ul, a.n_ul, lv.alpha_ul)
    out = []
    sums = []
    for r in r_grid:
        ds = _d_sum(spec, 2.0 * r, csit)
        sums.append(ds)
        out.append((r, min(eval_pl(dl_curve, r), eval_pl(ul_curve, r), ds)))

    tol = 1e-7
    for (r0, d0), (r1, d1) in zip(out, out[1:]):
        if d1 > d0 + tol:
            raise AssertionError(f"DMT curve increased from ({r0},{d0}) to ({r1},{d1})")
    # convexity of the sum event: each sample lies below the chord of its
    # neighbours (value-based test, robust to LP tolerance on fine grids)
    for i in range(1, len(out) - 1):
        x0, x1, x2 = r_grid[i - 1], r_grid[i], r_grid[i + 1]
        if x2 - x0 < 1e-12:
            continue
        t = (x1 - x0) / (x2 - x0)
        chord = (1 - t) * sums[i - 1] + t * sums[i + 1]
        if sums[i] > chord + tol * (1.0 + abs(chord)):
            raise AssertionError(
                f"sum-event diversity not convex near r={x1}: {sums[i]} above chord {chord}"
            )
    return out


def fit_breakpoints(samples, slope_tol: float = 1e-6) -> list:
    """Snap a sampled piecewise-linear curve to its breakpoints.

    Keeps the first/last samples and every interior sample where the incoming
    and outgoing slopes differ by more than slope_tol.
    """
    if len(samples) < 3:
        return list(samples)
    pts = [samples[0]]
    for i in range(1, len(samples) - 1):
        (x0, y0), (x1, y1), (x2, y2) = samples[i - 1], samples[i], samples[i + 1]
        s_in = (y1 - y0) / (x1 - x0)
        s_out = (y2 - y1) / (x2 - x1)
        if abs(s_out - s_in) > slope_tol:
            pts.append(samples[i])
    pts.append(samples[-1])
    return pts


# ---------------------------------------------------------------------------
# closed forms for base stations with m transmit and m receive antennas
# ---------------------------------------------------------------------------


def _pieces_to_pwl(pieces) -> PiecewiseLinear:
    """Concatenate transformed unit-curve pieces into one breakpoint list.

    Each piece is (lo, hi, base_m, base_n, x_scale, x_shift, y_scale, y_const)
    mapping r -> y_scale * d_{base_m, base_n}((r - x_shift)/x_scale) + y_const
    on [lo, hi]; zero-width pieces are skipped.  Junctions must agree.
    """
    xs, ys = [], []
    for lo, hi, bm, bn, x_scale, x_shift, y_scale, y_const in pieces:
        if hi - lo <= 1e-12:
            continue
        base = ptp_dmt_unit(bm, bn)
        for k, (bx, by) in enumerate(base.breakpoints):
            x = x_shift + x_scale * bx
            y = y_scale * by + y_const
            if xs and abs(x - xs[-1]) < 1e-12:
                if abs(y - ys[-1]) > 1e-9:
                    raise AssertionError(
                        f"discontinuous closed-form junction at r={x}: {ys[-1]} vs {y}"
                    )
                continue
            xs.append(x)
            ys.append(y)
    if not xs:
        raise NoClosedFormError("all closed-form pieces are degenerate")
    return PiecewiseLinear(list(zip(xs, ys)))


def _dsum_closed_m11m(m: int, w: float, alpha_s: float, csit: bool) -> PiecewiseLinear:
    """Sum-event diversity order for single-antenna mobiles, closed form."""
    s = (2 * m + 1) if csit else (m + 1)
    ws = w * alpha_s
    if ws <= 0.0:
        return PiecewiseLinear([(0.0, float(s)), (1.0, 0.0)])
    if w <= 1.0 / s:
        return PiecewiseLinear([(0.0, s + alpha_s), (ws, float(s)), (1.0 + ws, 0.0)])
    return PiecewiseLinear([(0.0, s + alpha_s), (1.0, alpha_s), (1.0 + ws, 0.0)])


def closed_form_m11m(m: int, w: float, alpha_s: float, csit: bool) -> PiecewiseLinear:
    """Symmetric DMT for (m, 1, 1, m) with unit direct/interference exponents.

    Breakpoints are built analytically per regime (keyed on w against
    1/(2m+1) with CSIT or 1/(m+1) without, alpha_s against m/2, and
    w*alpha_s against 1), so knees like (m+1)/(3m+2) come out exact; the
    generic envelope construction is kept as an internal consistency check.
    """
    if m < 1:
        raise ValueError("m must be >= 1")
    if w < 0 or alpha_s < 0:
        raise ValueError("w and alpha_s must be nonnegative")
    s = (2 * m + 1) if csit else (m + 1)
    ws = w * alpha_s
    line = lambda r: m * (1.0 - r)  # single-user tradeoff
    if alpha_s >= m / 2.0 and ws >= 1.0:
        pts = [(0.0, float(m)), (1.0, 0.0)]
    elif ws >= 1.0:
        # the side-channel piece hands back to single-user at beta*
        knee = (m + 1 + alpha_s) / (3 * m + 2) if csit else (1 + alpha_s) / (m + 2)
        beta = (alpha_s + 1.0 / w - m) / (2.0 / w - m)
        pts = [
            (0.0, float(m)),
            (knee, line(knee)),
            (0.5, alpha_s),
            (beta, line(beta)),
            (1.0, 0.0),
        ]
    elif w >= 1.0 / s and alpha_s >= m / 2.0:
        beta = (alpha_s + 1.0 / w - m) / (2.0 / w - m)
        pts = [(0.0, float(m)), (beta, line(beta)), ((1 + ws) / 2.0, 0.0)]
    elif w >= 1.0 / s:
        knee = (m + 1 + alpha_s) / (3 * m + 2) if csit else (1 + alpha_s) / (m + 2)
        pts = [(0.0, float(m)), (knee, line(knee)), (0.5, alpha_s), ((1 + ws) / 2.0, 0.0)]
    else:
        knee = (m + 1 + s * ws) / (3 * m + 2) if csit else (1 + s * ws) / (m + 2)
        pts = [(0.0, float(m)), (knee, line(knee)), ((1 + ws) / 2.0, 0.0)]
    # boundary parameter choices can collapse neighbouring knees (e.g.
    # beta* = 1 exactly when w*alpha_s = 1); drop the duplicates
    dedup = [pts[0]]
    for x, y in pts[1:]:
        if x - dedup[-1][0] <= 1e-12:
            if abs(y - dedup[-1][1]) > 1e-9:
                raise AssertionError(f"conflicting knee values at r={x}")
            continue
        dedup.append((x, y))
    curve = PiecewiseLinear(dedup)

    envelope = min_pl([ptp_dmt_unit(m, 1), _dsum_closed_m11m(m, w, alpha_s, csit).shift_scale_x(scale=0.5)])
    for x in curve.xs + envelope.xs:
        if abs(eval_pl(curve, x) - eval_pl(envelope, x)) > 1e-9:
            raise AssertionError(
                f"regime breakpoints disagree with the envelope at r={x} "
                f"(m={m}, w={w}, alpha_s={alpha_s}, csit={csit})"
            )
    return curve


def _w_regimes_csit(m: int, n_dl: int, m_ul: int):
    """Stated bandwidth-ratio regimes of the CSIT sum-event closed form."""
    delta = abs(m_ul - n_dl)
    s = m_ul + n_dl
    hi_i = (delta + 1) / (2 * m + s - 1)
    lo_ii = (s - 1) / (2 * m + delta + 1)
    hi_ii = math.inf if (m + delta - 1) <= 0 else (delta + 1) / (m + delta - 1)
    lo_iii = (s - 1) / (m - delta + 1)
    return hi_i, lo_ii, hi_ii, lo_iii


def _dsum_closed_general_csit(m, n_dl, m_ul, w, alpha_s):
    mi, mx = min(m_ul, n_dl), max(m_ul, n_dl)
    delta = mx - mi
    ws = w * alpha_s
    hi_i, lo_ii, hi_ii, lo_iii = _w_regimes_csit(m, n_dl, m_ul)

    candidates = []
    if w <= hi_i + 1e-12:
        candidates.append((
            "i",
            [
                (0.0, mi * ws, m_ul, n_dl, ws, 0.0, alpha_s, mi * mx + m * (mi + mx)),
                (mi * ws, mi * (1 + ws), mi, 2 * m + mx, 1.0, mi * ws, 1.0, m * delta),
                (mi * (1 + ws), mx + mi * ws, max(delta, 1), m, 1.0, mi * (1 + ws), 1.0, 0.0)
                if delta > 0
                else (0.0, 0.0, 1, 1, 1.0, 0.0, 0.0, 0.0),
            ],
        ))
    if lo_ii - 1e-12 <= w <= hi_ii + 1e-12:
        candidates.append((
            "ii",
            [
                (0.0, float(mi), mi, 2 * m + mx, 1.0, 0.0, 1.0, m_ul * n_dl * alpha_s + m * delta),
                (float(mi), mi * (1 + ws), m_ul, n_dl, ws, float(mi), alpha_s, m * delta)
                if ws > 0
                else (0.0, 0.0, 1, 1, 1.0, 0.0, 0.0, 0.0),
                (mi * (1 + ws), mx + mi * ws, max(delta, 1), m, 1.0, mi * (1 + ws), 1.0, 0.0)
                if delta > 0
                else (0.0, 0.0, 1, 1, 1.0, 0.0, 0.0, 0.0),
            ],
        ))
    if w >= lo_iii - 1e-12:
        candidates.append((
            "iii",
            [
                (0.0, float(mi), mi, 2 * m + mx, 1.0, 0.0, 1.0, m_ul * n_dl * alpha_s + m * delta),
                (float(mi), float(mx), max(delta, 1), m, 1.0, float(mi), 1.0, m_ul * n_dl * alpha_s)
                if delta > 0
                else (0.0, 0.0, 1, 1, 1.0, 0.0, 0.0, 0.0),
                (float(mx), mx + mi * ws, m_ul, n_dl, ws, float(mx), alpha_s, 0.0)
                if ws > 0
                else (0.0, 0.0, 1, 1, 1.0, 0.0, 0.0, 0.0),
            ],
        ))
    return candidates


def _dsum_closed_general_nocsit(m, n_dl, m_ul, w, alpha_s):
    ws = w * alpha_s
    s = m_ul + n_dl
    candidates = []
    if m_ul >= 2 * (n_dl - 1):
        hi_a = (m_ul - n_dl + 1) / (m + s - 1)
        lo_b = (s - 1) / (m + m_ul - n_dl + 1)
        if w <= hi_a + 1e-12:
            candidates.append((
                "lowW",
                [
                    (0.0, n_dl * ws, m_ul, n_dl, ws, 0.0, alpha_s, n_dl * (m_ul + m)),
                    (n_dl * ws, n_dl * (1 + ws), n_dl, m + m_ul, 1.0, n_dl * ws, 1.0, 0.0),
                ],
            ))
        if w >= lo_b - 1e-12:
            candidates.append((
                "highW",
                [
                    (0.0, float(n_dl), n_dl, m + m_ul, 1.0, 0.0, 1.0, m_ul * n_dl * alpha_s),
                    (float(n_dl), n_dl * (1 + ws), m_ul, n_dl, ws, float(n_dl), alpha_s, 0.0)
                    if ws > 0
                    else (0.0, 0.0, 1, 1, 1.0, 0.0, 0.0, 0.0),
                ],
            ))
    if n_dl >= m_ul and m_ul <= 2:
        delta = n_dl - m_ul
        hi_a = (delta + 1) / (m + s - 1)
        lo_b = (s - 1) / (m + delta + 1)
        hi_b = math.inf if (m + delta - 1) <= 0 else (delta + 1) / (m + delta - 1)
        lo_c = (s - 1) / (m - delta + 1)
        if w <= hi_a + 1e-12:
            candidates.append((
                "lowW",
                [
                    (0.0, m_ul * ws, m_ul, n_dl, ws, 0.0, alpha_s, n_dl * (m_ul + m)),
                    (m_ul * ws, m_ul * (1 + ws), m_ul, m + n_dl, 1.0, m_ul * ws, 1.0, m * delta),
                    (m_ul * (1 + ws), n_dl + m_ul * ws, max(delta, 1), m, 1.0, m_ul * (1 + ws), 1.0, 0.0)
                    if delta > 0
                    else (0.0, 0.0, 1, 1, 1.0, 0.0, 0.0, 0.0),
                ],
            ))
        if lo_b - 1e-12 <= w <= hi_b + 1e-12:
            candidates.append((
                "midW",
                [
                    (0.0, float(m_ul), m_ul, m + n_dl, 1.0, 0.0, 1.0, m_ul * n_dl * alpha_s + m * delta),
                    (float(m_ul), m_ul * (1 + ws), m_ul, n_dl, ws, float(m_ul), alpha_s, m * delta)
                    if ws > 0
                    else (0.0, 0.0, 1, 1, 1.0, 0.0, 0.0, 0.0),
                    (m_ul * (1 + ws), n_dl + m_ul * ws, max(delta, 1), m, 1.0, m_ul * (1 + ws), 1.0, 0.0)
                    if delta > 0
                    else (0.0, 0.0, 1, 1, 1.0, 0.0, 0.0, 0.0),
                ],
            ))
        if w >= lo_c - 1e-12:
            candidates.append((
                "highW",
                [
                    (0.0, float(m_ul), m_ul, m + n_dl, 1.0, 0.0, 1.0, m_ul * n_dl * alpha_s + m * delta),
                    (float(m_ul), float(n_dl), max(delta, 1), m, 1.0, float(m_ul), 1.0, m_ul * n_dl * alpha_s)
                    if delta > 0
                    else (0.0, 0.0, 1, 1, 1.0, 0.0, 0.0, 0.0),
                    (float(n_dl), n_dl + m_ul * ws, m_ul, n_dl, ws, float(n_dl), alpha_s, 0.0)
                    if ws > 0
                    else (0.0, 0.0, 1, 1, 1.0, 0.0, 0.0, 0.0),
                ],
            ))
    return candidates


def _agree_and_pick(candidates, what: str):
    built = [(label, _pieces_to_pwl(pieces)) for label, pieces in candidates]
    label0, ref = built[0]
    for label, curve in built[1:]:
        grid = sorted(set(ref.xs) | set(curve.xs))
        grid += [0.5 * (a + b) for a, b in zip(grid, grid[1:])]
        for x in grid:
            lo = max(ref.x_min, curve.x_min)
            hi = min(ref.x_max, curve.x_max)
            if lo <= x <= hi and abs(ref(x) - curve(x)) > 1e-9:
                raise AssertionError(
                    f"{what}: overlapping regimes {label0}/{label} disagree at {x}"
                )
    return label0, ref


def dsum_closed_form(m: int, n_dl: int, m_ul: int, w: float, alpha_s: float, csit: bool):
    """Closed-form sum-event diversity curve (in r_sum) with its regime label.

    Raises NoClosedFormError between stated regimes; the LP covers those
    parameters instead.
    """
    if not (m >= m_ul and m >= n_dl and min(m, n_dl, m_ul) >= 1):
        raise ValueError("closed forms require m >= m_ul, n_dl >= 1")
    if w < 0 or alpha_s < 0:
        raise ValueError("w and alpha_s must be nonnegative")
    if csit:
        candidates = _dsum_closed_general_csit(m, n_dl, m_ul, w, alpha_s)
    else:
        candidates = _dsum_closed_general_nocsit(m, n_dl, m_ul, w, alpha_s)
    if not candidates:
        raise NoClosedFormError(
            f"no stated closed form for (m={m}, n_dl={n_dl}, m_ul={m_ul}, "
            f"w={w}, csit={csit}); use the LP"
        )
    return _agree_and_pick(candidates, "sum-event closed form")


def closed_form_general(
    m: int, n_dl: int, m_ul: int, w: float, alpha_s: float, csit: bool
) -> PiecewiseLinear:
    """Symmetric DMT closed form for (m, n_dl, m_ul, m) networks."""
    _, dsum = dsum_closed_form(m, n_dl, m_ul, w, alpha_s, csit)
    sym_sum = dsum.shift_scale_x(scale=0.5)
    dl = ptp_dmt_unit(m, n_dl)
    ul = ptp_dmt_unit(m_ul, m)
    return min_pl([dl, ul, sym_sum])


# ---------------------------------------------------------------------------
# bandwidth tradeoff conditions
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class BandwidthRequirement:
    w: float
    alpha_s_min: float
    sufficient: bool  # provided alpha_s meets the floor


def compensate_csit_bandwidth(m: int, n_dl: int, m_ul: int, alpha_s: float) -> BandwidthRequirement:
    """Side-channel bandwidth making the no-CSIT DMT match the CSIT optimum.

    Stated for n_dl >= m_ul with m_ul in {1, 2}.  When the downlink mobile
    has enough receive antennas on its own, no side-channel is needed (w = 0).
    """
    if m_ul not in (1, 2) or n_dl < m_ul:
        raise ValueError(
            "CSIT compensation is stated only for n_dl >= m_ul with m_ul in {1, 2}; "
            "use compensate_csit_bandwidth_numeric elsewhere"
        )
    if m < max(m_ul, n_dl):
        raise ValueError("requires m >= m_ul, n_dl")
    if alpha_s <= 0:
        raise ValueError("alpha_s must be positive")
    d_half = eval_pl(ptp_dmt_unit(m_ul, m), m_ul / 2.0)
    if n_dl >= d_half / m + m_ul:
        return BandwidthRequirement(w=0.0, alpha_s_min=0.0, sufficient=True)
    w = min(
        (n_dl + m_ul - 1) / (m + n_dl - m_ul + 1),
        (1.0 / alpha_s) * pos(2.0 - n_dl / m_ul),
    )
    floor = (eval_pl(ptp_dmt_unit(m, m_ul), m_ul / 2.0) - m * (n_dl - m_ul)) / (m_ul * n_dl)
    return BandwidthRequirement(w=w, alpha_s_min=floor, sufficient=alpha_s >= floor - 1e-12)


def compensate_csit_bandwidth_numeric(
    m: int,
    n_dl: int,
    m_ul: int,
    alpha_s: float,
    w_grid=None,
    r_points: int = 60,
    tol: float = 1e-6,
):
    """Numeric search for the smallest grid w where the no-CSIT symmetric DMT
    matches the CSIT one.  Fallback for configurations without a stated
    sufficient condition; results are search-based, not analytic.
    """
    if w_grid is None:
        w_grid = [k / 100.0 for k in range(0, 301, 5)]
    from .model import AntennaConfig, LinkLevels  # local import to avoid cycle noise

    ant = AntennaConfig(m_dl=m, n_dl=n_dl, m_ul=m_ul, n_ul=m)
    lv = LinkLevels(alpha_s=alpha_s)
    d = derived_dims(ant)
    rmax = float(min(d.m_dl_min, d.m_ul_min))
    grid = [rmax * k / (r_points - 1) for k in range(r_points)]
    for w in w_grid:
        spec = NetworkSpec(antennas=ant, levels=lv, w=float(w))
        ok = all(
            abs(
                min(
                    eval_pl(ptp_dmt_unit(m, n_dl), r),
                    eval_pl(ptp_dmt_unit(m_ul, m), r),
                    d_sum_csit(spec, 2 * r),
                )
                - min(
                    eval_pl(ptp_dmt_unit(m, n_dl), r),
                    eval_pl(ptp_dmt_unit(m_ul, m), r),
                    d_sum_nocsit(spec, 2 * r),
                )
            )
            <= tol
            for r in grid
        )
        if ok:
            return float(w)
    return None


def interference_free_bandwidth(
    m: int, n_dl: int, m_ul: int, alpha_s: float, csit: bool
) -> BandwidthRequirement:
    """Side-channel bandwidth achieving the no-interference DMT
    min(d_{m, n_dl}, d_{m_ul, m})."""
    if m < max(m_ul, n_dl):
        raise ValueError("requires m >= m_ul, n_dl")
    if alpha_s <= 0:
        raise ValueError("alpha_s must be positive")
    mi, mx = min(m_ul, n_dl), max(m_ul, n_dl)
    floor_sym = (2 * mi - mx) * (m - mi + 1) / (mi * (2 * abs(n_dl - m_ul) + 2))
    if csit or n_dl >= m_ul:
        w = (1.0 / alpha_s) * pos(2.0 - mx / mi)
        floor = floor_sym if w > 0 else 0.0
    else:
        w = 1.0 / alpha_s
        floor = (m - n_dl + 1) / (2 * (m_ul - n_dl + 1))
    return BandwidthRequirement(w=w, alpha_s_min=floor, sufficient=alpha_s >= floor - 1e-12)


def no_interference_curve(m: int, n_dl: int, m_ul: int) -> PiecewiseLinear:
    """Benchmark: parallel links without inter-mobile interference."""
    return min_pl([ptp_dmt_unit(m, n_dl), ptp_dmt_unit(m_ul, m)])
