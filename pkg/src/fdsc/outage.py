"""Monte Carlo outage probability over Rayleigh fading and diversity-slope fits.

An outage happens when the target rate pair (r_dl log2 rho, r_ul log2 rho)
falls outside the instantaneous region: with CSIT the asymptotic capacity
region, without CSIT the equal-power achievable region without the
cross-link decoding constraint.  Trials are split into fixed-size chunks,
each with its own counter-based substream, and reduced in chunk order, so
results are bit-identical for a given seed regardless of thread count.
"""

from __future__ import annotations

import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field

import numpy as np

from .channel import RNG_ALGORITHM
from .model import NetworkSpec

_CHUNK = 131072
_WILSON_Z = 1.959963984540054  # two-sided 95%


@dataclass(frozen=True)
class OutageConfig:
    spec: NetworkSpec
    r_dl: float
    r_ul: float
    rho_grid_db: tuple
    trials_per_rho: int
    lam: float = 0.5
    csit: bool = True
    seed: int = 0
    threads: int = 1
    bracket_upper: bool = False  # evaluate the lam = lam_bar = 1 upper bracket

    def __post_init__(self):
        if self.trials_per_rho < 1:
            raise ValueError("trials_per_rho must be >= 1")
        grid = tuple(float(x) for x in self.rho_grid_db)
        if any(b <= a for a, b in zip(grid, grid[1:])):
            raise ValueError("rho grid must be strictly increasing")
        object.__setattr__(self, "rho_grid_db", grid)
        if not 0.0 < self.lam < 1.0:
            raise ValueError("lam must lie strictly inside (0, 1)")
        if self.r_dl < 0 or self.r_ul < 0:
            raise ValueError("multiplexing gains must be nonnegative")


@dataclass
class OutageEstimate:
    rho_db: list
    p_out: list
    ci_low: list
    ci_high: list
    counts: list
    trials: int
    slope: float | None
    slope_residual: float | None
    slope_window_db: tuple | None
    degenerate: bool
    meta: dict = field(default_factory=dict)


def wilson_interval(k: int, n: int, z: float = _WILSON_Z) -> tuple:
    """95% Wilson score interval for a binomial proportion."""
    if n == 0:
        return (0.0, 1.0)
    p = k / n
    denom = 1.0 + z * z / n
    center = (p + z * z / (2 * n)) / denom
    half = z * math.sqrt(p * (1 - p) / n + z * z / (4 * n * n)) / denom
    return (max(0.0, center - half), min(1.0, center + half))


def _batch_logdet2(mats: np.ndarray) -> np.ndarray:
    """log2 |M| for a stack of Hermitian positive-definite matrices."""
    if mats.shape[-1] == 1:
        return np.log2(mats[..., 0, 0].real)
    sign, logabs = np.linalg.slogdet(mats)
    return logabs / math.log(2.0)


def _eye_plus(scale, grams):
    n = grams.shape[-1]
    return np.eye(n) + scale * grams


def _grams(h):
    return h @ np.conj(np.swapaxes(h, -1, -2))


def _grams_t(h):
    return np.conj(np.swapaxes(h, -1, -2)) @ h


def _region_constraints_batch(cfg: OutageConfig, rho: float, batch: dict):
    """(c_dl, c_ul, c_sum) arrays for a batch of realizations at nominal SNR rho."""
    spec = cfg.spec
    a = spec.antennas
    lv = spec.levels
    w = spec.w
    if cfg.bracket_upper:
        lam, lam_bar = 1.0, 1.0
    else:
        lam, lam_bar = cfg.lam, 1.0 - cfg.lam
    rho_dl = rho ** lv.alpha_dl
    rho_ul = rho ** lv.alpha_ul
    rho_i = rho ** lv.alpha_i
    rho_s = rho ** lv.alpha_s

    g_dl = _grams(batch["h_dl"])
    g_ul = _grams(batch["h_ul"])
    g_i = _grams(batch["h_i"])
    g_s = _grams(batch["h_s"])

    if cfg.csit:
        c_dl = _batch_logdet2(_eye_plus(rho_dl, g_dl))
        c_ul = _batch_logdet2(_eye_plus(lam_bar * rho_ul, g_ul))
        t_mac = _batch_logdet2(np.eye(a.n_dl) + rho_dl * g_dl + lam_bar * rho_i * g_i)
        a_u = _eye_plus(lam_bar * rho_i, _grams_t(batch["h_i"]))
        hul_h = np.conj(np.swapaxes(batch["h_ul"], -1, -2))
        mixed = batch["h_ul"] @ np.linalg.solve(a_u, hul_h)
        t_res = _batch_logdet2(_eye_plus(lam_bar * rho_ul, mixed))
        if w > 0:
            t_side = w * _batch_logdet2(_eye_plus(lam * rho_s / w, g_s))
        else:
            t_side = 0.0
        c_sum = t_mac + t_side + t_res
    else:
        c_dl = _batch_logdet2(_eye_plus(rho_dl / a.m_dl, g_dl))
        c_ul = _batch_logdet2(_eye_plus(lam_bar * rho_ul / a.m_ul, g_ul))
        t_mac = _batch_logdet2(
            np.eye(a.n_dl) + (rho_dl / a.m_dl) * g_dl + (lam_bar * rho_i / a.m_ul) * g_i
        )
        if w > 0:
            t_side = w * _batch_logdet2(_eye_plus(lam * rho_s / (w * a.m_ul), g_s))
        else:
            t_side = 0.0
        c_sum = t_mac + t_side
    return c_dl, c_ul, c_sum


def _sample_batch(antennas, rng, count):
    def draw(rows, cols):
        re = rng.standard_normal((count, rows, cols))
        im = rng.standard_normal((count, rows, cols))
        return (re + 1j * im) / np.sqrt(2.0)

    return {
        "h_dl": draw(antennas.n_dl, antennas.m_dl),
        "h_ul": draw(antennas.n_ul, antennas.m_ul),
        "h_i": draw(antennas.n_dl, antennas.m_ul),
        "h_s": draw(antennas.n_dl, antennas.m_ul),
    }


def _count_chunk(cfg: OutageConfig, rho: float, r_dl_bits: float, r_ul_bits: float,
                 child_seed, count: int) -> int:
    rng = np.random.Generator(np.random.Philox(child_seed))
    batch = _sample_batch(cfg.spec.antennas, rng, count)
    c_dl, c_ul, c_sum = _region_constraints_batch(cfg, rho, batch)
    bad = (r_dl_bits > c_dl) | (r_ul_bits > c_ul) | (r_dl_bits + r_ul_bits > c_sum)
    return int(np.count_nonzero(bad))


def simulate_outage(cfg: OutageConfig) -> OutageEstimate:
    """Estimate outage probability on the SNR grid and fit the decay slope."""
    root = np.random.SeedSequence(cfg.seed)
    per_rho_seeds = root.spawn(len(cfg.rho_grid_db))

    counts = []
    for idx, rho_db in enumerate(cfg.rho_grid_db):
        rho = 10.0 ** (rho_db / 10.0)
        r_dl_bits = cfg.r_dl * math.log2(rho)
        r_ul_bits = cfg.r_ul * math.log2(rho)
        n = cfg.trials_per_rho
        nchunks = (n + _CHUNK - 1) // _CHUNK
        child_seeds = per_rho_seeds[idx].spawn(nchunks)
        sizes = [_CHUNK] * (nchunks - 1) + [n - _CHUNK * (nchunks - 1)]
        if cfg.threads > 1 and nchunks > 1:
            with ThreadPoolExecutor(max_workers=cfg.threads) as pool:
                chunk_counts = list(
                    pool.map(
                        lambda args: _count_chunk(cfg, rho, r_dl_bits, r_ul_bits, *args),
                        zip(child_seeds, sizes),
                    )
                )
        else:
            chunk_counts = [
                _count_chunk(cfg, rho, r_dl_bits, r_ul_bits, s, c)
                for s, c in zip(child_seeds, sizes)
            ]
        counts.append(sum(chunk_counts))

    n = cfg.trials_per_rho
    p = [k / n for k in counts]
    ci = [wilson_interval(k, n) for k in counts]
    est = OutageEstimate(
        rho_db=list(cfg.rho_grid_db),
        p_out=p,
        ci_low=[c[0] for c in ci],
        ci_high=[c[1] for c in ci],
        counts=counts,
        trials=n,
        slope=None,
        slope_residual=None,
        slope_window_db=None,
        degenerate=all(k == 0 for k in counts) or all(k == n for k in counts),
        meta={
            "seed": cfg.seed,
            "rng": RNG_ALGORITHM,
            "csit": cfg.csit,
            "lam": cfg.lam,
            "bracket_upper": cfg.bracket_upper,
            "r_dl": cfg.r_dl,
            "r_ul": cfg.r_ul,
        },
    )
    try:
        est.slope, est.slope_residual, est.slope_window_db = _fit_slope(est)
    except ValueError:
        pass
    return est


def _usable_points(est: OutageEstimate, rho_window=None):
    floor = 10.0 / est.trials
    pts = []
    for rho_db, p in zip(est.rho_db, est.p_out):
        if rho_window is not None and not (rho_window[0] <= rho_db <= rho_window[1]):
            continue
        if floor <= p <= 0.5:
            pts.append((rho_db, p))
    return pts


def _fit_slope(est: OutageEstimate, rho_window=None):
    pts = _usable_points(est, rho_window)
    if len(pts) < 3:
        raise ValueError(
            f"need >= 3 grid points with 10/trials <= p <= 0.5, found {len(pts)}"
        )
    # diversity is the decay slope of -log p versus log rho; base cancels
    x = np.array([db / 10.0 for db, _ in pts])  # log10(rho)
    y = np.array([-math.log10(p) for _, p in pts])
    slope, intercept = np.polyfit(x, y, 1)
    resid = float(np.sqrt(np.mean((y - (slope * x + intercept)) ** 2)))
    window = (pts[0][0], pts[-1][0])
    return float(slope), resid, window


def fit_diversity_slope(est: OutageEstimate, rho_window=None) -> float:
    """Least-squares diversity estimate over the unsaturated probability window."""
    slope, _, _ = _fit_slope(est, rho_window)
    return slope
