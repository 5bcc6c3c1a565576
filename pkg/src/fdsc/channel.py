"""Rayleigh fading realizations and complex-matrix kernels for rate evaluation.

Noise is never sampled: rate expressions are deterministic in the channel
matrices, with unit-variance main-channel noise and W-times-larger
side-channel noise handled inside the capacity formulas.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .model import AntennaConfig, LinkLevels

HERMITIAN_TOL = 1e-9
COND_LIMIT = 1e12

# Counter-based generator so Monte Carlo workers can derive independent
# streams from one master seed; recorded in run manifests.
RNG_ALGORITHM = "philox"


def make_rng(seed) -> np.random.Generator:
    return np.random.Generator(np.random.Philox(seed))


@dataclass(frozen=True)
class ChannelRealization:
    """One draw of the four fading matrices.

    h_dl : (n_dl, m_dl)  BS -> downlink mobile
    h_ul : (n_ul, m_ul)  uplink mobile -> BS
    h_i  : (n_dl, m_ul)  uplink mobile -> downlink mobile (interference)
    h_s  : (n_dl, m_ul)  device-to-device side-channel
    """

    h_dl: np.ndarray
    h_ul: np.ndarray
    h_i: np.ndarray
    h_s: np.ndarray

    def check_dims(self, antennas: AntennaConfig):
        expect = {
            "h_dl": (antennas.n_dl, antennas.m_dl),
            "h_ul": (antennas.n_ul, antennas.m_ul),
            "h_i": (antennas.n_dl, antennas.m_ul),
            "h_s": (antennas.n_dl, antennas.m_ul),
        }
        for name, shape in expect.items():
            got = getattr(self, name).shape
            if got != shape:
                raise ValueError(f"{name} has shape {got}, expected {shape}")


@dataclass(frozen=True)
class SnrPoint:
    """Linear per-receive-antenna SNR/INR of each link (noise variance 1)."""

    rho_dl: float
    rho_ul: float
    rho_i: float
    rho_s: float

    def __post_init__(self):
        for name in ("rho_dl", "rho_ul", "rho_i", "rho_s"):
            if getattr(self, name) < 0:
                raise ValueError(f"{name} must be nonnegative")


def snrs_from_levels(rho: float, levels: LinkLevels) -> SnrPoint:
    """Per-link SNRs rho**alpha from the nominal SNR (rho > 1)."""
    if rho <= 1.0:
        raise ValueError(f"nominal SNR must exceed 1, got {rho}")
    return SnrPoint(
        rho_dl=rho ** levels.alpha_dl,
        rho_ul=rho ** levels.alpha_ul,
        rho_i=rho ** levels.alpha_i,
        rho_s=rho ** levels.alpha_s,
    )


def _cn01(rng: np.random.Generator, rows: int, cols: int) -> np.ndarray:
    """i.i.d. circularly-symmetric complex Gaussian, unit variance per entry."""
    re = rng.standard_normal((rows, cols))
    im = rng.standard_normal((rows, cols))
    return (re + 1j * im) / np.sqrt(2.0)


def sample_rayleigh(antennas: AntennaConfig, rng: np.random.Generator) -> ChannelRealization:
    """One realization; draw order is fixed (dl, ul, i, s) for reproducibility."""
    return ChannelRealization(
        h_dl=_cn01(rng, antennas.n_dl, antennas.m_dl),
        h_ul=_cn01(rng, antennas.n_ul, antennas.m_ul),
        h_i=_cn01(rng, antennas.n_dl, antennas.m_ul),
        h_s=_cn01(rng, antennas.n_dl, antennas.m_ul),
    )


def sample_rayleigh_batch(antennas: AntennaConfig, rng: np.random.Generator, count: int):
    """Stacked realizations (count, n, m) per link, for vectorized Monte Carlo."""

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


def _require_hermitian(a: np.ndarray, tol: float = HERMITIAN_TOL) -> np.ndarray:
    asym = np.max(np.abs(a - a.conj().T)) if a.size else 0.0
    scale = max(1.0, float(np.max(np.abs(a))) if a.size else 1.0)
    if asym > tol * scale:
        raise ValueError(f"matrix is not Hermitian (asymmetry {asym:.3e})")
    return 0.5 * (a + a.conj().T)


def logdet_i_plus(a: np.ndarray) -> float:
    """log2 det(I + A) for Hermitian PSD A, via Cholesky of I + A."""
    a = _require_hermitian(np.asarray(a))
    n = a.shape[0]
    m = np.eye(n) + a
    try:
        chol = np.linalg.cholesky(m)
    except np.linalg.LinAlgError as exc:
        raise ValueError("I + A is not positive definite (A not PSD?)") from exc
    return float(2.0 * np.sum(np.log2(np.abs(np.diag(chol)))))


def solve_psd(a: np.ndarray, b: np.ndarray) -> np.ndarray:
    """A^{-1} B for Hermitian positive-definite A; refuses ill conditioning."""
    a = _require_hermitian(np.asarray(a))
    cond = np.linalg.cond(a)
    if not np.isfinite(cond) or cond > COND_LIMIT:
        raise np.linalg.LinAlgError(
            f"matrix condition number {cond:.3e} exceeds {COND_LIMIT:.0e}"
        )
    return np.linalg.solve(a, b)


def gram(h: np.ndarray) -> np.ndarray:
    """H H^dagger (receive-side Gram matrix)."""
    return h @ h.conj().T


def gram_t(h: np.ndarray) -> np.ndarray:
    """H^dagger H (transmit-side Gram matrix)."""
    return h.conj().T @ h
