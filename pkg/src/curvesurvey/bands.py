"""Simultaneous confidence bands via Gaussian-process simulation.

A centered Gaussian vector with the n-scaled estimated covariance is drawn
repeatedly; the (1 - alpha) quantile of the sup of |Z(t)| / sigma_hat(t)
gives the band constant c_alpha.
"""

from __future__ import annotations

from dataclasses import dataclass
from math import ceil

import numpy as np

from .covariance import CovarianceEstimate
from .errors import DegenerateVarianceError, ValidationError
from .estimators import MeanEstimate
from .linalg import cholesky_psd, psd_project


@dataclass(frozen=True, eq=False)
class ConfidenceBand:
    """Band center plus pointwise half-widths c_alpha * sigma_hat(t) / sqrt(n)."""

    center: np.ndarray
    half_width: np.ndarray
    c_alpha: float
    alpha: float
    n_sims: int
    seed: object = None


def _projected_cov_and_sigma(cov_scaled: np.ndarray):
    projected = psd_project(cov_scaled)
    diag = np.diag(projected)
    if np.any(diag <= 0.0):
        worst = int(np.argmin(diag))
        raise DegenerateVarianceError(
            f"estimated variance is not strictly positive at grid index "
            f"{worst} (value {diag[worst]:g}); no band can be built"
        )
    return projected, np.sqrt(diag)


def _sup_sample(
    cov_scaled: np.ndarray, n_sims: int, rng: np.random.Generator
) -> np.ndarray:
    projected, sigma = _projected_cov_and_sigma(cov_scaled)
    factor = cholesky_psd(projected)
    draws = rng.standard_normal((n_sims, projected.shape[0]))
    sups = np.abs(draws @ factor.T) / sigma
    return sups.max(axis=1)


def _quantile_order_statistic(sups: np.ndarray, alpha: float) -> float:
    # conservative empirical quantile: order statistic ceil((1-alpha)*n_sims)
    k = ceil((1.0 - alpha) * sups.size)
    return float(np.sort(sups)[k - 1])


def simulate_sup_quantile(
    cov: CovarianceEstimate | np.ndarray,
    alpha: float,
    n_sims: int,
    seed,
) -> float:
    """Band constant c_alpha from n_sims Gaussian draws.

    `cov` must already carry the n scaling (gamma_Z = n * gamma_hat).
    Deterministic given the seed.
    """
    if not 0.0 < alpha < 1.0:
        raise ValidationError("alpha must be in (0, 1)")
    if n_sims < 100:
        raise ValidationError("need at least 100 simulations")
    matrix = cov.matrix if isinstance(cov, CovarianceEstimate) else np.asarray(cov)
    rng = np.random.default_rng(seed)
    sups = _sup_sample(matrix, n_sims, rng)
    return _quantile_order_statistic(sups, alpha)


def build_band(
    estimate: MeanEstimate,
    cov: CovarianceEstimate,
    n: int,
    alpha: float,
    n_sims: int = 10_000,
    seed=None,
) -> ConfidenceBand:
    """Simultaneous band around an estimated mean curve.

    `cov` is the unscaled covariance estimate; sigma_hat(t) =
    sqrt(n * gamma_hat(t, t)), so the half-width reduces to
    c_alpha * sqrt(gamma_hat(t, t)).
    """
    if n < 1:
        raise ValidationError("sample size n must be >= 1")
    scaled = n * cov.matrix
    c_alpha = simulate_sup_quantile(scaled, alpha, n_sims, seed)
    _, sigma = _projected_cov_and_sigma(scaled)
    half_width = c_alpha * sigma / np.sqrt(n)
    return ConfidenceBand(
        center=np.asarray(estimate.curve, dtype=float),
        half_width=half_width,
        c_alpha=c_alpha,
        alpha=alpha,
        n_sims=n_sims,
        seed=seed,
    )


def contains(band: ConfidenceBand, truth: np.ndarray) -> bool:
    """True iff the band covers `truth` at every grid point (closed intervals)."""
    truth = np.asarray(truth, dtype=float)
    if truth.shape != band.center.shape:
        raise ValidationError(
            f"truth has length {truth.size}, band has {band.center.size}"
        )
    return bool(np.all(np.abs(truth - band.center) <= band.half_width))
