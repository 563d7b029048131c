"""Covariance functions of the mean-curve estimators.

Exact Horvitz-Thompson covariance from the full population, the residual
covariance approximating the model-assisted estimator's covariance, and its
sample-only estimator.  Matrices are stored unscaled (no factor n); the
bands layer applies the sqrt(n)/n scalings.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .designs import (
    Sample,
    SamplingDesign,
    first_order_probs,
    joint_probs_submatrix,
    second_order_matrix,
)
from .errors import ValidationError
from .estimators import _sampled_beta, beta_population
from .grids import FunctionalPopulation


@dataclass(frozen=True, eq=False)
class CovarianceEstimate:
    """D x D symmetric matrix of covariance values at grid-point pairs."""

    matrix: np.ndarray
    kind: str  # HT_exact | MA_approx | MA_estimated

    @property
    def diagonal(self) -> np.ndarray:
        return np.diag(self.matrix)


def _ht_covariance_of(
    curves: np.ndarray, design: SamplingDesign
) -> np.ndarray:
    """(1/N^2) * u' Delta u with u_k = row_k / pi_k, Delta_kl = pi_kl - pi_k pi_l."""
    pi = first_order_probs(design)
    u = curves / pi[:, None]
    delta = second_order_matrix(design) - np.outer(pi, pi)
    cov = u.T @ delta @ u / design.N**2
    return 0.5 * (cov + cov.T)


def ht_covariance_exact(
    pop: FunctionalPopulation, design: SamplingDesign
) -> CovarianceEstimate:
    """Exact design covariance of the HT mean estimator at all grid pairs."""
    if design.N != pop.N:
        raise ValidationError("design and population sizes differ")
    return CovarianceEstimate(
        matrix=_ht_covariance_of(pop.values, design), kind="HT_exact"
    )


def ma_covariance_approx(
    pop: FunctionalPopulation, design: SamplingDesign
) -> CovarianceEstimate:
    """HT covariance of the census-fit residuals: the approximate covariance
    of the model-assisted estimator (exactly the covariance of the difference
    estimator)."""
    if design.N != pop.N:
        raise ValidationError("design and population sizes differ")
    beta = beta_population(pop)
    residuals = pop.values - pop.aux @ beta.coefficients
    return CovarianceEstimate(
        matrix=_ht_covariance_of(residuals, design), kind="MA_approx"
    )


def residual_ht_covariance_estimate(
    residuals: np.ndarray,
    pi: np.ndarray,
    pi2: np.ndarray,
    N: int,
) -> np.ndarray:
    """Sample HT covariance estimator for given per-unit residual rows.

    pi2 is the n x n matrix of joint inclusion probabilities of the sampled
    pairs (diagonal = pi_k); all entries must be positive.
    """
    if np.any(pi2 <= 0):
        raise ValidationError(
            "joint inclusion probability is zero for a sampled pair; "
            "the covariance estimator is undefined for this design"
        )
    weight = (pi2 - np.outer(pi, pi)) / pi2
    u = residuals / pi[:, None]
    cov = u.T @ weight @ u / N**2
    return 0.5 * (cov + cov.T)


def ma_covariance_estimate(
    pop: FunctionalPopulation,
    sample: Sample,
    a: float | None = 0.0,
) -> CovarianceEstimate:
    """Sample-only estimator of the model-assisted covariance.

    Fits the design-weighted regression on the sample, forms estimated
    residuals and plugs them into the HT covariance estimator.
    """
    if sample.design.N != pop.N:
        raise ValidationError("design and population sizes differ")
    idx = sample.indices
    pi = first_order_probs(sample.design)[idx]
    x_s = pop.aux[idx]
    y_s = pop.values[idx]
    beta = _sampled_beta(x_s, y_s, pi, pop.N, a)
    residuals = y_s - x_s @ beta.coefficients
    pi2 = joint_probs_submatrix(sample.design, idx)
    return CovarianceEstimate(
        matrix=residual_ht_covariance_estimate(residuals, pi, pi2, pop.N),
        kind="MA_estimated",
    )


def ht_covariance_estimate(
    pop: FunctionalPopulation, sample: Sample
) -> CovarianceEstimate:
    """Sample HT covariance estimator of the plain HT mean (raw curves)."""
    if sample.design.N != pop.N:
        raise ValidationError("design and population sizes differ")
    idx = sample.indices
    pi = first_order_probs(sample.design)[idx]
    pi2 = joint_probs_submatrix(sample.design, idx)
    return CovarianceEstimate(
        matrix=residual_ht_covariance_estimate(pop.values[idx], pi, pi2, pop.N),
        kind="HT_estimated",
    )
