"""GLM families: poisson-log, binomial-logit, gaussian-identity.

Each family supplies the pieces the Newton fitter and the sandwich
machinery need: log-likelihood contributions, per-observation scores,
the normalized observed information, and the conditional response
variance used by the model-based (plug-in) second-moment matrices.

Parameter layout: regression coefficients in design-column order; the
gaussian family appends the ML scale sigma as one extra slot, last.
"""

from __future__ import annotations

import numpy as np
from scipy.special import expit, gammaln

from .errors import DataError

POISSON = "poisson-log"
BINOMIAL = "binomial-logit"
GAUSSIAN = "gaussian-identity"

FAMILIES = (POISSON, BINOMIAL, GAUSSIAN)


def check_family(tag: str) -> str:
    if tag not in FAMILIES:
        raise DataError(f"unknown family {tag!r}; expected one of {FAMILIES}")
    return tag


def validate_response(tag: str, y: np.ndarray) -> None:
    y = np.asarray(y)
    if tag == POISSON:
        if np.any(y < 0) or np.any(y != np.floor(y)):
            raise DataError("poisson-log requires nonnegative integer responses")
    elif tag == BINOMIAL:
        if not np.all((y == 0) | (y == 1)):
            raise DataError("binomial-logit requires responses in {0, 1}")


def has_scale(tag: str) -> bool:
    return tag == GAUSSIAN


def n_params(tag: str, n_coef: int) -> int:
    return n_coef + 1 if has_scale(tag) else n_coef


def mean(tag: str, eta: np.ndarray) -> np.ndarray:
    """Inverse link applied to the linear predictor."""
    if tag == POISSON:
        return np.exp(eta)
    if tag == BINOMIAL:
        return expit(eta)
    return eta


def mean_derivative(tag: str, eta: np.ndarray) -> np.ndarray:
    """d mean / d eta; for canonical links this is the variance function."""
    if tag == POISSON:
        return np.exp(eta)
    if tag == BINOMIAL:
        m = expit(eta)
        return m * (1.0 - m)
    return np.ones_like(eta)


def loglik(tag: str, y: np.ndarray, eta: np.ndarray, sigma: float | None = None) -> float:
    """Total log-likelihood, normalizing constants included."""
    if tag == POISSON:
        return float(np.sum(y * eta - np.exp(eta) - gammaln(y + 1.0)))
    if tag == BINOMIAL:
        # y*eta - log(1 + exp(eta)), computed stably
        return float(np.sum(y * eta - np.logaddexp(0.0, eta)))
    r = y - eta
    n = y.shape[0]
    return float(-0.5 * n * np.log(2.0 * np.pi) - n * np.log(sigma) - np.sum(r * r) / (2.0 * sigma**2))


def score_contribs(
    tag: str, X: np.ndarray, y: np.ndarray, eta: np.ndarray, sigma: float | None = None
) -> np.ndarray:
    """n x d matrix of per-observation score vectors."""
    if tag == GAUSSIAN:
        r = y - eta
        u_beta = (r / sigma**2)[:, None] * X
        u_sigma = -1.0 / sigma + r * r / sigma**3
        return np.column_stack([u_beta, u_sigma])
    return (y - mean(tag, eta))[:, None] * X


def observed_information(
    tag: str, X: np.ndarray, y: np.ndarray, eta: np.ndarray, sigma: float | None = None
) -> np.ndarray:
    """Normalized observed information: -(1/n) * Hessian of the log-likelihood."""
    n = X.shape[0]
    if tag == GAUSSIAN:
        r = y - eta
        d = X.shape[1]
        info = np.empty((d + 1, d + 1))
        info[:d, :d] = X.T @ X / (n * sigma**2)
        cross = 2.0 * (X.T @ r) / (n * sigma**3)
        info[:d, d] = cross
        info[d, :d] = cross
        info[d, d] = -1.0 / sigma**2 + 3.0 * np.sum(r * r) / (n * sigma**4)
        return info
    w = mean_derivative(tag, eta)
    info = (X.T * w) @ X / n
    return 0.5 * (info + info.T)


def wide_variance(tag: str, eta_wide: np.ndarray, sigma_wide: float | None = None) -> np.ndarray:
    """Conditional response variance under the wide model, per observation."""
    if tag == GAUSSIAN:
        return np.full_like(eta_wide, sigma_wide**2)
    return mean_derivative(tag, eta_wide)
