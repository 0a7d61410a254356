"""Maximum-likelihood fitting of candidate GLMs.

Newton-Raphson on the log-likelihood with step-halving: the step is
halved up to 30 times whenever the log-likelihood fails to increase.
Iteration starts at the zero vector (all three families have concave
log-likelihoods there); the gaussian family is solved exactly through
the normal equations instead.  Convergence is declared when the
relative log-likelihood change drops below 1e-12 or the sup-norm of
the score drops below 1e-9, within 100 iterations.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from . import families as fam
from .errors import (
    NonConvergenceError,
    NumericalError,
    RankDeficientError,
    SeparationError,
)

MAX_ITER = 100
MAX_HALVINGS = 30
LOGLIK_RTOL = 1e-12
SCORE_TOL = 1e-9
RANK_RTOL = 1e-9
SEPARATION_NORM = 1e3


@dataclass(frozen=True)
class FitResult:
    """MLE of one candidate model plus the quantities scoring needs.

    ``theta_hat`` lists the coefficients in design-column order; for
    gaussian-identity the ML scale estimate is appended last.
    ``obs_info`` is -(1/n) times the log-likelihood Hessian at the MLE,
    and ``score_contribs`` stacks per-observation score vectors whose
    column sums vanish at convergence.
    """

    theta_hat: np.ndarray
    loglik: float
    score_contribs: np.ndarray
    obs_info: np.ndarray
    converged: bool
    iterations: int
    family: str
    design: np.ndarray
    response: np.ndarray

    @property
    def n(self) -> int:
        return self.design.shape[0]

    @property
    def n_coef(self) -> int:
        return self.design.shape[1]

    @property
    def n_params(self) -> int:
        return self.theta_hat.shape[0]

    @property
    def coef(self) -> np.ndarray:
        """Regression coefficients (gaussian scale slot excluded)."""
        return self.theta_hat[: self.n_coef]

    @property
    def sigma(self) -> float | None:
        return float(self.theta_hat[-1]) if fam.has_scale(self.family) else None

    @property
    def eta(self) -> np.ndarray:
        return self.design @ self.coef


def check_full_rank(X: np.ndarray) -> None:
    s = np.linalg.svd(X, compute_uv=False)
    if s.size == 0 or s[0] == 0.0 or s[-1] < RANK_RTOL * s[0]:
        raise RankDeficientError(
            f"design matrix is rank deficient (singular values {s[-1]:.3e} vs {s[0]:.3e})"
        )


def _finish(family, X, y, theta, sigma, loglik, converged, iterations) -> FitResult:
    eta = X @ theta
    contribs = fam.score_contribs(family, X, y, eta, sigma)
    info = fam.observed_information(family, X, y, eta, sigma)
    theta_full = np.append(theta, sigma) if fam.has_scale(family) else np.asarray(theta, dtype=float)
    return FitResult(
        theta_hat=theta_full,
        loglik=loglik,
        score_contribs=contribs,
        obs_info=0.5 * (info + info.T),
        converged=converged,
        iterations=iterations,
        family=family,
        design=X,
        response=y,
    )


def _fit_gaussian(X: np.ndarray, y: np.ndarray) -> FitResult:
    gram = X.T @ X
    beta = np.linalg.solve(gram, X.T @ y)
    resid = y - X @ beta
    n = y.shape[0]
    sigma_sq = float(resid @ resid) / n
    if sigma_sq <= 0.0 or not np.isfinite(sigma_sq):
        raise NumericalError("zero or invalid residual variance in gaussian fit")
    sigma = float(np.sqrt(sigma_sq))
    ll = fam.loglik(fam.GAUSSIAN, y, X @ beta, sigma)
    return _finish(fam.GAUSSIAN, X, y, beta, sigma, ll, True, 1)


def fit_mle(design: np.ndarray, response: np.ndarray, family: str) -> FitResult:
    """Fit one candidate model by maximum likelihood.

    Raises ``RankDeficientError`` for a rank-deficient design,
    ``SeparationError`` when a logistic fit diverges (parameter sup-norm
    beyond 1e3), and ``NonConvergenceError`` after the iteration budget.
    """
    X = np.asarray(design, dtype=float)
    y = np.asarray(response, dtype=float)
    if X.ndim != 2 or y.ndim != 1 or X.shape[0] != y.shape[0]:
        raise NumericalError("design/response shape mismatch")
    fam.check_family(family)
    fam.validate_response(family, y)
    check_full_rank(X)
    if family == fam.GAUSSIAN:
        return _fit_gaussian(X, y)

    theta = np.zeros(X.shape[1])
    ll = fam.loglik(family, y, X @ theta)
    iterations = 0
    for iterations in range(1, MAX_ITER + 1):
        eta = X @ theta
        m = fam.mean(family, eta)
        score = X.T @ (y - m)
        w = fam.mean_derivative(family, eta)
        hess = (X.T * w) @ X
        try:
            step = np.linalg.solve(hess, score)
        except np.linalg.LinAlgError:
            raise NumericalError("singular information matrix during Newton iteration") from None

        t = 1.0
        new_theta = theta + step
        new_ll = fam.loglik(family, y, X @ new_theta)
        halvings = 0
        while (not np.isfinite(new_ll) or new_ll < ll) and halvings < MAX_HALVINGS:
            t *= 0.5
            halvings += 1
            new_theta = theta + t * step
            new_ll = fam.loglik(family, y, X @ new_theta)
        if not np.isfinite(new_ll):
            raise NumericalError("non-finite log-likelihood during Newton iteration")

        if family == fam.BINOMIAL and np.max(np.abs(new_theta)) > SEPARATION_NORM:
            raise SeparationError(
                "logistic fit diverged; data are (quasi-)separated"
            )

        rel_change = abs(new_ll - ll) / (1.0 + abs(new_ll))
        theta, ll = new_theta, new_ll
        if rel_change < LOGLIK_RTOL:
            break
        new_score = X.T @ (y - fam.mean(family, X @ theta))
        if np.max(np.abs(new_score)) < SCORE_TOL:
            break
    else:
        raise NonConvergenceError(f"no convergence after {MAX_ITER} Newton iterations")

    if family == fam.BINOMIAL:
        # Fitted probabilities within 1e-6 of every 0/1 label imply a
        # strictly separating hyperplane: the likelihood saturated on
        # separated data before the parameter norm could diverge.
        if np.max(np.abs(y - fam.mean(family, X @ theta))) < 1e-6:
            raise SeparationError("logistic fit is separated: fitted probabilities reach the data")

    return _finish(family, X, y, theta, None, ll, True, iterations)


def aic(fit: FitResult) -> float:
    """Akaike information criterion; counts every estimated parameter."""
    return -2.0 * fit.loglik + 2.0 * fit.n_params


def bic(fit: FitResult, n: int | None = None) -> float:
    """Bayesian information criterion with natural-log sample-size penalty."""
    n = fit.n if n is None else n
    return -2.0 * fit.loglik + np.log(n) * fit.n_params
