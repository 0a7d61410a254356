"""Focus parameters: scalar functions of model parameters and their gradients.

Four built-in kinds:

* ``linear-predictor``   mu = v' beta for a wide-design row v
* ``mean-response``      mu = invlink(v' beta)
* ``exceedance``         mu = P(Y > y0 | v), count/binary families only
* ``coefficient-combination``  mu = w' beta for a weight vector w over slots

A candidate model evaluates the same mu with its off-slot coefficients
fixed at zero, which amounts to using only the on-slot entries of the
evaluation point.  Gradients are analytic where the kind permits and
central finite differences otherwise, with steps 1e-6 * (1 + |theta_j|).
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np
from scipy.special import expit, gammaln

from . import families as fam
from .design import CandidateSpec
from .errors import ConfigError, NumericalError
from .fit import FitResult

KINDS = ("linear-predictor", "mean-response", "exceedance", "coefficient-combination")

FD_SCALE = 1e-6


@dataclass(frozen=True)
class FocusSpec:
    """A focus kind, its evaluation points, and point weights.

    ``eval_points`` has one row per focus point, each of wide-design
    width (coefficient-combination rows live in coefficient space, the
    other kinds in design space; the arithmetic is the same).  The
    nonnegative ``weights`` carry the relative importance measure used
    by the averaged criterion.
    """

    kind: str
    eval_points: np.ndarray
    weights: np.ndarray = field(default=None)
    threshold: float | None = None

    def __post_init__(self):
        if self.kind not in KINDS:
            raise ConfigError(f"unknown focus kind {self.kind!r}; expected one of {KINDS}")
        pts = np.atleast_2d(np.asarray(self.eval_points, dtype=float))
        object.__setattr__(self, "eval_points", pts)
        w = self.weights
        w = np.ones(pts.shape[0]) if w is None else np.asarray(w, dtype=float)
        if w.shape != (pts.shape[0],):
            raise ConfigError("weights must have one entry per evaluation point")
        if np.any(w < 0) or not w.sum() > 0:
            raise ConfigError("weights must be nonnegative with positive sum")
        object.__setattr__(self, "weights", w)
        if self.kind == "exceedance" and self.threshold is None:
            raise ConfigError("exceedance focus requires a threshold")

    @property
    def k(self) -> int:
        return self.eval_points.shape[0]

    def normalized_weights(self) -> np.ndarray:
        return self.weights / self.weights.sum()


@dataclass(frozen=True)
class FocusValue:
    mu_hat: float
    gradient: np.ndarray  # length of the model's full parameter vector


def poisson_tail(threshold: float, lam: float) -> float:
    """P(Y > threshold) for Y ~ Poisson(lam).

    Computed as one minus the head sum of probability masses, added in
    ascending magnitude order for reproducible rounding; no
    incomplete-gamma routine involved.
    """
    kmax = int(np.floor(threshold))
    if kmax < 0:
        return 1.0
    ks = np.arange(kmax + 1, dtype=float)
    log_terms = ks * np.log(lam) - lam - gammaln(ks + 1.0)
    terms = np.sort(np.exp(log_terms))
    head = float(np.sum(terms))
    return float(min(max(1.0 - head, 0.0), 1.0))


def _check_point(spec: FocusSpec, point_index: int, width: int) -> np.ndarray:
    if not 0 <= point_index < spec.k:
        raise ConfigError(f"point index {point_index} out of range for {spec.k} points")
    v = spec.eval_points[point_index]
    if v.shape != (width,):
        raise ConfigError(
            f"evaluation point width {v.shape[0]} does not match wide design width {width}"
        )
    return v


def _mu_of_coef(spec: FocusSpec, v_on: np.ndarray, family: str):
    """Return mu as a function of the candidate's coefficient vector."""
    kind = spec.kind
    if kind in ("linear-predictor", "coefficient-combination"):
        return lambda beta: float(v_on @ beta)
    if kind == "mean-response":
        return lambda beta: float(fam.mean(family, np.atleast_1d(v_on @ beta))[0])
    if family == fam.GAUSSIAN:
        raise ConfigError("exceedance focus is not defined for the gaussian family")
    y0 = spec.threshold
    if family == fam.POISSON:
        return lambda beta: poisson_tail(y0, float(np.exp(v_on @ beta)))
    # binary response: P(Y > y0) is P(Y = 1) below 1 and zero at or above
    if y0 >= 1.0:
        return lambda beta: 0.0
    return lambda beta: float(expit(v_on @ beta))


def _analytic_gradient(spec: FocusSpec, v_on: np.ndarray, beta: np.ndarray, family: str):
    if spec.kind in ("linear-predictor", "coefficient-combination"):
        return v_on.copy()
    if spec.kind == "mean-response":
        eta = float(v_on @ beta)
        return float(fam.mean_derivative(family, np.atleast_1d(eta))[0]) * v_on
    return None


def _fd_gradient(mu, beta: np.ndarray, scale: float = FD_SCALE) -> np.ndarray:
    grad = np.empty_like(beta)
    for j in range(beta.shape[0]):
        h = scale * (1.0 + abs(beta[j]))
        hi = beta.copy()
        lo = beta.copy()
        hi[j] += h
        lo[j] -= h
        grad[j] = (mu(hi) - mu(lo)) / (2.0 * h)
    return grad


def eval_focus(
    spec: FocusSpec, point_index: int, fit: FitResult, spec_of_model: CandidateSpec
) -> FocusValue:
    """Evaluate the focus and its gradient at the model's MLE.

    The gradient is reported over the model's full parameter vector; the
    gaussian scale slot never enters any built-in focus, so its entry is
    zero.
    """
    on = spec_of_model.on_slots
    width = len(spec_of_model.indicator)
    v = _check_point(spec, point_index, width)
    v_on = v[list(on)]
    if len(on) != fit.n_coef:
        raise ConfigError("candidate indicator does not match the fitted design width")
    beta = fit.coef
    mu = _mu_of_coef(spec, v_on, fit.family)
    mu_hat = mu(beta)
    grad = _analytic_gradient(spec, v_on, beta, fit.family)
    if grad is None:
        grad = _fd_gradient(mu, beta)
    if fam.has_scale(fit.family):
        grad = np.append(grad, 0.0)
    if not np.all(np.isfinite(grad)):
        raise NumericalError("non-finite focus gradient")
    return FocusValue(mu_hat=float(mu_hat), gradient=grad)


def focus_gradient_check(
    spec: FocusSpec, point_index: int, fit: FitResult, spec_of_model: CandidateSpec
) -> float:
    """Max relative discrepancy between gradient routes.

    Analytic kinds are checked against central differences; the
    exceedance kind, having no analytic route, is checked for
    finite-difference self-consistency at two step sizes.
    """
    on = spec_of_model.on_slots
    v = _check_point(spec, point_index, len(spec_of_model.indicator))
    v_on = v[list(on)]
    beta = fit.coef
    mu = _mu_of_coef(spec, v_on, fit.family)
    ref = _analytic_gradient(spec, v_on, beta, fit.family)
    if ref is None:
        ref = _fd_gradient(mu, beta, scale=FD_SCALE)
        other = _fd_gradient(mu, beta, scale=FD_SCALE / 2.0)
    else:
        other = _fd_gradient(mu, beta)
    return float(np.max(np.abs(ref - other) / (1.0 + np.abs(ref))))
