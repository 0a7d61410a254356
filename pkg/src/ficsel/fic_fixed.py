"""Fixed-wide-model FIC scores.

The wide model is taken as the data-generating mechanism.  For a
candidate M with MLE gradient c_M, the estimated mean squared error of
its focus estimator combines the sandwich variance

    se_M^2 = c_M' J_M^-1 K_M J_M^-1 c_M / n,

the plug-in bias b_M = mu_M - mu_wide, and the variance kappa_M^2/n of
that bias estimate implied by the joint normal approximation to
(mu_wide, mu_M):

    kappa_M^2/n = c' J^-1 c / n + c_M' J_M^-1 K_M J_M^-1 c_M / n
                  - 2 c' J^-1 C_M J_M^-1 c_M / n.

The unbiased score is se^2 + b^2 - kappa^2/n; the adjusted score
truncates the squared-bias estimate at zero.  The wide model itself is
scored as c' J^-1 c / n with zero bias.

Two routes to the second-moment matrices K_M and C_M are provided:

* ``model``      wide-model plug-in ("expected information") closed
                 forms, e.g. K_M = (1/n) sum_i vhat_i x_Mi x_Mi' with
                 vhat_i the wide conditional response variance.  For
                 gaussian models with linear foci this route makes the
                 fixed and local frameworks agree exactly, and it is
                 the default.
* ``empirical``  uncentered outer products of observed per-observation
                 scores, K_M = (1/n) sum_i uhat_Mi uhat_Mi'.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from . import families as fam
from ._linalg import SpdSolver
from .design import CandidateSpec
from .errors import ConfigError
from .fit import FitResult, aic, bic
from .focus import FocusSpec, eval_focus

MATRIX_PATHS = ("model", "empirical")


@dataclass(frozen=True)
class SandwichSet:
    """Normalized information and score second-moment matrices."""

    J_hat: np.ndarray    # p x p, wide observed information / n
    J_M_hat: np.ndarray  # p_M x p_M, candidate observed information / n
    K_M_hat: np.ndarray  # p_M x p_M
    C_M_hat: np.ndarray  # p x p_M
    path: str


@dataclass
class FicRecord:
    """Per-candidate scoring result on the focus scale."""

    candidate: CandidateSpec
    mu_hat: float
    bias_hat: float
    se: float
    kappa_sq_over_n: float
    fic_u: float
    fic_adj: float
    aic: float
    bic: float
    kappa_clipped: bool = False
    model_id: int = 0
    rank_fic: int = 0
    rank_aic: int = 0
    rank_bic: int = 0

    @property
    def rmse(self) -> float:
        return float(np.sqrt(self.fic_adj))

    @property
    def rmse_u(self) -> float:
        return float(np.sqrt(max(self.fic_u, 0.0)))

    @property
    def sqbias_raw(self) -> float:
        """Unbiased squared-bias estimate (may be negative)."""
        return self.bias_hat**2 - self.kappa_sq_over_n

    @property
    def bias_adj(self) -> float:
        """Signed bias estimate after truncating its square at zero."""
        mag_sq = max(self.sqbias_raw, 0.0)
        return float(np.copysign(np.sqrt(mag_sq), self.bias_hat))

    @property
    def variance(self) -> float:
        return self.se**2

    def criterion_value(self, name: str) -> float:
        if name == "fic_adj":
            return self.fic_adj
        if name == "fic_u":
            return self.fic_u
        raise ConfigError(f"unknown criterion {name!r} for single-point FIC records")


def _model_based_kc(wide_fit: FitResult, cand_fit: FitResult):
    """Closed-form K_M and C_M with wide-model plug-ins.

    For poisson and binomial these are the textbook weighted
    cross-product matrices with weights equal to the wide conditional
    variance.  The gaussian blocks involving the scale slot use exact
    normal moments with the wide scale and the candidate's mean offsets.
    """
    X = wide_fit.design
    XM = cand_fit.design
    n = X.shape[0]
    vhat = fam.wide_variance(
        wide_fit.family, wide_fit.eta, wide_fit.sigma
    )
    if not fam.has_scale(wide_fit.family):
        K = (XM.T * vhat) @ XM / n
        C = (X.T * vhat) @ XM / n
        return 0.5 * (K + K.T), C

    s_w = wide_fit.sigma
    s_m = cand_fit.sigma
    d = wide_fit.eta - cand_fit.eta  # candidate mean offsets under the wide model
    pm = XM.shape[1]
    p = X.shape[1]
    K = np.empty((pm + 1, pm + 1))
    K[:pm, :pm] = (s_w**2 / s_m**4) * (XM.T @ XM) / n
    k_cross = (XM.T @ (2.0 * d * s_w**2)) / (n * s_m**5)
    K[:pm, pm] = k_cross
    K[pm, :pm] = k_cross
    K[pm, pm] = float(np.sum(4.0 * d * d * s_w**2 + 2.0 * s_w**4)) / (n * s_m**6)
    C = np.empty((p + 1, pm + 1))
    C[:p, :pm] = (X.T @ XM) / (n * s_m**2)
    C[:p, pm] = (X.T @ (2.0 * d)) / (n * s_m**3)
    C[p, :pm] = 0.0
    C[p, pm] = 2.0 * s_w / s_m**3
    return 0.5 * (K + K.T), C


def sandwich_matrices(
    wide_fit: FitResult, cand_fit: FitResult, path: str = "model"
) -> SandwichSet:
    """Assemble J, J_M, K_M, C_M for one (wide, candidate) pair.

    Both fits must come from the same dataset rows in the same order.
    """
    if path not in MATRIX_PATHS:
        raise ConfigError(f"unknown matrix path {path!r}; expected one of {MATRIX_PATHS}")
    if wide_fit.n != cand_fit.n:
        raise ConfigError("wide and candidate fits disagree on the number of rows")
    n = wide_fit.n
    if path == "empirical":
        U_w = wide_fit.score_contribs
        U_m = cand_fit.score_contribs
        K = U_m.T @ U_m / n
        C = U_w.T @ U_m / n
        K = 0.5 * (K + K.T)
    else:
        K, C = _model_based_kc(wide_fit, cand_fit)
    return SandwichSet(
        J_hat=wide_fit.obs_info,
        J_M_hat=cand_fit.obs_info,
        K_M_hat=K,
        C_M_hat=C,
        path=path,
    )


def fic_fixed_score(
    wide_fit: FitResult,
    cand_fit: FitResult,
    wide_model: CandidateSpec,
    cand_model: CandidateSpec,
    focus: FocusSpec,
    point_index: int = 0,
    path: str = "model",
) -> FicRecord:
    """Score one candidate against the wide model at one focus point."""
    fv_wide = eval_focus(focus, point_index, wide_fit, wide_model)
    fv_cand = eval_focus(focus, point_index, cand_fit, cand_model)
    n = wide_fit.n

    J = SpdSolver(wide_fit.obs_info, "wide information matrix J")
    c = fv_wide.gradient
    jc = J.solve(c)
    var_wide = float(c @ jc) / n

    if cand_model.is_wide():
        # Wide scored as its own candidate: zero bias, J-based variance.
        return FicRecord(
            candidate=cand_model,
            mu_hat=fv_cand.mu_hat,
            bias_hat=0.0,
            se=float(np.sqrt(var_wide)),
            kappa_sq_over_n=0.0,
            fic_u=var_wide,
            fic_adj=var_wide,
            aic=aic(cand_fit),
            bic=bic(cand_fit),
        )

    sw = sandwich_matrices(wide_fit, cand_fit, path=path)
    JM = SpdSolver(sw.J_M_hat, "candidate information matrix J_M")
    c_m = fv_cand.gradient
    jm_cm = JM.solve(c_m)
    var_cand = float(jm_cm @ sw.K_M_hat @ jm_cm) / n
    cov = float(jc @ sw.C_M_hat @ jm_cm) / n

    kappa_sq = var_wide + var_cand - 2.0 * cov
    clipped = kappa_sq < 0.0
    kappa_sq = max(kappa_sq, 0.0)

    bias = fv_cand.mu_hat - fv_wide.mu_hat
    sqbias_raw = bias**2 - kappa_sq
    fic_u = var_cand + sqbias_raw
    fic_adj = var_cand + max(sqbias_raw, 0.0)
    return FicRecord(
        candidate=cand_model,
        mu_hat=fv_cand.mu_hat,
        bias_hat=bias,
        se=float(np.sqrt(var_cand)),
        kappa_sq_over_n=kappa_sq,
        fic_u=fic_u,
        fic_adj=fic_adj,
        aic=aic(cand_fit),
        bic=bic(cand_fit),
        kappa_clipped=clipped,
    )
