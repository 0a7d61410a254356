"""Local-asymptotics FIC and the post-selection limit experiment.

The wide parameter vector is split into protected slots (theta, in
every candidate) and open slots (gamma, toggled by the search; null
value zero).  With J the normalized wide information evaluated at the
wide MLE, partitioned conformably, the frame carries

    Q    = lower-right block of J^-1  (equivalently the inverse Schur
           complement J11 - J10 J00^-1 J01),
    omega = J10 J00^-1 dmu/dtheta - dmu/dgamma,
    tau0^2 = dmu/dtheta' J00^-1 dmu/dtheta,
    D_n  = sqrt(n) * gammahat_wide.

Candidate M maps to the oblique projection G_M = pi_M'(pi_M Q^-1
pi_M')^-1 pi_M Q^-1 (idempotent in the Q^-1 inner product, trace |M|),
and its estimated risk is

    fic_u(M) = { tau0^2 + omega' G_M Q G_M' omega
                 + omega'(G_M - I)(D D' - Q)(G_M - I)' omega } / n,

with the adjusted version truncating the final squared-bias estimate
at zero.  The limit law of any post-selection estimator with weights
w(M | D) is Lambda_0 + omega'(delta - sum_M w(M|D) G_M D), which
``simulate_post_selection`` draws from.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from scipy.special import ndtri

from . import families as fam
from ._linalg import SpdSolver, psd_sqrt
from .design import CandidateSpec
from .errors import ConfigError, NumericalError
from .fic_fixed import FicRecord
from .fit import FitResult, aic, bic
from .focus import FocusSpec, eval_focus


@dataclass(frozen=True)
class LocalFrame:
    """Wide-model decomposition for the local framework."""

    protected_idx: tuple[int, ...]
    open_idx: tuple[int, ...]
    J: np.ndarray
    Q: np.ndarray      # q x q
    Q_inv: np.ndarray  # Schur complement J11 - J10 J00^-1 J01
    omega: np.ndarray  # q
    tau0_sq: float
    D_n: np.ndarray    # q
    n: int
    mu_wide: float

    @property
    def q(self) -> int:
        return len(self.open_idx)


def build_local_frame(
    wide_fit: FitResult,
    focus: FocusSpec,
    point_index: int,
    protected_slots,
    wide_model: CandidateSpec,
) -> LocalFrame:
    """Partition the wide information and focus gradient.

    ``protected_slots`` indexes template slots (the intercept at least);
    the gaussian scale slot is always protected.  All matrices and
    derivatives are evaluated at the wide-model MLE.
    """
    protected = tuple(sorted(set(int(j) for j in protected_slots)))
    if not protected:
        raise ConfigError("at least one protected slot (the intercept) is required")
    d = wide_fit.n_params
    n_slots = len(wide_model.indicator)
    if any(not 0 <= j < n_slots for j in protected):
        raise ConfigError("protected slot index out of range")
    if fam.has_scale(wide_fit.family):
        protected = tuple(sorted(set(protected) | {d - 1}))
    open_idx = tuple(j for j in range(d) if j not in protected)
    if not open_idx:
        raise ConfigError("no open slots: the wide model equals the narrow model")

    fv = eval_focus(focus, point_index, wide_fit, wide_model)
    c_theta = fv.gradient[list(protected)]
    c_gamma = fv.gradient[list(open_idx)]

    J = wide_fit.obs_info
    J00 = J[np.ix_(protected, protected)]
    J01 = J[np.ix_(protected, open_idx)]
    J10 = J[np.ix_(open_idx, protected)]
    J11 = J[np.ix_(open_idx, open_idx)]

    solver00 = SpdSolver(J00, "protected information block J00")
    q_inv = J11 - J10 @ solver00.solve(J01)
    q_inv = 0.5 * (q_inv + q_inv.T)
    Q = SpdSolver(q_inv, "open-block precision Q^-1").solve(np.eye(len(open_idx)))
    Q = 0.5 * (Q + Q.T)

    omega = J10 @ solver00.solve(c_theta) - c_gamma
    tau0_sq = float(c_theta @ solver00.solve(c_theta))
    gamma_hat = wide_fit.theta_hat[list(open_idx)]
    D_n = np.sqrt(wide_fit.n) * gamma_hat

    return LocalFrame(
        protected_idx=protected,
        open_idx=open_idx,
        J=J,
        Q=Q,
        Q_inv=q_inv,
        omega=omega,
        tau0_sq=tau0_sq,
        D_n=D_n,
        n=wide_fit.n,
        mu_wide=fv.mu_hat,
    )


@dataclass(frozen=True)
class ProjectionG:
    subset: tuple[int, ...]
    G: np.ndarray


def projection_matrix(frame: LocalFrame, subset) -> ProjectionG:
    """G_M for a subset of open-slot positions (0-based within gamma).

    The solve runs in the unit-diagonal equilibration of Q^-1 so that
    wildly different covariate scales do not degrade the projection
    identities; only rows indexed by M are nonzero.
    """
    q = frame.q
    M = tuple(sorted(set(int(j) for j in subset)))
    if any(not 0 <= j < q for j in M):
        raise ConfigError(f"subset {M} out of range for q={q} open slots")
    if not M:
        return ProjectionG(M, np.zeros((q, q)))
    if len(M) == q:
        return ProjectionG(M, np.eye(q))
    S = frame.Q_inv
    s = np.sqrt(np.diag(S))
    S_t = S / s[:, None] / s[None, :]
    try:
        rows_t = np.linalg.solve(S_t[np.ix_(M, M)], S_t[list(M), :])
    except np.linalg.LinAlgError:
        raise NumericalError("singular pi_M Q^-1 pi_M' block") from None
    G = np.zeros((q, q))
    G[list(M), :] = rows_t / s[list(M), None] * s[None, :]
    return ProjectionG(M, G)


def candidate_subset(frame: LocalFrame, cand_model: CandidateSpec) -> tuple[int, ...]:
    """Open-slot positions that candidate's indicator switches on."""
    on = set(cand_model.on_slots)
    missing = [j for j in frame.protected_idx if j < len(cand_model.indicator) and j not in on]
    if missing:
        raise ConfigError(f"candidate omits protected slots {missing}")
    return tuple(k for k, j in enumerate(frame.open_idx) if j in on)


def fic_local_score(
    frame: LocalFrame,
    proj: ProjectionG,
    cand_fit: FitResult,
    cand_model: CandidateSpec,
    focus: FocusSpec,
    point_index: int = 0,
) -> FicRecord:
    """Score one candidate inside the local frame.

    The reported focus estimate comes from the candidate's own MLE fit;
    bias, variance, and the FIC scores come from the frame.
    """
    fv = eval_focus(focus, point_index, cand_fit, cand_model)
    n = frame.n
    omega = frame.omega
    G = proj.G
    q = frame.q
    v = G.T @ omega                 # for the variance quadratic form
    u = (G - np.eye(q)).T @ omega   # for the bias quadratic form

    var_term = (frame.tau0_sq + float(v @ frame.Q @ v)) / n
    bias_hat = -float(u @ frame.D_n) / np.sqrt(n)
    kappa_sq = float(u @ frame.Q @ u) / n
    sqbias_raw = bias_hat**2 - kappa_sq
    fic_u = var_term + sqbias_raw
    fic_adj = var_term + max(sqbias_raw, 0.0)
    return FicRecord(
        candidate=cand_model,
        mu_hat=fv.mu_hat,
        bias_hat=bias_hat,
        se=float(np.sqrt(var_term)),
        kappa_sq_over_n=kappa_sq,
        fic_u=fic_u,
        fic_adj=fic_adj,
        aic=aic(cand_fit),
        bic=bic(cand_fit),
    )


# ---------------------------------------------------------------------------
# Post-selection limit experiment
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class FixedModelScheme:
    """All weight on one candidate subset."""

    subset: tuple[int, ...]


@dataclass(frozen=True)
class ArgminFicScheme:
    """Indicator weight on the per-draw FIC minimizer."""

    subsets: tuple[tuple[int, ...], ...]
    adjusted: bool = True


@dataclass(frozen=True)
class ExponentialFicScheme:
    """Weights proportional to exp(-lam * fic_M / fic_wide), per draw."""

    subsets: tuple[tuple[int, ...], ...]
    lam: float = 1.0
    adjusted: bool = True


def _uniform_open(rng: np.random.Generator, shape) -> np.ndarray:
    """Uniforms strictly inside (0, 1) for inverse-CDF sampling."""
    return (rng.integers(0, 2**53, size=shape).astype(np.float64) + 0.5) / 2**53


def _normal(rng: np.random.Generator, shape) -> np.ndarray:
    return ndtri(_uniform_open(rng, shape))


def _limit_fic_scores(frame, gs, D, adjusted):
    """Per-draw limit-experiment FIC scores, one column per subset."""
    omega = frame.omega
    q = frame.q
    scores = np.empty((D.shape[0], len(gs)))
    for j, proj in enumerate(gs):
        v = proj.G.T @ omega
        u = (proj.G - np.eye(q)).T @ omega
        var_part = frame.tau0_sq + float(v @ frame.Q @ v)
        bias_part = (D @ u) ** 2 - float(u @ frame.Q @ u)
        if adjusted:
            bias_part = np.maximum(bias_part, 0.0)
        scores[:, j] = var_part + bias_part
    return scores


def simulate_post_selection(
    frame: LocalFrame,
    weight_scheme,
    delta: np.ndarray,
    draws: int,
    seed: int,
) -> np.ndarray:
    """Draw from the limit law of the post-selection focus estimator.

    Draws (Lambda_0, D) with Lambda_0 ~ N(0, tau0^2) and D ~ N_q(delta,
    Q), then returns Lambda_0 + omega'(delta - sum_M w(M|D) G_M D).
    Randomness comes from a PCG64 generator seeded with ``seed``;
    normals are produced by the inverse normal CDF applied to 53-bit
    uniforms, so identical seeds give identical samples on any platform.
    Partitioned (parallel) generation derives per-partition seeds with
    ``numpy.random.SeedSequence(seed).spawn``; the single-stream
    implementation here is the partition-count-one case.
    """
    delta = np.asarray(delta, dtype=float)
    q = frame.q
    if delta.shape != (q,):
        raise ConfigError(f"delta must have length q={q}")
    if draws < 1:
        raise ConfigError("draws must be positive")

    if isinstance(weight_scheme, FixedModelScheme):
        gs = [projection_matrix(frame, weight_scheme.subset)]
        weight_fn = None
        fixed = True
    elif isinstance(weight_scheme, (ArgminFicScheme, ExponentialFicScheme)):
        gs = [projection_matrix(frame, M) for M in weight_scheme.subsets]
        weight_fn = None
        fixed = False
    elif callable(weight_scheme):
        raise ConfigError(
            "callable weight schemes need an explicit subset list; "
            "use FixedModelScheme, ArgminFicScheme, or ExponentialFicScheme"
        )
    else:
        raise ConfigError(f"unsupported weight scheme {weight_scheme!r}")

    rng = np.random.Generator(np.random.PCG64(seed))
    z = _normal(rng, (draws, q + 1))
    lam0 = np.sqrt(frame.tau0_sq) * z[:, 0]
    root = psd_sqrt(frame.Q)
    D = delta[None, :] + z[:, 1:] @ root

    projections = np.column_stack([D @ (proj.G.T @ frame.omega) for proj in gs])

    if fixed:
        shift = projections[:, 0]
    elif isinstance(weight_scheme, ArgminFicScheme):
        scores = _limit_fic_scores(frame, gs, D, weight_scheme.adjusted)
        pick = np.argmin(scores, axis=1)
        shift = projections[np.arange(draws), pick]
    else:
        if weight_scheme.lam < 0:
            raise ConfigError("lambda must be nonnegative")
        scores = _limit_fic_scores(frame, gs, D, weight_scheme.adjusted)
        fic_wide = frame.tau0_sq + float(frame.omega @ frame.Q @ frame.omega)
        logw = -weight_scheme.lam * scores / fic_wide
        logw -= logw.max(axis=1, keepdims=True)
        w = np.exp(logw)
        w /= w.sum(axis=1, keepdims=True)
        if np.any(w < 0) or np.any(np.abs(w.sum(axis=1) - 1.0) > 1e-9):
            raise NumericalError("invalid model weights in simulation")
        shift = np.sum(w * projections, axis=1)

    return lam0 + float(frame.omega @ delta) - shift
