"""Averaged FIC over a weighted ensemble of focus points.

Per point v the framework supplies a variance term and an unbiased
squared-bias term b(v)^2 - kappa(v)^2/n.  Both are weight-summed across
points (weights normalized to sum one), and truncation at zero is
applied only to the aggregated bias term, so the averaged criterion is
not the average of the per-point adjusted criteria.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .design import CandidateSpec
from .errors import ConfigError
from .fic_fixed import fic_fixed_score
from .fic_local import build_local_frame, candidate_subset, fic_local_score, projection_matrix
from .fit import FitResult, aic, bic
from .focus import FocusSpec


@dataclass
class AficRecord:
    """Aggregated scoring result for one candidate."""

    candidate: CandidateSpec
    avg_variance: float
    avg_sqbias_raw: float
    afic_u: float
    afic_adj: float
    avg_focus: float
    aic: float
    bic: float
    model_id: int = 0
    rank_fic: int = 0
    rank_aic: int = 0
    rank_bic: int = 0

    @property
    def rmse(self) -> float:
        return float(np.sqrt(self.afic_adj))

    @property
    def rmse_u(self) -> float:
        return float(np.sqrt(max(self.afic_u, 0.0)))

    @property
    def bias_adj(self) -> float:
        """Aggregate bias magnitude after truncation (sign is undefined)."""
        return float(np.sqrt(max(self.avg_sqbias_raw, 0.0)))

    def criterion_value(self, name: str) -> float:
        if name in ("afic_adj", "fic_adj"):
            return self.afic_adj
        if name in ("afic_u", "fic_u"):
            return self.afic_u
        raise ConfigError(f"unknown criterion {name!r} for averaged records")


def _point_scores_fixed(wide_fit, cand_fit, wide_model, cand_model, focus, path):
    for i in range(focus.k):
        rec = fic_fixed_score(wide_fit, cand_fit, wide_model, cand_model, focus, i, path=path)
        yield rec.variance, rec.sqbias_raw, rec.mu_hat


def afic_scores(
    wide_fit: FitResult,
    cand_fits: list[FitResult],
    wide_model: CandidateSpec,
    cand_models: list[CandidateSpec],
    focus: FocusSpec,
    framework: str = "fixed",
    protected_slots=(0,),
    path: str = "model",
) -> list[AficRecord]:
    """Aggregate per-point FIC ingredients for every candidate.

    ``framework`` selects the per-point machinery ("fixed" or "local");
    weights are normalized internally, so rescaling them all by a
    positive constant changes nothing.
    """
    if focus.k < 1:
        raise ConfigError("averaged scoring needs at least one focus point")
    if framework not in ("fixed", "local"):
        raise ConfigError(f"unknown framework {framework!r}")
    wts = focus.normalized_weights()

    frames = None
    if framework == "local":
        frames = [
            build_local_frame(wide_fit, focus, i, protected_slots, wide_model)
            for i in range(focus.k)
        ]

    records = []
    for cand_fit, cand_model in zip(cand_fits, cand_models):
        variances = np.empty(focus.k)
        raws = np.empty(focus.k)
        mus = np.empty(focus.k)
        if framework == "fixed":
            for i, (v, r, m) in enumerate(
                _point_scores_fixed(wide_fit, cand_fit, wide_model, cand_model, focus, path)
            ):
                variances[i], raws[i], mus[i] = v, r, m
        else:
            proj = projection_matrix(frames[0], candidate_subset(frames[0], cand_model))
            for i, frame in enumerate(frames):
                rec = fic_local_score(frame, proj, cand_fit, cand_model, focus, i)
                variances[i], raws[i], mus[i] = rec.variance, rec.sqbias_raw, rec.mu_hat
        avg_var = float(wts @ variances)
        avg_raw = float(wts @ raws)
        records.append(
            AficRecord(
                candidate=cand_model,
                avg_variance=avg_var,
                avg_sqbias_raw=avg_raw,
                afic_u=avg_var + avg_raw,
                afic_adj=avg_var + max(avg_raw, 0.0),
                avg_focus=float(wts @ mus),
                aic=aic(cand_fit),
                bic=bic(cand_fit),
            )
        )
    return records
