"""Candidate enumeration, search orchestration, and model averaging."""

from __future__ import annotations

from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field

import numpy as np

from .afic import AficRecord, afic_scores
from .dataset import Dataset
from .design import CandidateSpec, DesignTemplate, build_design, wide_spec
from .errors import ConfigError, FicselError, NumericalError
from .fic_fixed import FicRecord, fic_fixed_score
from .fic_local import build_local_frame, candidate_subset, fic_local_score, projection_matrix
from .fit import fit_mle
from .focus import FocusSpec

CRITERIA = ("fic_adj", "fic_u", "afic_adj", "afic_u")
ENUMERATION_LIMIT = 10**6


@dataclass(frozen=True)
class SearchConfig:
    """Everything a search needs besides the dataset and the focus."""

    template: DesignTemplate
    family: str
    protected: tuple[int, ...] = (0,)
    hierarchy: bool = True
    framework: str = "fixed"
    criterion: str = "fic_adj"
    candidates: tuple[str, ...] | None = None  # indicator strings; overrides enumeration
    matrix_path: str = "model"
    point_index: int = 0
    jobs: int = 1
    allow_huge: bool = False

    def __post_init__(self):
        if self.framework not in ("fixed", "local"):
            raise ConfigError(f"unknown framework {self.framework!r}")
        if self.criterion not in CRITERIA:
            raise ConfigError(f"unknown criterion {self.criterion!r}; expected one of {CRITERIA}")
        if 0 not in self.protected:
            raise ConfigError("the intercept slot must be protected")

    @property
    def averaged(self) -> bool:
        return self.criterion.startswith("afic")


@dataclass(frozen=True)
class FitFailure:
    candidate: CandidateSpec
    indicator: str
    reason: str


@dataclass
class RankingResult:
    """Ranked records plus the selection and any fit failures."""

    records: list  # FicRecord | AficRecord, sorted by the configured criterion
    selected: CandidateSpec
    criterion: str
    framework: str
    failures: list[FitFailure] = field(default_factory=list)

    def record_for(self, indicator: tuple[int, ...]):
        for rec in self.records:
            if rec.candidate.indicator == tuple(indicator):
                return rec
        raise KeyError(f"no record for indicator {indicator}")


def enumerate_candidates(config: SearchConfig) -> list[CandidateSpec]:
    """All indicator vectors containing the protected mask.

    With the hierarchy flag on, candidates whose interaction slots lack
    a parent main effect are dropped.  Order is deterministic: ascending
    number of on slots, then lexicographic indicator string.
    """
    template = config.template
    if config.candidates is not None:
        specs = [
            CandidateSpec(template.parse_indicator(s), config.family)
            for s in config.candidates
        ]
        for spec in specs:
            _validate_candidate(template, config, spec)
        return specs

    open_slots = [j for j in range(template.p) if j not in config.protected]
    if len(open_slots) > 20 and not config.allow_huge:
        raise ConfigError(
            f"enumeration over {len(open_slots)} open slots exceeds the "
            f"{ENUMERATION_LIMIT} candidate guard; pass allow_huge to override"
        )
    total = 2 ** len(open_slots)
    if total > ENUMERATION_LIMIT and not config.allow_huge:
        raise ConfigError(
            f"{total} candidates exceed the {ENUMERATION_LIMIT} guard; "
            "pass allow_huge to override"
        )
    specs = []
    for mask in range(total):
        ind = [0] * template.p
        for j in config.protected:
            ind[j] = 1
        for k, j in enumerate(open_slots):
            if mask >> k & 1:
                ind[j] = 1
        if config.hierarchy and not template.hierarchy_ok(ind):
            continue
        specs.append(CandidateSpec(tuple(ind), config.family))
    specs.sort(key=lambda s: (s.n_on, template.indicator_string(s.indicator)))
    return specs


def _validate_candidate(template, config, spec):
    if len(spec.indicator) != template.p:
        raise ConfigError("candidate indicator length does not match the template")
    for j in config.protected:
        if spec.indicator[j] != 1:
            raise ConfigError(
                f"candidate {template.indicator_string(spec.indicator)} drops a protected slot"
            )
    if config.hierarchy and not template.hierarchy_ok(spec.indicator):
        raise ConfigError(
            f"candidate {template.indicator_string(spec.indicator)} violates the hierarchy principle"
        )


def _rank(records, key, attr):
    order = sorted(
        range(len(records)),
        key=lambda i: (
            key(records[i]),
            records[i].candidate.n_on,
            records[i].candidate.indicator,
        ),
    )
    for rank, i in enumerate(order, start=1):
        setattr(records[i], attr, rank)
    return order


def run_search(dataset: Dataset, config: SearchConfig, focus: FocusSpec) -> RankingResult:
    """Fit and score every candidate, then rank by the configured criterion.

    Candidates whose fit fails are reported in ``failures`` with the
    reason and excluded from the ranking; a wide-model failure aborts.
    """
    template = config.template
    wide = wide_spec(template, config.family)
    try:
        wide_fit = fit_mle(build_design(dataset, template, wide), dataset.response, config.family)
    except FicselError as exc:
        raise NumericalError(f"wide model fit failed: {exc}") from exc

    candidates = enumerate_candidates(config)

    def fit_one(spec):
        try:
            X = build_design(dataset, template, spec)
            return fit_mle(X, dataset.response, config.family), None
        except FicselError as exc:
            return None, f"{type(exc).__name__}: {exc}"

    if config.jobs > 1:
        with ThreadPoolExecutor(max_workers=config.jobs) as pool:
            outcomes = list(pool.map(fit_one, candidates))
    else:
        outcomes = [fit_one(spec) for spec in candidates]

    failures = []
    fitted = []
    for model_id, (spec, (fit, err)) in enumerate(zip(candidates, outcomes), start=1):
        if fit is None:
            failures.append(
                FitFailure(spec, template.indicator_string(spec.indicator), err)
            )
        else:
            fitted.append((model_id, spec, fit))

    if not fitted:
        raise NumericalError("every candidate fit failed")

    if config.averaged:
        records = afic_scores(
            wide_fit,
            [f for _, _, f in fitted],
            wide,
            [s for _, s, _ in fitted],
            focus,
            framework=config.framework,
            protected_slots=config.protected,
            path=config.matrix_path,
        )
    elif config.framework == "fixed":
        records = [
            fic_fixed_score(
                wide_fit, fit, wide, spec, focus, config.point_index, path=config.matrix_path
            )
            for _, spec, fit in fitted
        ]
    else:
        frame = build_local_frame(wide_fit, focus, config.point_index, config.protected, wide)
        records = [
            fic_local_score(
                frame,
                projection_matrix(frame, candidate_subset(frame, spec)),
                fit,
                spec,
                focus,
                config.point_index,
            )
            for _, spec, fit in fitted
        ]

    for (model_id, _, _), rec in zip(fitted, records):
        rec.model_id = model_id

    order = _rank(records, lambda r: r.criterion_value(config.criterion), "rank_fic")
    _rank(records, lambda r: r.aic, "rank_aic")
    _rank(records, lambda r: r.bic, "rank_bic")
    ranked = [records[i] for i in order]
    return RankingResult(
        records=ranked,
        selected=ranked[0].candidate,
        criterion=config.criterion,
        framework=config.framework,
        failures=failures,
    )


def model_average_weights(records, lam: float, criterion: str = "fic_adj"):
    """Exponential FIC weights w_M proportional to exp(-lam fic_M / fic_wide).

    Returns the normalized weight vector (in record order) and the
    weighted focus estimate.
    """
    if lam < 0:
        raise ConfigError("lambda must be nonnegative")
    fic_wide = None
    for rec in records:
        if rec.candidate.is_wide():
            fic_wide = rec.criterion_value(criterion)
    if fic_wide is None:
        raise ConfigError("records must include the wide model")
    if not fic_wide > 0:
        raise ConfigError("wide-model criterion value must be positive")
    scores = np.array([rec.criterion_value(criterion) for rec in records], dtype=float)
    logw = -lam * scores / fic_wide
    logw -= logw.max()
    w = np.exp(logw)
    w /= w.sum()
    mus = np.array(
        [rec.avg_focus if isinstance(rec, AficRecord) else rec.mu_hat for rec in records]
    )
    return w, float(w @ mus)
