"""Design templates, candidate indicators, and design-matrix assembly.

A template fixes the wide model's column layout once and for all:
intercept first, main effects in covariate order, then pairwise
interactions in lexicographic pair order.  Candidates are 0/1 indicator
vectors over those slots; an interaction slot may only be switched on
when both parent main effects are on (hierarchy principle).
"""

from __future__ import annotations

from dataclasses import dataclass
from itertools import combinations

import numpy as np

from .dataset import Dataset
from .errors import ConfigError


@dataclass(frozen=True)
class Slot:
    kind: str  # "intercept" | "main" | "interaction"
    name: str
    parents: tuple[int, ...] = ()  # slot indices of the two parent mains


@dataclass(frozen=True)
class DesignTemplate:
    """Slot layout for the wide design matrix."""

    covariate_names: tuple[str, ...]
    slots: tuple[Slot, ...]

    @classmethod
    def main_effects(cls, covariate_names) -> "DesignTemplate":
        names = tuple(covariate_names)
        slots = [Slot("intercept", "1")]
        slots += [Slot("main", nm) for nm in names]
        return cls(names, tuple(slots))

    @classmethod
    def with_pairwise_interactions(cls, covariate_names) -> "DesignTemplate":
        names = tuple(covariate_names)
        slots = [Slot("intercept", "1")]
        slots += [Slot("main", nm) for nm in names]
        for a, b in combinations(range(len(names)), 2):
            slots.append(
                Slot("interaction", f"{names[a]}:{names[b]}", parents=(1 + a, 1 + b))
            )
        return cls(names, tuple(slots))

    @property
    def p(self) -> int:
        return len(self.slots)

    @property
    def n_main_section(self) -> int:
        """Slots before the interaction block (intercept + mains)."""
        return 1 + len(self.covariate_names)

    @property
    def protected_default(self) -> tuple[int, ...]:
        return (0,)

    def slot_names(self) -> tuple[str, ...]:
        return tuple(s.name for s in self.slots)

    def hierarchy_ok(self, indicator) -> bool:
        ind = tuple(int(v) for v in indicator)
        for j, slot in enumerate(self.slots):
            if slot.kind == "interaction" and ind[j] == 1:
                if any(ind[par] == 0 for par in slot.parents):
                    return False
        return True

    def indicator_string(self, indicator) -> str:
        """Render as the compact digit string, e.g. ``10010,000000``."""
        digits = "".join(str(int(v)) for v in indicator)
        k = self.n_main_section
        if k < len(digits):
            return digits[:k] + "," + digits[k:]
        return digits

    def parse_indicator(self, text: str) -> tuple[int, ...]:
        digits = text.replace(",", "")
        if len(digits) != self.p or set(digits) - {"0", "1"}:
            raise ConfigError(f"bad indicator string {text!r} for a {self.p}-slot template")
        return tuple(int(ch) for ch in digits)

    def design_row(self, covariate_row) -> np.ndarray:
        """Expand one covariate vector (length r) to a wide design row."""
        x = np.asarray(covariate_row, dtype=float)
        if x.shape != (len(self.covariate_names),):
            raise ConfigError(
                f"covariate row has length {x.shape}, expected {len(self.covariate_names)}"
            )
        row = np.empty(self.p)
        for j, slot in enumerate(self.slots):
            if slot.kind == "intercept":
                row[j] = 1.0
            elif slot.kind == "main":
                row[j] = x[self.covariate_names.index(slot.name)]
            else:
                a, b = slot.parents
                row[j] = row[a] * row[b]
        return row


@dataclass(frozen=True)
class CandidateSpec:
    """One model in the search set: indicator over template slots + family."""

    indicator: tuple[int, ...]
    family: str

    def __post_init__(self):
        object.__setattr__(self, "indicator", tuple(int(v) for v in self.indicator))
        if any(v not in (0, 1) for v in self.indicator):
            raise ConfigError("indicator entries must be 0 or 1")

    @property
    def on_slots(self) -> tuple[int, ...]:
        return tuple(j for j, v in enumerate(self.indicator) if v == 1)

    @property
    def n_on(self) -> int:
        return sum(self.indicator)

    def is_wide(self) -> bool:
        return all(v == 1 for v in self.indicator)


def wide_spec(template: DesignTemplate, family: str) -> CandidateSpec:
    return CandidateSpec(indicator=(1,) * template.p, family=family)


def build_design(
    dataset: Dataset, template: DesignTemplate, spec: CandidateSpec
) -> np.ndarray:
    """Assemble the n x p_M design matrix for one candidate.

    Interaction columns are elementwise products of the two parent
    main-effect columns.  A hierarchy violation (interaction on while a
    parent main effect is off) is rejected here, never silently fixed.
    """
    ind = spec.indicator
    if len(ind) != template.p:
        raise ConfigError(
            f"indicator length {len(ind)} does not match template slot count {template.p}"
        )
    for j in template.protected_default:
        if ind[j] != 1:
            raise ConfigError("protected slot (intercept) must be on in every candidate")
    if not template.hierarchy_ok(ind):
        raise ConfigError(
            f"hierarchy violation in {template.indicator_string(ind)}: "
            "interaction on without both parent main effects"
        )
    n = dataset.n
    cols = []
    for j in spec.on_slots:
        slot = template.slots[j]
        if slot.kind == "intercept":
            cols.append(np.ones(n))
        elif slot.kind == "main":
            cols.append(dataset.column(slot.name))
        else:
            a, b = slot.parents
            cols.append(
                dataset.column(template.slots[a].name) * dataset.column(template.slots[b].name)
            )
    return np.column_stack(cols)
