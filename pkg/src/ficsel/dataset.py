"""Immutable dataset container and CSV ingestion."""

from __future__ import annotations

import csv
from dataclasses import dataclass, field
from importlib import resources

import numpy as np

from .errors import DataError


@dataclass(frozen=True)
class Dataset:
    """A response vector plus named covariate columns.

    Every pipeline in this package treats the dataset as read-only;
    concurrent fits may share one instance freely.
    """

    response: np.ndarray
    covariates: np.ndarray
    covariate_names: tuple[str, ...]
    row_ids: tuple[str, ...] = field(default=())

    def __post_init__(self):
        y = np.asarray(self.response, dtype=float)
        x = np.asarray(self.covariates, dtype=float)
        object.__setattr__(self, "response", y)
        object.__setattr__(self, "covariates", x)
        if y.ndim != 1:
            raise DataError("response must be a vector")
        if x.ndim != 2 or x.shape[0] != y.shape[0]:
            raise DataError("covariates must be an n x r matrix matching the response")
        if y.shape[0] < 2:
            raise DataError("need at least 2 observations")
        if not np.all(np.isfinite(y)) or not np.all(np.isfinite(x)):
            raise DataError("missing or non-finite values are not allowed")
        if len(self.covariate_names) != x.shape[1]:
            raise DataError("covariate_names must match the number of columns")
        if len(set(self.covariate_names)) != len(self.covariate_names):
            raise DataError("covariate names must be unique")
        if not self.row_ids:
            object.__setattr__(
                self, "row_ids", tuple(str(i + 1) for i in range(y.shape[0]))
            )
        elif len(self.row_ids) != y.shape[0]:
            raise DataError("row_ids must match the number of rows")

    @property
    def n(self) -> int:
        return self.response.shape[0]

    @property
    def r(self) -> int:
        return self.covariates.shape[1]

    def column(self, name: str) -> np.ndarray:
        try:
            j = self.covariate_names.index(name)
        except ValueError:
            raise DataError(f"unknown covariate column {name!r}") from None
        return self.covariates[:, j]


def read_csv(path, response: str, covariates: list[str] | None = None) -> Dataset:
    """Read a dataset from a UTF-8 CSV file with a header row.

    ``covariates`` defaults to every non-response column, in header order.
    Cells must be decimal-point numbers; blank cells and malformed numbers
    are reported with their row and column.
    """
    with open(path, "r", encoding="utf-8", newline="") as fh:
        reader = csv.reader(fh)
        try:
            header = next(reader)
        except StopIteration:
            raise DataError(f"{path}: empty file") from None
        header = [h.strip() for h in header]
        if len(set(header)) != len(header):
            raise DataError(f"{path}: duplicate header columns")
        if response not in header:
            raise DataError(f"{path}: missing column {response!r}")
        if covariates is None:
            covariates = [h for h in header if h != response]
        for name in covariates:
            if name not in header:
                raise DataError(f"{path}: missing column {name!r}")
        rows = []
        for lineno, row in enumerate(reader, start=2):
            if not row or all(c.strip() == "" for c in row):
                continue
            if len(row) != len(header):
                raise DataError(f"{path}: row {lineno} has {len(row)} cells, expected {len(header)}")
            parsed = []
            for name, cell in zip(header, row):
                cell = cell.strip()
                if cell == "":
                    raise DataError(f"{path}: blank cell at row {lineno}, column {name!r}")
                try:
                    parsed.append(float(cell))
                except ValueError:
                    raise DataError(
                        f"{path}: non-numeric cell {cell!r} at row {lineno}, column {name!r}"
                    ) from None
            rows.append(parsed)
    if not rows:
        raise DataError(f"{path}: no data rows")
    table = {name: np.array([r[j] for r in rows]) for j, name in enumerate(header)}
    x = np.column_stack([table[name] for name in covariates])
    return Dataset(
        response=table[response],
        covariates=x,
        covariate_names=tuple(covariates),
    )


def load_birds() -> Dataset:
    """Bundled bird-species abundance data: 14 Andean vegetation islands.

    Response ``y`` is the number of bird species; covariates are island
    area (``x1``), elevation (``x2``), distance to Ecuador (``x3``), and
    distance to the nearest island (``x4``).
    """
    with resources.as_file(resources.files("ficsel").joinpath("data/birds.csv")) as p:
        return read_csv(p, response="y")
