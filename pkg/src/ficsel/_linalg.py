"""Symmetric positive-definite solves with a condition-number guard.

Inversion always goes through a Cholesky factorization, never an
explicit inverse.  Matrices are Jacobi-equilibrated first (scaled to
unit diagonal), so the guard measures genuine collinearity rather than
covariate units; equilibrated matrices whose eigenvalue ratio exceeds
COND_LIMIT are rejected so that near-collinear interaction designs
fail loudly instead of polluting the information matrices.
"""

from __future__ import annotations

import numpy as np
from scipy.linalg import cho_factor, cho_solve

from .errors import NumericalError

COND_LIMIT = 1e12


class SpdSolver:
    """Cached equilibrated Cholesky solve for one SPD matrix."""

    def __init__(self, a: np.ndarray, label: str):
        a = np.asarray(a, dtype=float)
        a = 0.5 * (a + a.T)
        diag = np.diag(a).copy()
        if np.any(diag <= 0) or not np.all(np.isfinite(a)):
            raise NumericalError(f"{label} is not positive definite")
        d = 1.0 / np.sqrt(diag)
        scaled = a * d[:, None] * d[None, :]
        eigs = np.linalg.eigvalsh(scaled)
        lo, hi = eigs[0], eigs[-1]
        if lo <= 0 or hi / lo > COND_LIMIT:
            raise NumericalError(
                f"{label} is singular or ill-conditioned "
                f"(equilibrated eigenvalues in [{lo:.3e}, {hi:.3e}])"
            )
        try:
            self._factor = cho_factor(scaled, lower=True)
        except np.linalg.LinAlgError:
            raise NumericalError(f"{label} is not positive definite") from None
        self._d = d
        self.matrix = a

    def solve(self, b: np.ndarray) -> np.ndarray:
        b = np.asarray(b, dtype=float)
        if b.ndim == 1:
            return self._d * cho_solve(self._factor, self._d * b)
        return self._d[:, None] * cho_solve(self._factor, self._d[:, None] * b)


def solve_spd(a: np.ndarray, b: np.ndarray, label: str) -> np.ndarray:
    return SpdSolver(a, label).solve(b)


def psd_sqrt(a: np.ndarray) -> np.ndarray:
    """Symmetric square root with tiny negative eigenvalues clipped."""
    a = 0.5 * (np.asarray(a, dtype=float) + np.asarray(a, dtype=float).T)
    vals, vecs = np.linalg.eigh(a)
    vals = np.clip(vals, 0.0, None)
    return (vecs * np.sqrt(vals)) @ vecs.T
