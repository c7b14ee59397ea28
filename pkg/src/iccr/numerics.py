"""Small complex linear-algebra helpers and seeded random generation.

Everything stochastic in the package takes an explicit
:class:`numpy.random.Generator`; nothing touches global random state.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import NamedTuple

import numpy as np

DEFAULT_REL_TOL = 1e-9
CONDITION_LIMIT = 1e8

RandomSource = np.random.Generator


def seeded_rng(seed: int) -> RandomSource:
    """Return a PCG64 generator; the same seed always yields the same stream."""
    return np.random.default_rng(int(seed) & 0xFFFF_FFFF_FFFF_FFFF)


def complex_normal(rng: RandomSource, shape) -> np.ndarray:
    """Draw i.i.d. CN(0, 1) entries as ``(g1 + 1j*g2)/sqrt(2)``."""
    g = rng.standard_normal((2,) + tuple(np.atleast_1d(shape)))
    return (g[0] + 1j * g[1]) * np.sqrt(0.5)


@dataclass(frozen=True)
class RankReport:
    numeric_rank: int
    singular_values: np.ndarray
    tolerance_used: float
    condition_number: float
    n_cols: int

    @property
    def full_column_rank(self) -> bool:
        return self.numeric_rank == self.n_cols


def numeric_rank(m, rel_tol: float = DEFAULT_REL_TOL) -> RankReport:
    """Rank as the count of singular values above ``rel_tol * sigma_max``.

    The condition number is taken over the retained singular values, so a
    rank-deficient matrix can still report a modest value. An all-zero
    matrix has rank 0 and an infinite condition number.
    """
    a = np.asarray(m, dtype=complex)
    if a.ndim != 2 or a.size == 0:
        raise ValueError("numeric_rank expects a nonempty 2-D matrix")
    if not np.all(np.isfinite(a)):
        raise ValueError("matrix has non-finite entries")
    s = np.linalg.svd(a, compute_uv=False)
    smax = s[0] if s.size else 0.0
    if smax == 0.0:
        return RankReport(0, s, 0.0, np.inf, a.shape[1])
    tol = rel_tol * smax
    kept = s[s > tol]
    return RankReport(int(kept.size), s, float(tol), float(kept[0] / kept[-1]), a.shape[1])


def condition_number(m) -> float:
    """sigma_max / sigma_min over all min(rows, cols) values; inf when rows < cols."""
    a = np.asarray(m, dtype=complex)
    if a.shape[0] < a.shape[1]:
        return np.inf
    s = np.linalg.svd(a, compute_uv=False)
    if s[-1] == 0.0:
        return np.inf
    return float(s[0] / s[-1])


class LstsqResult(NamedTuple):
    x: np.ndarray
    residual_norm: float
    rank_deficient: bool


def solve_least_squares(a, y, rel_tol: float = DEFAULT_REL_TOL) -> LstsqResult:
    """Minimise ``||a x - y||``; rank-deficient systems get the minimum-norm solution."""
    a = np.asarray(a, dtype=complex)
    y = np.asarray(y, dtype=complex)
    if a.ndim != 2 or a.shape[0] != y.shape[0]:
        raise ValueError(f"shape mismatch: a is {a.shape}, y has length {y.shape[0]}")
    x, _, rank, _ = np.linalg.lstsq(a, y, rcond=rel_tol)
    resid = float(np.linalg.norm(a @ x - y))
    return LstsqResult(x, resid, int(rank) < a.shape[1])
