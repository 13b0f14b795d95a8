"""Randomized audit of the Pythagorean inequalities on orthogonalized pairs."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from ..boundary import DEFAULT_GRID, BoundaryGrid, TaylorPoly, p_norm, sample
from ..orthogonality import check_pythagorean, orthogonalize


@dataclass(frozen=True)
class PythagSummary:
    p: float
    trials: int
    min_lower_slack: float
    min_upper_slack: float
    max_abs_slack: float

    def as_dict(self) -> dict:
        return {"p": self.p, "trials": self.trials, "min_lower_slack": self.min_lower_slack,
                "min_upper_slack": self.min_upper_slack, "max_abs_slack": self.max_abs_slack}


def _random_poly_grid(rng, M: int, max_degree: int = 8) -> BoundaryGrid:
    d = int(rng.integers(0, max_degree + 1))
    c = (rng.standard_normal(d + 1) + 1j * rng.standard_normal(d + 1)) * rng.uniform(0.1, 2.0)
    return sample(TaylorPoly(c), M)


def orthogonal_pairs(p: float, trials: int, seed: int, M: int = DEFAULT_GRID):
    """Yield ``(x, y)`` with ``x _|_p y``: ``y`` is a random ``g`` orthogonalized against ``x``."""
    rng = np.random.default_rng([seed, int(round(p * 1000))])
    produced = 0
    while produced < trials:
        x = _random_poly_grid(rng, M)
        g = _random_poly_grid(rng, M)
        if not np.any(x.samples):
            continue
        y = orthogonalize(x, g, p)
        # g nearly parallel to x leaves only roundoff in y; such pairs test nothing.
        if p_norm(y, p) <= 1e-6 * p_norm(g, p):
            continue
        produced += 1
        yield x, y


def pythag_audit(p_list, trials: int, seed: int, M: int = DEFAULT_GRID) -> list:
    out = []
    for p in p_list:
        lo, up, big = np.inf, np.inf, 0.0
        for x, y in orthogonal_pairs(p, trials, seed, M):
            rep = check_pythagorean(x, y, p)
            lo, up = min(lo, rep.lower_slack), min(up, rep.upper_slack)
            big = max(big, abs(rep.lower_slack), abs(rep.upper_slack))
        out.append(PythagSummary(float(p), trials, float(lo), float(up), float(big)))
    return out
