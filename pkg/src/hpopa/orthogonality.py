"""Birkhoff-James orthogonality in L^p of the circle and the Pythagorean inequalities."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .boundary import BoundaryGrid, dual_function, dual_pairing, p_norm
from .errors import DegenerateInputError, DomainError, PreconditionError

ORTH_TOL = 1e-8
SLACK_TOL = 1e-9


@dataclass(frozen=True)
class PythagoreanParams:
    """Exponents and constants of the lower (r, K1) and upper (s, K2) inequalities.

    When ``x`` is Birkhoff-James orthogonal to ``y``::

        ||x + y||^r >= ||x||^r + K1 ||y||^r
        ||x + y||^s <= ||x||^s + K2 ||y||^s
    """

    p: float
    r: float
    K1: float
    s: float
    K2: float


@dataclass(frozen=True)
class OrthogonalityReport:
    residual: complex
    relative_residual: float
    is_orthogonal: bool
    tol: float


@dataclass(frozen=True)
class PythagoreanReport:
    lower_slack: float
    upper_slack: float
    params: PythagoreanParams

    def satisfied(self, tol: float = SLACK_TOL) -> bool:
        return self.lower_slack >= -tol and self.upper_slack >= -tol


def _check_p(p: float) -> None:
    if not 1.0 < p < np.inf:
        raise DomainError(f"p must lie in (1, inf), got {p}")


def conjugate_exponent(p: float) -> float:
    _check_p(p)
    return p / (p - 1.0)


def bj_integral(f: BoundaryGrid, g: BoundaryGrid, p: float) -> complex:
    """Quadrature of ``|f|^(p-2) conj(f) g``, with ``|0|^(p-2) conj(0) := 0``."""
    return dual_pairing(g, dual_function(f, p - 1.0))


def bj_test(f: BoundaryGrid, g: BoundaryGrid, p: float, tol: float = ORTH_TOL) -> OrthogonalityReport:
    """Test ``f _|_p g`` through the vanishing of the James integral.

    The residual is made scale-free by dividing by ``||f||_p^(p-1) ||g||_p``.
    """
    _check_p(p)
    nf = p_norm(f, p)
    if nf == 0.0:
        raise DegenerateInputError("bj_test: f vanishes identically")
    res = bj_integral(f, g, p)
    ng = p_norm(g, p)
    rel = 0.0 if ng == 0.0 else abs(res) / (nf ** (p - 1.0) * ng)
    return OrthogonalityReport(res, rel, rel <= tol, tol)


def norming_functional(f: BoundaryGrid, p: float) -> BoundaryGrid:
    """``f^<p-1> / ||f||_p^(p-1)``, the unit-norm element of L^p' that norms ``f``."""
    _check_p(p)
    nf = p_norm(f, p)
    if nf == 0.0:
        raise DegenerateInputError("the zero function has no norming functional")
    return dual_function(f, p - 1.0) / nf ** (p - 1.0)


def orthogonalize(x: BoundaryGrid, g: BoundaryGrid, p: float) -> BoundaryGrid:
    """Remove from ``g`` the multiple of ``x`` that spoils ``x _|_p g``.

    Orthogonality is linear in its second argument, so
    ``y = g - x <g, x^<p-1>> / ||x||_p^p`` satisfies ``x _|_p y``.
    """
    _check_p(p)
    nx = p_norm(x, p)
    if nx == 0.0:
        raise DegenerateInputError("cannot orthogonalize against the zero function")
    coef = bj_integral(x, g, p) / bj_integral(x, x, p)
    return g - x * coef


def pythag_params(p: float) -> PythagoreanParams:
    _check_p(p)
    k_small = p - 1.0
    k_big = 1.0 / (2.0 ** (p - 1.0) - 1.0)
    if p <= 2.0:
        return PythagoreanParams(p=p, r=2.0, K1=k_small, s=p, K2=k_big)
    return PythagoreanParams(p=p, r=p, K1=k_big, s=2.0, K2=k_small)


def check_pythagorean(x: BoundaryGrid, y: BoundaryGrid, p: float,
                      orth_tol: float = ORTH_TOL) -> PythagoreanReport:
    """Evaluate both Pythagorean inequalities for an orthogonal pair ``x _|_p y``.

    Raises :class:`PreconditionError` if the pair is not orthogonal, since the
    inequalities say nothing otherwise.
    """
    params = pythag_params(p)
    rep = bj_test(x, y, p, orth_tol)
    if not rep.is_orthogonal:
        raise PreconditionError(
            f"x is not Birkhoff-James orthogonal to y (relative residual {rep.relative_residual:.3e})")
    nx, ny, nxy = p_norm(x, p), p_norm(y, p), p_norm(x + y, p)
    r, s = params.r, params.s
    lower = nxy ** r - (nx ** r + params.K1 * ny ** r)
    upper = (nx ** s + params.K2 * ny ** s) - nxy ** s
    return PythagoreanReport(float(lower), float(upper), params)
