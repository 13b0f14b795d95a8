"""Explicit bounds on constant and linear OPAs, each evaluated as a checkable report.

Every check returns a :class:`BoundReport` whose ``slack`` is oriented so
that the bound holds iff ``slack >= -tol``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .boundary import BoundaryGrid, HpFunction, p_norm
from .errors import DegenerateInputError, DomainError, InconsistentInputError, NotApplicable
from .orthogonality import pythag_params
from .solver import LinearOpa

BOUND_TOL = 1e-7


@dataclass(frozen=True)
class BoundReport:
    name: str
    lhs: float
    rhs: float
    slack: float
    tol: float = BOUND_TOL
    inputs_digest: str = ""
    notes: tuple = field(default_factory=tuple)

    @property
    def satisfied(self) -> bool:
        return self.slack >= -self.tol

    def as_dict(self) -> dict:
        return {"name": self.name, "lhs": self.lhs, "rhs": self.rhs,
                "slack": self.slack, "satisfied": self.satisfied}


def _upper(name, lhs, rhs, digest, tol=BOUND_TOL, notes=()):
    return BoundReport(name, float(lhs), float(rhs), float(rhs - lhs), tol, digest, tuple(notes))


def _lower(name, lhs, rhs, digest, tol=BOUND_TOL, notes=()):
    return BoundReport(name, float(lhs), float(rhs), float(lhs - rhs), tol, digest, tuple(notes))


def _digest(f: HpFunction, p: float, n: int | None = None) -> str:
    s = f"f={f.descriptor()} p={p:g}"
    return s if n is None else s + f" n={n}"


def _require_f0(f: HpFunction) -> complex:
    f0 = f.f0
    if f0 == 0:
        raise DegenerateInputError("the bound requires f(0) != 0")
    return f0


def _tail(f: HpFunction) -> BoundaryGrid:
    return f.grid - f.f0


def deg0_upper_simple(f: HpFunction, p: float, lam: complex, tol: float = BOUND_TOL) -> BoundReport:
    """``|lam| <= 1 / (K1^(1/r) [||f - f(0)||^r + ||f||^r]^(1/r))`` for ``lam = q_{0,p}[f]``."""
    _require_f0(f)
    pp = pythag_params(p)
    r = pp.r
    denom = pp.K1 ** (1.0 / r) * (p_norm(_tail(f), p) ** r + f.norm(p) ** r) ** (1.0 / r)
    return _upper("deg0_upper", abs(lam), 1.0 / denom, _digest(f, p, 0), tol)


def deg0_upper_mvt(f: HpFunction, p: float, lam: complex, tol: float = BOUND_TOL) -> BoundReport:
    """``|lam|^(r-1) <= r |f(0)| / (K1 ||f - f(0)||^r + K1 ||f||^r)``."""
    f0 = _require_f0(f)
    pp = pythag_params(p)
    r = pp.r
    rhs = r * abs(f0) / (pp.K1 * p_norm(_tail(f), p) ** r + pp.K1 * f.norm(p) ** r)
    return _upper("deg0_upper_mvt", abs(lam) ** (r - 1.0), rhs, _digest(f, p, 0), tol)


def deg0_lower(f: HpFunction, p: float, lam: complex, c: complex | None = None,
               tol: float = BOUND_TOL) -> BoundReport:
    """``|lam|^s >= (1 - ||c f - 1||^s) / (K2 (||f - f(0)||^s + ||f||^s))``.

    ``c`` defaults to ``1/f(0)``; any constant gives a valid (possibly
    vacuous) bound.
    """
    f0 = _require_f0(f)
    pp = pythag_params(p)
    s = pp.s
    c = 1.0 / f0 if c is None else complex(c)
    num = 1.0 - p_norm(f.grid * c - 1.0, p) ** s
    den = pp.K2 * (p_norm(_tail(f), p) ** s + f.norm(p) ** s)
    return _lower("deg0_lower", abs(lam) ** s, num / den, _digest(f, p, 0), tol,
                  notes=(f"c={c!r}",))


def diff_quotient_root_bound(Q0_f_norm: float, Qf_minus_1_norm: float) -> float:
    """Lower bound ``||Q0 f|| / (||Q0 f|| + ||Q f - 1||)`` on ``|z0|`` for ``Q = Q0 (1 - z/z0)``."""
    if Q0_f_norm < 0 or Qf_minus_1_norm < 0:
        raise DomainError("norms must be nonnegative")
    if Q0_f_norm == 0 and Qf_minus_1_norm == 0:
        raise DegenerateInputError("both norms vanish")
    return Q0_f_norm / (Q0_f_norm + Qf_minus_1_norm)


def diff_quotient_report(f: HpFunction, a: complex, w: complex, p: float,
                         tol: float = BOUND_TOL) -> BoundReport:
    """Check the difference-quotient bound for ``Q = a (z - w)`` with ``0 < |w| < 1``.

    Any linear ``Q`` qualifies, not only OPAs.
    """
    if not 0.0 < abs(w) < 1.0:
        raise NotApplicable(f"needs a root in the punctured disk, |w| = {abs(w):.6g}")
    Q0 = -a * w
    Qf = f.grid.shift(1) * a - f.grid * (a * w)
    bound = diff_quotient_root_bound(abs(Q0) * f.norm(p), p_norm(Qf - 1.0, p))
    return _lower("root_diff_quotient", abs(w), bound, _digest(f, p, 1), tol)


def _linear_norms(f: HpFunction, lin: LinearOpa, p: float):
    a, w = lin.a, lin.w
    zf = f.grid.shift(1)
    azf_1 = p_norm(zf * a - 1.0, p)
    Qf_1 = p_norm(zf * a - f.grid * (a * w) - 1.0, p)
    af = abs(a) * f.norm(p)
    return azf_1, Qf_1, af


def root_interval_prop43(f: HpFunction, lin: LinearOpa, p: float,
                         tol: float = BOUND_TOL) -> tuple[BoundReport, BoundReport]:
    """Two-sided bound on ``|w|`` from both Pythagorean inequalities.

    Since ``Q f - 1 _|_p a w f`` and they sum to ``a z f - 1``::

        |w| <= ((||azf-1||^r - ||Qf-1||^r) / (K1 ||af||^r))^(1/r)
        |w| >= ((||azf-1||^s - ||Qf-1||^s) / (K2 ||af||^s))^(1/s)

    Radicands that come out negative from quadrature noise are clamped at 0
    and the clamp is noted on the report.
    """
    if lin.a == 0:
        raise DegenerateInputError("leading coefficient vanishes")
    pp = pythag_params(p)
    azf_1, Qf_1, af = _linear_norms(f, lin, p)
    digest = _digest(f, p, 1)

    def side(e, K):
        rad = (azf_1 ** e - Qf_1 ** e) / (K * af ** e)
        notes = ()
        if rad < 0:
            notes = (f"radicand {rad:.3e} clamped to 0",)
            rad = 0.0
        return rad ** (1.0 / e), notes

    upper, n_up = side(pp.r, pp.K1)
    lower, n_lo = side(pp.s, pp.K2)
    w_abs = abs(lin.w)
    return (_lower("root_interval_lower", w_abs, lower, digest, tol, n_lo),
            _upper("root_interval_upper", w_abs, upper, digest, tol, n_up))


def coeff_bound_prop44(f: HpFunction, lin: LinearOpa, p: float, tol: float = BOUND_TOL) -> BoundReport:
    """``|a|^(r-1) <= r |w f(0)| / (K1 ||(z-w)f + w f(0)||^r + K1 ||(z-w)f||^r)``.

    This is the constant-OPA bound applied to ``(z - w) f``, whose OPA is ``a``.
    """
    f0 = _require_f0(f)
    if lin.w == 0:
        raise NotApplicable("w = 0 makes the bound vacuous")
    pp = pythag_params(p)
    r = pp.r
    g = f.grid.shift(1) - f.grid * lin.w
    den = pp.K1 * p_norm(g + lin.w * f0, p) ** r + pp.K1 * p_norm(g, p) ** r
    rhs = r * abs(lin.w * f0) / den
    return _upper("coeff_bound", abs(lin.a) ** (r - 1.0), rhs, _digest(f, p, 1), tol)


def root_modulus_lower_bound(residual_norm: float, p: float) -> float:
    """``sqrt(1 - ||q f - 1||_p^p)``: every root of the OPA in the disk has at least this modulus."""
    if residual_norm < 0:
        raise InconsistentInputError("residual norm must be nonnegative")
    # q = 0 is feasible, so anything above 1 beyond roundoff is not an OPA residual.
    if residual_norm > 1.0 + 1e-12:
        raise InconsistentInputError(f"OPA residual norm {residual_norm!r} exceeds 1")
    return math.sqrt(max(0.0, 1.0 - min(residual_norm, 1.0) ** p))


def root_modulus_reports(f: HpFunction, roots, residual_norm: float, p: float, n: int,
                         tol: float = BOUND_TOL) -> list[BoundReport]:
    """One report per root inside the open disk (roots outside satisfy the bound trivially)."""
    bound = root_modulus_lower_bound(residual_norm, p)
    digest = _digest(f, p, n)
    return [_lower(f"root_modulus[{i}]", abs(z), bound, digest, tol)
            for i, z in enumerate(roots) if abs(z) < 1.0]


def keyobs_check(f: HpFunction | BoundaryGrid, p: float, k: float, tol: float = BOUND_TOL) -> BoundReport:
    """``int |f|^k dm <= ||phi||_{p-2}^(p-k)`` with ``phi = |f|^(2/(p-2))`` and ``||f||_p = 1``."""
    g = f.grid if isinstance(f, HpFunction) else f
    if not p > 2.0:
        raise DomainError(f"needs p > 2, got {p}")
    if not 2.0 <= k < p:
        raise DomainError(f"needs 2 <= k < p, got k={k}")
    nf = p_norm(g, p)
    if abs(nf - 1.0) > 1e-9:
        raise DomainError(f"f must be normalized to ||f||_p = 1 first (got {nf!r})")
    a = np.abs(g.samples)
    lhs = float(np.mean(a ** k))
    phi = a ** (2.0 / (p - 2.0))
    phi_norm = float(np.mean(phi ** (p - 2.0)) ** (1.0 / (p - 2.0)))
    rhs = phi_norm ** (p - k)
    digest = f"p={p:g} k={k:g}"
    if isinstance(f, HpFunction):
        digest = _digest(f, p) + f" k={k:g}"
    return _upper(f"holder_interpolation[k={k:g}]", lhs, rhs, digest, tol)


def lemma52_check(f: HpFunction, lin: LinearOpa, p: float, tol: float = BOUND_TOL) -> BoundReport:
    """``||Q f||_p >= (1 - |w|) |a| ||f||_p`` for ``Q = a (z - w)``, ``0 < |w| < 1``."""
    if not 0.0 < abs(lin.w) < 1.0:
        raise NotApplicable(f"needs 0 < |w| < 1, got |w| = {abs(lin.w):.6g}")
    Qf = f.grid.shift(1) * lin.a - f.grid * (lin.a * lin.w)
    rhs = (1.0 - abs(lin.w)) * abs(lin.a) * f.norm(p)
    return _lower("diff_quotient_norm", p_norm(Qf, p), rhs, _digest(f, p, 1), tol)
