"""Optimal polynomial approximants ``q_{n,p}[f]`` by convex minimization.

The objective is ``Phi(c) = ||1 - q f||_p^p`` over the coefficients ``c`` of
``q`` in P_n, treated as ``2(n+1)`` real unknowns.  It is minimized by a
damped Newton iteration with backtracking; for ``p < 2`` the weight
``|r|^(p-2)`` is regularized as ``(|r|^2 + eps)^((p-2)/2)`` and ``eps`` is
driven down a geometric schedule.  The ``p = 2`` problem is solved exactly
through the normal equations and seeds every other solve.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass, field

import numpy as np

from .boundary import HpFunction, TaylorPoly, monomial
from .errors import ConstantOpaError, DegenerateInputError, DomainError

log = logging.getLogger(__name__)

DEGENERACY = 1e-12

# ||1 - q f||_p at or below this is an exact inverse up to roundoff; the zero
# residual is orthogonal to everything, so its certificates are reported as 0.
EXACT_RESIDUAL = 1e-12


def geometric_schedule(start: float = 1e-2, stop: float = 1e-12, factor: float = 10.0) -> tuple:
    out = []
    e = start
    while e >= stop * (1 - 1e-9):
        out.append(e)
        e /= factor
    return tuple(out)


@dataclass(frozen=True)
class SolverOptions:
    max_iters: int = 500
    grad_tol: float = 1e-10
    epsilon_schedule: tuple = field(default_factory=geometric_schedule)
    shrink: float = 0.5
    armijo: float = 1e-4
    max_backtracks: int = 60
    polish: bool = True

    def __post_init__(self):
        if self.max_iters < 1:
            raise DomainError("max_iters must be >= 1")
        if self.grad_tol <= 0:
            raise DomainError("grad_tol must be positive")
        eps = tuple(float(e) for e in self.epsilon_schedule)
        if not eps or any(b >= a for a, b in zip(eps, eps[1:])) or eps[-1] < 1e-14:
            raise DomainError("epsilon_schedule must decrease strictly to a floor >= 1e-14")
        if not (0 < self.shrink < 1 and 0 < self.armijo < 1):
            raise DomainError("line search needs 0 < shrink < 1 and 0 < armijo < 1")
        object.__setattr__(self, "epsilon_schedule", eps)


@dataclass(frozen=True)
class OpaResult:
    """Output of an OPA solve.

    ``orth_residuals[k]`` is the relative James residual of ``q f - 1``
    against ``z^k f``; all of them vanish exactly at the minimizer.
    ``trace`` holds ``(eps, Phi)`` after every accepted step.
    """

    n: int
    p: float
    coeffs: TaylorPoly
    residual_norm: float
    orth_residuals: tuple
    iterations: int
    converged: bool
    grid: int
    trace: tuple = ()


@dataclass(frozen=True)
class LinearOpa:
    """Degree-one OPA written as ``a (z - w)``."""

    a: complex
    w: complex
    source: OpaResult


def basis_matrix(f: HpFunction, n: int) -> np.ndarray:
    """Columns ``z^k f`` on the grid, ``k = 0..n``."""
    if n < 0:
        raise DomainError(f"degree bound must be >= 0, got {n}")
    M = f.M
    return np.stack([f.samples * monomial(M, k) for k in range(n + 1)], axis=1)


def _as_coeffs(coeffs, n: int | None = None) -> np.ndarray:
    c = coeffs.coeffs if isinstance(coeffs, TaylorPoly) else np.asarray(coeffs, dtype=complex)
    c = np.asarray(c, dtype=complex).reshape(-1)
    if n is not None and c.size < n + 1:
        c = np.concatenate([c, np.zeros(n + 1 - c.size, dtype=complex)])
    return c


def _residual(Phi: np.ndarray, c: np.ndarray) -> np.ndarray:
    if c.size == 0:
        return np.ones(Phi.shape[0], dtype=complex)
    return 1.0 - Phi[:, : c.size] @ c


def _phi(r: np.ndarray, p: float, eps: float) -> float:
    t = (r.real ** 2 + r.imag ** 2)
    if eps == 0.0:
        a = np.sqrt(t)
        amax = a.max()
        if amax == 0.0:
            return 0.0
        return float(amax ** p * np.mean((a / amax) ** p))
    return float(np.mean((t + eps) ** (p / 2.0)))


def _phi_change(r: np.ndarray, dr: np.ndarray, p: float, eps: float) -> float:
    """``Phi(r + dr) - Phi(r)`` evaluated without cancellation.

    Pointwise ``(t + dt + eps)^(p/2) - (t + eps)^(p/2)`` is written as
    ``(t + eps)^(p/2) * expm1((p/2) log1p(dt / (t + eps)))``, so decreases far
    below the roundoff level of ``Phi`` itself keep their sign.
    """
    t = r.real ** 2 + r.imag ** 2 + eps
    dt = 2.0 * (r.real * dr.real + r.imag * dr.imag) + (dr.real ** 2 + dr.imag ** 2)
    out = np.empty_like(t)
    nz = t > 0.0
    with np.errstate(divide="ignore"):  # log1p(-1) = -inf when r + dr hits 0; expm1 maps it to -1
        out[nz] = t[nz] ** (p / 2.0) * np.expm1((p / 2.0) * np.log1p(dt[nz] / t[nz]))
    out[~nz] = dt[~nz] ** (p / 2.0)
    return float(np.mean(out))


def _weight(r: np.ndarray, p: float, eps: float) -> np.ndarray:
    """``(|r|^2 + eps)^((p-2)/2)``, with ``|0|^(p-2) := 0`` when ``eps = 0``."""
    t = r.real ** 2 + r.imag ** 2
    if eps > 0.0:
        return (t + eps) ** ((p - 2.0) / 2.0)
    w = np.zeros_like(t)
    nz = t > 0.0
    w[nz] = t[nz] ** ((p - 2.0) / 2.0)
    return w


def _complex_gradient(Phi: np.ndarray, r: np.ndarray, p: float, eps: float) -> np.ndarray:
    w = _weight(r, p, eps)
    return -p * (Phi.conj().T @ (w * r)) / Phi.shape[0]


def objective(f: HpFunction, coeffs, p: float, eps: float = 0.0) -> float:
    """``||1 - q f||_p^p`` (or its smoothed version when ``eps > 0``)."""
    c = _as_coeffs(coeffs)
    Phi = basis_matrix(f, max(c.size - 1, 0))
    return _phi(_residual(Phi, c), p, eps)


def gradient(f: HpFunction, coeffs, p: float, eps: float = 0.0) -> np.ndarray:
    """Wirtinger gradient ``2 dPhi/d conj(c_k) = dPhi/dx_k + i dPhi/dy_k``.

    Component ``k`` is ``-p * mean(|r|^(p-2) r conj(z^k f))`` with
    ``r = 1 - q f``.
    """
    if p < 2.0 and eps <= 0.0:
        log.debug("unsmoothed gradient requested for p=%g < 2", p)
    c = _as_coeffs(coeffs)
    Phi = basis_matrix(f, max(c.size - 1, 0))
    return _complex_gradient(Phi, _residual(Phi, c), p, eps)


def _hessian(Phi: np.ndarray, r: np.ndarray, p: float, eps: float) -> np.ndarray:
    M, N = Phi.shape
    J = np.concatenate([-Phi, -1j * Phi], axis=1)
    t = r.real ** 2 + r.imag ** 2
    w = _weight(r, p, eps)
    H = (J.conj().T @ (w[:, None] * J)).real
    if p != 2.0:
        a = np.sqrt(t)
        rhat = np.zeros_like(r)
        nz = a > 0.0
        rhat[nz] = r[nz] / a[nz]
        V = (np.conj(rhat)[:, None] * J).real
        frac = t / (t + eps) if eps > 0.0 else nz.astype(float)
        H += (p - 2.0) * (V.T @ ((w * frac)[:, None] * V))
    return p * H / M


def orthogonality_residuals(Phi: np.ndarray, r: np.ndarray, p: float) -> np.ndarray:
    """Relative James residuals of ``r`` against each column of ``Phi``."""
    M = Phi.shape[0]
    a = np.abs(r)
    amax = a.max()
    if amax == 0.0 or _phi(r, p, 0.0) ** (1.0 / p) <= EXACT_RESIDUAL:
        return np.zeros(Phi.shape[1])
    # Work with r / max|r| so that |r|^(p-2) cannot underflow or overflow.
    rs = r / amax
    w = _weight(rs, p, 0.0)
    ints = np.abs(Phi.conj().T @ (w * rs)) / M
    nr = np.mean(np.abs(rs) ** p) ** ((p - 1.0) / p)
    colmax = np.abs(Phi).max(axis=0)
    ncol = np.array([cm * np.mean((np.abs(Phi[:, k]) / cm) ** p) ** (1.0 / p) if cm > 0 else 0.0
                     for k, cm in enumerate(colmax)])
    out = np.zeros(Phi.shape[1])
    ok = ncol > 0
    out[ok] = ints[ok] / (nr * ncol[ok])
    return out


def _result(f: HpFunction, Phi, c, p, iterations, trace, grad_tol) -> OpaResult:
    r = _residual(Phi, c)
    orth = orthogonality_residuals(Phi, r, p)
    res_norm = _phi(r, p, 0.0) ** (1.0 / p)
    return OpaResult(
        n=Phi.shape[1] - 1,
        p=float(p),
        coeffs=TaylorPoly(c),
        residual_norm=float(res_norm),
        orth_residuals=tuple(float(x) for x in orth),
        iterations=iterations,
        converged=bool(np.all(orth <= grad_tol)),
        grid=f.M,
        trace=tuple(trace),
    )


def solve_l2(f: HpFunction, n: int) -> OpaResult:
    """Exact ``p = 2`` OPA from the Gram system ``G c = b``.

    ``G[j, k] = <z^k f, z^j f>`` and ``b[j] = <1, z^j f>``.
    """
    Phi = basis_matrix(f, n)
    M = Phi.shape[0]
    G = Phi.conj().T @ Phi / M
    b = Phi.conj().sum(axis=0) / M
    if not np.any(np.abs(f.samples) > 0):
        raise DegenerateInputError("f vanishes identically; Gram matrix is singular")
    try:
        L = np.linalg.cholesky(G)
    except np.linalg.LinAlgError as exc:
        raise DegenerateInputError("Gram matrix of {z^k f} is singular") from exc
    y = np.linalg.solve(L, b)
    c = np.linalg.solve(L.conj().T, y)
    return _result(f, Phi, c, 2.0, 0, (), 1e-10)


def _newton_stage(Phi, c, p, eps, opts, tol, budget, trace):
    """Damped Newton on the (possibly smoothed) objective; returns (c, iterations)."""
    N = Phi.shape[1]
    its = 0
    r = _residual(Phi, c)
    val = _phi(r, p, eps)
    while its < budget:
        if eps == 0.0 and np.all(orthogonality_residuals(Phi, r, p) <= tol):
            break
        g = _complex_gradient(Phi, r, p, eps)
        if eps > 0.0:
            # Stage stopping rule: smoothed residuals, same scaling as the certificates.
            w = _weight(r, p, eps)
            nr = np.mean((np.abs(r) ** 2 + eps) ** (p / 2.0)) ** ((p - 1.0) / p)
            ncol = np.mean(np.abs(Phi) ** p, axis=0) ** (1.0 / p)
            rel = np.abs(Phi.conj().T @ (w * r)) / Phi.shape[0] / (nr * np.maximum(ncol, 1e-300))
            if np.all(rel <= tol):
                break
        grad = np.concatenate([g.real, g.imag])
        H = _hessian(Phi, r, p, eps)
        evals, evecs = np.linalg.eigh(H)
        lmax = evals[-1]
        if lmax > 0 and evals[0] > 1e-12 * lmax:
            d = -(evecs @ ((evecs.T @ grad) / evals))
            step = 1.0
        else:
            d = -grad
            step = 1.0 / lmax if lmax > 0 else 1.0
        slope = float(grad @ d)
        if not slope < 0.0:
            break
        accepted = False
        for _ in range(opts.max_backtracks):
            u = d * step
            dc = u[:N] + 1j * u[N:]
            c_new = c + dc
            r_new = _residual(Phi, c_new)
            # dr from dc directly: r_new - r would carry roundoff of size |r|.
            delta = _phi_change(r, -(Phi @ dc), p, eps)
            if delta <= opts.armijo * step * slope:
                accepted = True
                break
            step *= opts.shrink
        its += 1
        if not accepted:
            break
        if delta > 0.0:  # pragma: no cover - guarded by the Armijo test
            raise AssertionError("line search increased the objective")
        c, r, val = c_new, r_new, val + delta
        trace.append((eps, val))
    return c, its


def solve(f: HpFunction, n: int, p: float, opts: SolverOptions | None = None) -> OpaResult:
    """Compute ``q_{n,p}[f] = argmin_{q in P_n} ||1 - q f||_p``.

    Non-convergence within ``opts.max_iters`` is reported through
    ``converged=False``, never raised.
    """
    if not 1.0 < p < np.inf:
        raise DomainError(f"p must lie in (1, inf), got {p}")
    opts = opts or SolverOptions()
    Phi = basis_matrix(f, n)
    if p == 2.0:
        # Iterate from q = 0 so the Gram solve stays an independent check.
        c = np.zeros(n + 1, dtype=complex)
    else:
        c = solve_l2(f, n).coeffs.coeffs.copy()
    trace: list = []
    its = 0
    if p < 2.0:
        loose = max(opts.grad_tol, 1e-6)
        for eps in opts.epsilon_schedule:
            c, k = _newton_stage(Phi, c, p, eps, opts, loose, opts.max_iters - its, trace)
            its += k
        last_eps = opts.epsilon_schedule[-1]
        res = _result(f, Phi, c, p, its, trace, opts.grad_tol)
        if not res.converged:
            c, k = _newton_stage(Phi, c, p, last_eps, opts, opts.grad_tol, opts.max_iters - its, trace)
            its += k
        if opts.polish and np.min(np.abs(_residual(Phi, c))) > 0.0:
            c, k = _newton_stage(Phi, c, p, 0.0, opts, opts.grad_tol, opts.max_iters - its, trace)
            its += k
    else:
        c, k = _newton_stage(Phi, c, p, 0.0, opts, opts.grad_tol, opts.max_iters, trace)
        its += k
    res = _result(f, Phi, c, p, its, trace, opts.grad_tol)
    if not res.converged:
        log.warning("OPA solve n=%d p=%g for %s stopped at max residual %.3e",
                    n, p, f.descriptor(), max(res.orth_residuals))
    return res


def linear_factor(res: OpaResult) -> LinearOpa:
    """Write a degree-one OPA as ``a (z - w)``.

    Raises :class:`ConstantOpaError` when the leading coefficient is
    negligible, i.e. the OPA is (numerically) constant and has no root.
    """
    if res.n != 1:
        raise DomainError(f"linear_factor needs an n = 1 result, got n = {res.n}")
    c0, c1 = _as_coeffs(res.coeffs, 1)[:2]
    if abs(c1) <= DEGENERACY * abs(c0) or c1 == 0:
        raise ConstantOpaError(f"degree-one OPA is constant (coeffs {c0!r}, {c1!r})")
    return LinearOpa(a=complex(c1), w=complex(-c0 / c1), source=res)


def polynomial_roots(coeffs) -> np.ndarray:
    """Roots via companion-matrix eigenvalues, after trimming negligible top coefficients."""
    c = _as_coeffs(coeffs)
    scale = np.abs(c).max() if c.size else 0.0
    if scale == 0.0:
        return np.zeros(0, dtype=complex)
    keep = np.flatnonzero(np.abs(c) > DEGENERACY * scale)
    c = c[: keep[-1] + 1]
    if c.size < 2:
        return np.zeros(0, dtype=complex)
    return np.polynomial.polynomial.polyroots(c)
