"""Weighted moments A, B, C, D of a linear OPA and the closed forms for its root and coefficient.

For ``Q = a (z - w) = q_{1,p}[f]`` with ``||f||_p = 1`` and weight
``W = |Q f - 1|^(p-2)``::

    A = int W conj(f),   B = int W conj(z f),
    C = int W |f|^2,     D = int W conj(z) |f|^2

and the two stationarity equations read ``[[C, conj(D)], [D, C]] [-a w, a] = [A, B]``.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .boundary import HpFunction, TaylorPoly, monomial, nodes
from .errors import DegenerateInputError, DomainError
from .solver import LinearOpa

DEGENERACY_REL = 1e-10
WEIGHT_FLOOR = 1e-12


@dataclass(frozen=True)
class AbcdIntegrals:
    """Moments for the normalized pair ``f / scale``, ``scale * Q`` (``scale = ||f||_p``).

    ``valid`` is False only for ``p < 2`` when ``sup |Q f| >= 1`` on the
    grid, where the closed forms are not guaranteed.
    """

    A: complex
    B: complex
    C: complex
    D: complex
    p: float
    scale: float
    weight_note: str
    valid: bool = True

    def raw(self) -> tuple:
        """Moments of the unnormalized ``f`` (A, B scale by ``scale``, C, D by ``scale**2``)."""
        s = self.scale
        return self.A * s, self.B * s, self.C * s * s, self.D * s * s


@dataclass
class FormulaCrossCheck:
    w_dubform: complex | None = None
    w_dubform2: complex | None = None
    w_dubform3: complex | None = None
    a_linear_system: complex | None = None
    a_linear_system_rederived: complex | None = None
    a_closed: complex | None = None
    w_solver: complex | None = None
    a_solver: complex | None = None
    max_pairwise_w_deviation: float | None = None
    degeneracy_flags: dict = field(default_factory=dict)

    def w_values(self) -> dict:
        return {k: v for k, v in (("w_dubform", self.w_dubform), ("w_dubform2", self.w_dubform2),
                                  ("w_dubform3", self.w_dubform3)) if v is not None}

    def as_dict(self) -> dict:
        def cx(v):
            return None if v is None else [float(np.real(v)), float(np.imag(v))]
        return {
            "w_dubform": cx(self.w_dubform),
            "w_dubform2": cx(self.w_dubform2),
            "w_dubform3": cx(self.w_dubform3),
            "a_linear_system": cx(self.a_linear_system),
            "a_linear_system_rederived": cx(self.a_linear_system_rederived),
            "a_closed": cx(self.a_closed),
            "w_solver": cx(self.w_solver),
            "a_solver": cx(self.a_solver),
            "max_pairwise_w_deviation": self.max_pairwise_w_deviation,
            "degeneracy_flags": dict(sorted(self.degeneracy_flags.items())),
        }


def _weight(Qf: np.ndarray, p: float) -> tuple[np.ndarray, str]:
    d = np.abs(Qf - 1.0)
    if p == 2.0:
        return np.ones_like(d), "identically 1 (p = 2)"
    if p > 2.0:
        return d ** (p - 2.0), "direct"
    return np.maximum(d, WEIGHT_FLOOR) ** (p - 2.0), f"floored at |Qf-1| >= {WEIGHT_FLOOR:g}"


def abcd(f: HpFunction, Q, p: float) -> AbcdIntegrals:
    """Quadrature of the four weighted moments after normalizing ``||f||_p = 1``."""
    if not 1.0 < p < np.inf:
        raise DomainError(f"p must lie in (1, inf), got {p}")
    q = Q if isinstance(Q, TaylorPoly) else TaylorPoly(Q)
    if len(q.coeffs) > 2 and np.any(q.coeffs[2:] != 0):
        raise DomainError("Q must have degree at most 1")
    scale = f.norm(p)
    if scale == 0.0:
        raise DegenerateInputError("f vanishes identically")
    M = f.M
    fn = f.samples / scale
    z = monomial(M, 1)
    c = np.concatenate([q.coeffs, np.zeros(2)])[:2]
    Qf = (c[0] + c[1] * z) * f.samples
    W, note = _weight(Qf, p)
    valid = True
    if p < 2.0 and np.max(np.abs(Qf)) >= 1.0:
        valid = False
        note += "; sup|Qf| >= 1, outside the guaranteed range"
    abs2 = np.abs(fn) ** 2
    A = np.mean(W * np.conj(fn))
    B = np.mean(W * np.conj(z * fn))
    C = np.mean(W * abs2)
    D = np.mean(W * np.conj(z) * abs2)
    return AbcdIntegrals(complex(A), complex(B), complex(C), complex(D), float(p), float(scale), note, valid)


def _ratio(num: complex, den: complex) -> tuple[complex | None, bool]:
    degenerate = bool(abs(den) < DEGENERACY_REL * (abs(num) + 1.0))
    return (None if degenerate else num / den), degenerate


def p4_weight_expansion_check(f: HpFunction, Q) -> float:
    """Max grid deviation between ``|Qf-1|^2`` and ``1 - Qf - conj(Qf) + |Qf|^2``."""
    q = Q if isinstance(Q, TaylorPoly) else TaylorPoly(Q)
    Qf = q(nodes(f.M)) * f.samples
    lhs = np.abs(Qf - 1.0) ** 2
    rhs = 1.0 - Qf - np.conj(Qf) + np.abs(Qf) ** 2
    return float(np.max(np.abs(lhs - rhs)))


def w_formulas(ints: AbcdIntegrals, a: complex, out: FormulaCrossCheck | None = None) -> FormulaCrossCheck:
    """Evaluate the three closed forms for ``w``; ``a`` is the normalized leading coefficient."""
    out = out or FormulaCrossCheck()
    A, B, C, D = ints.A, ints.B, ints.C, ints.D
    a = complex(a)
    out.w_dubform, out.degeneracy_flags["w_dubform"] = _ratio(B * np.conj(D) - A * C, B * C - A * D)
    out.w_dubform2, out.degeneracy_flags["w_dubform2"] = _ratio(a * np.conj(D) - A, a * C)
    out.w_dubform3, out.degeneracy_flags["w_dubform3"] = _ratio(a * C - B, a * D)
    return out


def a_formulas(ints: AbcdIntegrals, w: complex, out: FormulaCrossCheck | None = None) -> FormulaCrossCheck:
    """Evaluate both closed forms for ``a`` (normalized), plus a rederived one.

    ``a_linear_system`` is evaluated verbatim as
    ``(B - wA) / (2C - w conj(D) - conj(w) D)``.  Eliminating between the
    two rows of the 2x2 system actually gives
    ``B - wA = a (C (1 + w^2) - w (D + conj(D)))``, which is what
    ``a_linear_system_rederived`` evaluates; the two agree only in special
    cases, so only the rederived form should be compared with the solver.
    """
    out = out or FormulaCrossCheck()
    A, B, C, D = ints.A, ints.B, ints.C, ints.D
    w = complex(w)
    out.a_linear_system, out.degeneracy_flags["a_linear_system"] = _ratio(
        B - w * A, 2 * C - w * np.conj(D) - np.conj(w) * D)
    out.a_linear_system_rederived, out.degeneracy_flags["a_linear_system_rederived"] = _ratio(
        B - w * A, C * (1 + w * w) - w * (D + np.conj(D)))
    out.a_closed, out.degeneracy_flags["a_closed"] = _ratio(A * D - B * C, abs(D) ** 2 - C * C)
    return out


def solve_2x2(ints: AbcdIntegrals) -> tuple[complex, complex]:
    """Solve ``[[C, conj(D)], [D, C]] x = [A, B]`` and return ``(a, w)`` with ``x = [-a w, a]``.

    Uses the true inverse, whose determinant is ``C^2 - |D|^2``.
    """
    C, D = ints.C, ints.D
    det = C * C - np.conj(D) * D
    if abs(det) <= 1e-12:
        raise DegenerateInputError(f"moment matrix is singular (det = {det!r})")
    x0 = (C * ints.A - np.conj(D) * ints.B) / det
    x1 = (C * ints.B - D * ints.A) / det
    if abs(x1) <= DEGENERACY_REL * (abs(x0) + 1.0):
        raise DegenerateInputError("a = 0: the linear OPA is constant and w is undefined")
    return complex(x1), complex(-x0 / x1)


def cross_check(f: HpFunction, lin: LinearOpa, p: float) -> tuple[AbcdIntegrals, FormulaCrossCheck]:
    """All closed forms for a solved linear OPA, compared against the solver's ``(a, w)``."""
    ints = abcd(f, TaylorPoly([-lin.a * lin.w, lin.a]), p)
    a_norm = lin.a * ints.scale
    out = FormulaCrossCheck(w_solver=lin.w, a_solver=a_norm)
    w_formulas(ints, a_norm, out)
    a_formulas(ints, lin.w, out)
    ws = list(out.w_values().values()) + [lin.w]
    dev = 0.0
    for i in range(len(ws)):
        for j in range(i + 1, len(ws)):
            dev = max(dev, abs(ws[i] - ws[j]) / max(abs(ws[i]), abs(ws[j])))
    out.max_pairwise_w_deviation = float(dev)
    return ints, out
