"""Boundary representation of Hardy-space functions on the unit circle.

Every integral against normalized arc length ``dm`` is realized as the
uniform (trapezoid) rule on ``M`` equispaced points ``exp(2*pi*i*j/M)``,
which is spectrally accurate for smooth periodic integrands.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache
from typing import Union

import numpy as np

from .errors import DegenerateInputError, DomainError

DEFAULT_GRID = 4096

# |0|^(p-2) * conj(0) is taken to be 0; anything below this is "zero".
ZERO_CUTOFF = 1e-300


def _check_grid_size(M: int) -> int:
    M = int(M)
    if M < 4 or M & (M - 1):
        raise DomainError(f"grid size must be a power of two >= 4, got {M}")
    return M


def nodes(M: int) -> np.ndarray:
    """Return the ``M``-th roots of unity ``exp(2*pi*i*j/M)``, ``j = 0..M-1`` (read-only)."""
    return _nodes(_check_grid_size(M))


@lru_cache(maxsize=16)
def _nodes(M: int) -> np.ndarray:
    theta = 2.0 * np.pi * np.arange(M) / M
    z = np.exp(1j * theta)
    # Snap the quarter-turn points so that z**k lookups stay exact there.
    q = M // 4
    z[0], z[q], z[2 * q], z[3 * q] = 1.0, 1j, -1.0, -1j
    return _readonly(z)


def monomial(M: int, k: int) -> np.ndarray:
    """Samples of ``z**k`` on the grid (``k`` may be negative)."""
    z = nodes(M)
    idx = (np.arange(M) * k) % M
    return z[idx]


def _readonly(a: np.ndarray) -> np.ndarray:
    a.setflags(write=False)
    return a


@dataclass(frozen=True)
class TaylorPoly:
    """Polynomial ``sum_k coeffs[k] z**k``; an empty sequence is the zero polynomial."""

    coeffs: np.ndarray

    def __post_init__(self):
        c = np.array(self.coeffs, dtype=complex).reshape(-1)
        if not np.all(np.isfinite(c)):
            raise DomainError("polynomial coefficients must be finite")
        object.__setattr__(self, "coeffs", _readonly(c))

    @property
    def degree(self) -> int:
        """Index of the last nonzero coefficient (-1 for the zero polynomial)."""
        nz = np.flatnonzero(self.coeffs)
        return int(nz[-1]) if nz.size else -1

    def __call__(self, z):
        z = np.asarray(z, dtype=complex)
        out = np.zeros_like(z)
        for c in self.coeffs[::-1]:
            out = out * z + c
        return out

    def __len__(self) -> int:
        return len(self.coeffs)

    def scaled(self, lam: complex) -> "TaylorPoly":
        return TaylorPoly(lam * self.coeffs)

    def descriptor(self) -> str:
        return "poly:" + ",".join(format_complex(c) for c in self.coeffs)


@dataclass(frozen=True)
class BlaschkeProduct:
    """Finite Blaschke product ``u * prod_k (z - a_k) / (1 - conj(a_k) z)``."""

    zeros: np.ndarray
    unimodular_factor: complex = 1.0

    def __post_init__(self):
        a = np.array(self.zeros, dtype=complex).reshape(-1)
        if not np.all(np.isfinite(a)):
            raise DomainError("Blaschke zeros must be finite")
        if np.any(np.abs(a) >= 1.0):
            raise DomainError("Blaschke zeros must lie strictly inside the unit disk")
        u = complex(self.unimodular_factor)
        if abs(abs(u) - 1.0) > 1e-12:
            raise DomainError(f"unimodular factor must have modulus 1, got {abs(u)}")
        object.__setattr__(self, "zeros", _readonly(a))
        object.__setattr__(self, "unimodular_factor", u)

    def __call__(self, z):
        z = np.asarray(z, dtype=complex)
        out = np.full(z.shape, self.unimodular_factor, dtype=complex)
        for a in self.zeros:
            out = out * (z - a) / (1.0 - np.conj(a) * z)
        return out

    def descriptor(self) -> str:
        s = "blaschke:" + ",".join(format_complex(a) for a in self.zeros)
        if self.unimodular_factor != 1.0:
            s += f";u={format_complex(self.unimodular_factor)}"
        return s


ExactForm = Union[TaylorPoly, BlaschkeProduct]


@dataclass(frozen=True, eq=False)
class BoundaryGrid:
    """``M`` uniform samples of a function on the unit circle."""

    samples: np.ndarray

    def __post_init__(self):
        s = np.array(self.samples, dtype=complex).reshape(-1)
        _check_grid_size(s.size)
        if not np.all(np.isfinite(s)):
            raise DomainError("boundary samples must be finite")
        object.__setattr__(self, "samples", _readonly(s))

    @property
    def M(self) -> int:
        return self.samples.size

    @classmethod
    def constant(cls, value: complex, M: int = DEFAULT_GRID) -> "BoundaryGrid":
        return cls(np.full(_check_grid_size(M), complex(value)))

    @classmethod
    def z_power(cls, k: int, M: int = DEFAULT_GRID) -> "BoundaryGrid":
        return cls(monomial(M, k))

    def _other(self, other):
        if isinstance(other, BoundaryGrid):
            if other.M != self.M:
                raise DomainError(f"grid size mismatch: {self.M} vs {other.M}")
            return other.samples
        return other

    def __add__(self, other):
        return BoundaryGrid(self.samples + self._other(other))

    __radd__ = __add__

    def __sub__(self, other):
        return BoundaryGrid(self.samples - self._other(other))

    def __rsub__(self, other):
        return BoundaryGrid(self._other(other) - self.samples)

    def __mul__(self, other):
        return BoundaryGrid(self.samples * self._other(other))

    __rmul__ = __mul__

    def __truediv__(self, other):
        return BoundaryGrid(self.samples / self._other(other))

    def __neg__(self):
        return BoundaryGrid(-self.samples)

    def conj(self) -> "BoundaryGrid":
        return BoundaryGrid(np.conj(self.samples))

    def shift(self, k: int = 1) -> "BoundaryGrid":
        """Multiply by ``z**k``."""
        return BoundaryGrid(self.samples * monomial(self.M, k))

    def mean(self) -> complex:
        """Quadrature of the sampled function against ``dm``."""
        return complex(np.mean(self.samples))


def sample(form: ExactForm, M: int = DEFAULT_GRID) -> BoundaryGrid:
    """Evaluate ``form`` at the ``M`` roots of unity."""
    return BoundaryGrid(form(nodes(M)))


class HpFunction:
    """A function ``scale * exact_form`` in H^p together with its boundary grid.

    ``scale`` lets a Blaschke product be rescaled without leaving the exact
    representation; the grid is materialized once and cached norms are
    keyed by ``p``.
    """

    __slots__ = ("exact_form", "scale", "grid", "_norms")

    def __init__(self, exact_form: ExactForm, M: int = DEFAULT_GRID, scale: complex = 1.0):
        scale = complex(scale)
        if scale == 0:
            raise DegenerateInputError("scale must be nonzero")
        self.exact_form = exact_form
        self.scale = scale
        self.grid = sample(exact_form, M) * scale
        self._norms: dict = {}

    @classmethod
    def poly(cls, coeffs, M: int = DEFAULT_GRID) -> "HpFunction":
        return cls(TaylorPoly(coeffs), M)

    @classmethod
    def blaschke(cls, zeros, M: int = DEFAULT_GRID, unimodular_factor: complex = 1.0) -> "HpFunction":
        return cls(BlaschkeProduct(zeros, unimodular_factor), M)

    @property
    def M(self) -> int:
        return self.grid.M

    @property
    def samples(self) -> np.ndarray:
        return self.grid.samples

    @property
    def f0(self) -> complex:
        """Exact value at the origin."""
        return complex(self.scale * self.exact_form(np.zeros(1))[0])

    def norm(self, p: float) -> float:
        if p not in self._norms:
            self._norms[p] = p_norm(self.grid, p)
        return self._norms[p]

    def scaled(self, lam: complex) -> "HpFunction":
        return HpFunction(self.exact_form, self.M, self.scale * lam)

    def with_grid(self, M: int) -> "HpFunction":
        return HpFunction(self.exact_form, M, self.scale)

    @property
    def is_inner(self) -> bool:
        return isinstance(self.exact_form, BlaschkeProduct) and abs(abs(self.scale) - 1.0) < 1e-12

    def descriptor(self) -> str:
        d = self.exact_form.descriptor()
        if self.scale != 1.0:
            d += f";scale={format_complex(self.scale)}"
        return d

    def __repr__(self) -> str:
        return f"HpFunction({self.descriptor()!r}, M={self.M})"


def format_complex(c: complex) -> str:
    """Render ``c`` as ``a+bi`` (round-trips through :func:`parse_complex`)."""
    c = complex(c)
    if c.imag == 0:
        return repr(c.real)
    sign = "+" if c.imag >= 0 or np.isnan(c.imag) else "-"
    return f"{c.real!r}{sign}{abs(c.imag)!r}i"


def parse_complex(text: str) -> complex:
    """Parse literals such as ``1``, ``-0.5i``, ``0.3+0.4i``, ``2-1e-3i``."""
    t = text.strip().replace(" ", "")
    if not t:
        raise DomainError("empty complex literal")
    t = t.replace("I", "i").replace("j", "i")
    if t.endswith("i"):
        t = t[:-1] + "j"
        if t in ("j", "+j", "-j"):
            t = t.replace("j", "1j")
    try:
        return complex(t)
    except ValueError as exc:
        raise DomainError(f"bad complex literal {text!r}") from exc


def p_norm(g: BoundaryGrid, p: float) -> float:
    """``((1/M) sum_j |g_j|**p) ** (1/p)``."""
    if not 1.0 < p < np.inf:
        raise DomainError(f"p must lie in (1, inf), got {p}")
    a = np.abs(g.samples)
    amax = a.max()
    if amax == 0.0:
        return 0.0
    # Factor out the max so large p cannot overflow.
    return float(amax * np.mean((a / amax) ** p) ** (1.0 / p))


def dual_power(alpha, s: float):
    """``alpha^<s>``: for ``alpha = r e^{i t}`` return ``r**s e^{-i t}`` (0 at 0).

    Works elementwise on arrays.
    """
    if s <= 0:
        raise DomainError(f"dual power exponent must be positive, got {s}")
    a = np.asarray(alpha, dtype=complex)
    r = np.abs(a)
    nz = r > ZERO_CUTOFF
    out = np.zeros_like(a)
    out[nz] = r[nz] ** (s - 1.0) * np.conj(a[nz])
    if out.ndim == 0:
        return complex(out)
    return out


def dual_function(g: BoundaryGrid, s: float) -> BoundaryGrid:
    """Pointwise dual power of a grid function."""
    return BoundaryGrid(dual_power(g.samples, s))


def pairing(g: BoundaryGrid, h: BoundaryGrid) -> complex:
    """Sesquilinear quadrature ``(1/M) sum_j g_j conj(h_j)``."""
    if g.M != h.M:
        raise DomainError(f"grid size mismatch: {g.M} vs {h.M}")
    return complex(np.vdot(h.samples, g.samples) / g.M)


def dual_pairing(g: BoundaryGrid, h: BoundaryGrid) -> complex:
    """Bilinear L^p / L^p' duality ``(1/M) sum_j g_j h_j``.

    This is the pairing under which ``<g, f^<p-1>>`` equals the
    Birkhoff-James integral and ``<f, f^<p-1>> = ||f||_p**p``.
    """
    if g.M != h.M:
        raise DomainError(f"grid size mismatch: {g.M} vs {h.M}")
    return complex(np.dot(g.samples, h.samples) / g.M)


def taylor_coeffs(g: BoundaryGrid) -> np.ndarray:
    """All discrete Fourier coefficients ``(1/M) sum_j g_j e^{-ik theta_j}``."""
    return np.fft.fft(g.samples) / g.M


def taylor_coeff(g: BoundaryGrid, k: int) -> complex:
    if not 0 <= k < g.M:
        raise DomainError(f"coefficient index must lie in [0, {g.M}), got {k}")
    return complex(taylor_coeffs(g)[k])
