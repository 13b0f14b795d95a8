"""Seeded test corpora and the textual function-spec grammar."""

from __future__ import annotations

import json
from dataclasses import asdict, dataclass
from pathlib import Path

import numpy as np

from ..boundary import DEFAULT_GRID, BlaschkeProduct, HpFunction, TaylorPoly, parse_complex
from ..errors import DomainError, InconsistentInputError

MAX_REJECTIONS = 1000
KINDS = ("random_poly", "blaschke")


@dataclass(frozen=True)
class CorpusSpec:
    """Recipe for a deterministic family of test functions.

    ``degree_range`` and ``zero_modulus_range`` are closed intervals; the
    latter only matters for Blaschke products.
    """

    kind: str
    count: int
    seed: int
    degree_range: tuple = (1, 6)
    zero_modulus_range: tuple = (0.2, 0.8)
    min_f0: float = 0.0

    def __post_init__(self):
        if self.kind not in KINDS:
            raise DomainError(f"corpus kind must be one of {KINDS}, got {self.kind!r}")
        if self.count < 0:
            raise DomainError("count must be nonnegative")
        if not 0 <= self.seed < 2 ** 64:
            raise DomainError("seed must be a 64-bit unsigned integer")
        lo, hi = (int(d) for d in self.degree_range)
        if not 0 <= lo <= hi:
            raise DomainError(f"bad degree range {self.degree_range}")
        if self.kind == "blaschke" and lo < 1:
            raise DomainError("Blaschke products need degree >= 1")
        rlo, rhi = (float(x) for x in self.zero_modulus_range)
        if not 0.0 < rlo <= rhi < 1.0:
            raise DomainError(f"zero moduli must lie in (0, 1), got {self.zero_modulus_range}")
        if self.min_f0 < 0:
            raise DomainError("min_f0 must be nonnegative")
        object.__setattr__(self, "degree_range", (lo, hi))
        object.__setattr__(self, "zero_modulus_range", (rlo, rhi))

    @classmethod
    def from_dict(cls, d: dict) -> "CorpusSpec":
        d = dict(d)
        for key in ("degree_range", "zero_modulus_range"):
            if key in d:
                d[key] = tuple(d[key])
        try:
            return cls(**d)
        except TypeError as exc:
            raise DomainError(f"bad corpus spec: {exc}") from exc

    @classmethod
    def load(cls, path) -> "CorpusSpec":
        try:
            return cls.from_dict(json.loads(Path(path).read_text()))
        except (OSError, json.JSONDecodeError) as exc:
            raise DomainError(f"cannot read corpus spec {path}: {exc}") from exc

    def as_dict(self) -> dict:
        d = asdict(self)
        d["degree_range"] = list(self.degree_range)
        d["zero_modulus_range"] = list(self.zero_modulus_range)
        return d


def instance_id(spec: CorpusSpec, i: int) -> str:
    return f"{spec.kind}-{spec.seed}-{i:04d}"


def _uniform_square(rng, size) -> np.ndarray:
    return rng.uniform(-1.0, 1.0, size) + 1j * rng.uniform(-1.0, 1.0, size)


def _random_poly(rng, spec: CorpusSpec) -> TaylorPoly:
    lo, hi = spec.degree_range
    d = int(rng.integers(lo, hi + 1))
    c = _uniform_square(rng, d + 1)
    for _ in range(MAX_REJECTIONS):
        if abs(c[0]) >= spec.min_f0:
            return TaylorPoly(c)
        c[0] = _uniform_square(rng, 1)[0]
    raise InconsistentInputError(f"no constant term with |f(0)| >= {spec.min_f0} "
                                 f"after {MAX_REJECTIONS} draws")


def _random_blaschke(rng, spec: CorpusSpec) -> BlaschkeProduct:
    lo, hi = spec.degree_range
    rlo, rhi = spec.zero_modulus_range
    for _ in range(MAX_REJECTIONS):
        d = int(rng.integers(lo, hi + 1))
        mod = rng.uniform(rlo, rhi, d)
        ang = rng.uniform(0.0, 2.0 * np.pi, d)
        zeros = mod * np.exp(1j * ang)
        # |B(0)| is the product of the zero moduli.
        if np.prod(mod) >= spec.min_f0 and np.all(mod > 0):
            return BlaschkeProduct(zeros)
    raise InconsistentInputError(f"no Blaschke product with |f(0)| >= {spec.min_f0} "
                                 f"after {MAX_REJECTIONS} draws")


def generate_exact_forms(spec: CorpusSpec) -> list:
    rng = np.random.default_rng(spec.seed)
    draw = _random_poly if spec.kind == "random_poly" else _random_blaschke
    return [draw(rng, spec) for _ in range(spec.count)]


def generate_corpus(spec: CorpusSpec, M: int = DEFAULT_GRID) -> list:
    """The ``HpFunction`` instances of ``spec``, in instance order."""
    return [HpFunction(form, M) for form in generate_exact_forms(spec)]


def _split_list(body: str) -> list:
    items = [s for s in body.split(",")]
    if any(not s.strip() for s in items):
        raise DomainError(f"empty entry in {body!r}")
    return [parse_complex(s) for s in items]


def parse_function(text: str, M: int = DEFAULT_GRID) -> HpFunction:
    """Parse ``poly:c0,c1,...`` or ``blaschke:z1,z2,...``.

    Optional suffixes ``;u=<unimodular>`` (Blaschke only) and
    ``;scale=<complex>`` are accepted, so every descriptor written by this
    package parses back to the same function.
    """
    text = text.strip()
    kind, sep, rest = text.partition(":")
    if not sep:
        raise DomainError(f"function spec needs a 'poly:' or 'blaschke:' prefix, got {text!r}")
    parts = rest.split(";")
    body, opts = parts[0], {}
    for opt in parts[1:]:
        key, eq, val = opt.partition("=")
        if not eq or key.strip() not in ("u", "scale"):
            raise DomainError(f"unknown option {opt!r} in {text!r}")
        opts[key.strip()] = parse_complex(val)
    scale = opts.pop("scale", 1.0)
    kind = kind.strip().lower()
    if kind == "poly":
        if opts:
            raise DomainError("';u=' only applies to Blaschke products")
        form = TaylorPoly(_split_list(body))
    elif kind == "blaschke":
        form = BlaschkeProduct(_split_list(body), opts.get("u", 1.0))
    else:
        raise DomainError(f"unknown function kind {kind!r}")
    return HpFunction(form, M, scale)
