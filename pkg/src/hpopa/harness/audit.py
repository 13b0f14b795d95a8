"""Single-instance audits and the root-location and cyclicity sweeps."""

from __future__ import annotations

import json
import math
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from ..bounds import (
    BOUND_TOL,
    coeff_bound_prop44,
    deg0_lower,
    deg0_upper_mvt,
    deg0_upper_simple,
    diff_quotient_report,
    keyobs_check,
    lemma52_check,
    root_interval_prop43,
    root_modulus_lower_bound,
    root_modulus_reports,
)
from ..boundary import DEFAULT_GRID, HpFunction, TaylorPoly
from ..errors import ConstantOpaError, DegenerateInputError, NotApplicable, PreconditionError
from ..formulas import FormulaCrossCheck, cross_check
from ..solver import OpaResult, SolverOptions, linear_factor, polynomial_roots, solve
from .corpus import CorpusSpec, generate_exact_forms, instance_id, parse_function

SCHEMA_VERSION = 1
ROOT_RESIDUAL_TOL = 1e-9


@dataclass
class SweepRecord:
    """Everything learned from one ``(f, p, n)`` audit."""

    instance_id: str
    f_descriptor: str
    p: float
    n: int
    grid: int
    coeffs: tuple
    residual_norm: float
    orth_residuals: tuple
    iterations: int
    converged: bool
    a: complex | None = None
    w: complex | None = None
    roots: tuple = ()
    bounds: list = field(default_factory=list)
    formulas: FormulaCrossCheck | None = None
    abcd: dict | None = None
    constant_opa: bool = False
    notes: list = field(default_factory=list)

    @property
    def w_abs(self) -> float | None:
        return None if self.w is None else abs(self.w)

    @property
    def min_bound_slack(self) -> float | None:
        return min((b.slack for b in self.bounds), default=None)

    @property
    def violations(self) -> list:
        return [b for b in self.bounds if not b.satisfied]


def _skip(notes: list, name: str, exc: Exception) -> None:
    notes.append(f"{name} skipped: {exc}")


def record_from_result(f: HpFunction, res: OpaResult, iid: str = "") -> SweepRecord:
    """A record holding only the solve, with no checks attached."""
    rec = SweepRecord(
        instance_id=iid, f_descriptor=f.descriptor(), p=res.p, n=res.n, grid=f.M,
        coeffs=tuple(complex(c) for c in res.coeffs.coeffs), residual_norm=res.residual_norm,
        orth_residuals=res.orth_residuals, iterations=res.iterations, converged=res.converged,
    )
    if not res.converged:
        rec.notes.append("solver did not converge")
    return rec


def audit(f: HpFunction, p: float, n: int, opts: SolverOptions | None = None,
          iid: str = "", tol: float = BOUND_TOL) -> SweepRecord:
    """Solve ``q_{n,p}[f]`` and run every applicable bound and formula check.

    Solver non-convergence is recorded on the returned record, not raised.
    """
    if f.f0 == 0:
        raise DegenerateInputError("audit needs f(0) != 0")
    res = solve(f, n, p, opts)
    rec = record_from_result(f, res, iid)

    lam_res = res if n == 0 else solve(f, 0, p, opts)
    if not lam_res.converged:
        rec.notes.append("degree-0 solve did not converge")
    lam = complex(lam_res.coeffs.coeffs[0])
    rec.bounds += [deg0_upper_simple(f, p, lam, tol), deg0_upper_mvt(f, p, lam, tol),
                   deg0_lower(f, p, lam, tol=tol)]

    if n >= 1:
        _root_checks(f, res, p, n, rec, tol)
    if n == 1 and not rec.constant_opa:
        _linear_checks(f, res, p, rec, tol)

    if p > 2.0:
        fn = f.scaled(1.0 / f.norm(p))
        for k in (2.0, (2.0 + p) / 2.0):
            rec.bounds.append(keyobs_check(fn, p, k, tol))
    return rec


def _root_checks(f, res: OpaResult, p, n, rec: SweepRecord, tol) -> None:
    coeffs = res.coeffs.coeffs
    lead = coeffs[1:]
    if np.all(np.abs(lead) <= 1e-12 * max(abs(coeffs[0]), 1e-300)):
        rec.constant_opa = True
        rec.notes.append("constant OPA: root checks skipped")
        return
    roots = polynomial_roots(coeffs)
    rec.roots = tuple(complex(z) for z in roots)
    q = TaylorPoly(coeffs)
    scale = np.abs(coeffs).max()
    for z in roots:
        if abs(q(z)) > ROOT_RESIDUAL_TOL * scale * max(1.0, abs(z)) ** n:
            rec.notes.append(f"root {z!r} has residual |q(z)| = {abs(q(z)):.3e}")
    rec.bounds += root_modulus_reports(f, roots, res.residual_norm, p, n, tol)


def _linear_checks(f, res: OpaResult, p, rec: SweepRecord, tol) -> None:
    try:
        lin = linear_factor(res)
    except ConstantOpaError as exc:
        rec.constant_opa = True
        _skip(rec.notes, "linear checks", exc)
        return
    rec.a, rec.w = lin.a, lin.w
    rec.bounds += list(root_interval_prop43(f, lin, p, tol))
    try:
        rec.bounds.append(coeff_bound_prop44(f, lin, p, tol))
    except NotApplicable as exc:
        _skip(rec.notes, "coefficient bound", exc)
    for name, check in (("difference-quotient bound", lambda: diff_quotient_report(f, lin.a, lin.w, p, tol)),
                        ("difference-quotient inequality", lambda: lemma52_check(f, lin, p, tol))):
        try:
            rec.bounds.append(check())
        except NotApplicable as exc:
            _skip(rec.notes, name, exc)
    try:
        ints, cc = cross_check(f, lin, p)
    except DegenerateInputError as exc:
        _skip(rec.notes, "formula cross-check", exc)
        return
    rec.formulas = cc
    rec.abcd = {"A": ints.A, "B": ints.B, "C": ints.C, "D": ints.D,
                "scale": ints.scale, "valid": ints.valid, "weight": ints.weight_note}


def _audit_task(args) -> SweepRecord:
    iid, descriptor, p, n, M = args
    return audit(parse_function(descriptor, M), p, n, iid=iid)


def run_tasks(tasks: list, jobs: int = 1) -> list:
    """Run audit tasks serially or in a process pool; output is sorted by (instance_id, p, n)."""
    if jobs > 1 and len(tasks) > 1:
        with ProcessPoolExecutor(max_workers=jobs) as pool:
            records = list(pool.map(_audit_task, tasks, chunksize=max(1, len(tasks) // (4 * jobs))))
    else:
        records = [_audit_task(t) for t in tasks]
    return sorted(records, key=lambda r: (r.instance_id, r.p, r.n))


@dataclass(frozen=True)
class RootSummary:
    """Per-``p`` outcome of a root sweep."""

    p: float
    min_w_abs: float | None
    argmin: str | None
    counted: int
    constant: int
    nonconverged: int
    violations: int

    def as_dict(self) -> dict:
        return {"p": self.p, "min_w_abs": self.min_w_abs, "argmin": self.argmin,
                "counted": self.counted, "constant": self.constant,
                "nonconverged": self.nonconverged, "violations": self.violations}


def summarize_roots(records: list, p_list) -> list:
    out = []
    for p in p_list:
        rs = [r for r in records if r.p == float(p)]
        good = [r for r in rs if r.converged and r.w is not None]
        best = min(good, key=lambda r: (r.w_abs, r.instance_id), default=None)
        out.append(RootSummary(
            p=float(p),
            min_w_abs=None if best is None else best.w_abs,
            argmin=None if best is None else best.instance_id,
            counted=len(good),
            constant=sum(r.constant_opa for r in rs),
            nonconverged=sum(not r.converged for r in rs),
            violations=sum(len(r.violations) for r in rs if r.converged),
        ))
    return out


def sweep_roots(spec: CorpusSpec, p_list, n: int = 1, jobs: int = 1,
                M: int = DEFAULT_GRID) -> tuple:
    """Audit every corpus instance at every ``p``; returns ``(records, summaries)``.

    Constant OPAs and non-converged solves are excluded from the minimum
    ``|w|`` and counted separately.
    """
    forms = generate_exact_forms(spec)
    tasks = [(instance_id(spec, i), form.descriptor(), float(p), n, M)
             for i, form in enumerate(forms) for p in p_list]
    records = run_tasks(tasks, jobs)
    return records, summarize_roots(records, p_list)


@dataclass(frozen=True)
class CyclicSummary:
    residuals: tuple
    lower_bounds: tuple
    residuals_nonincreasing: bool
    residuals_strictly_decreasing: bool
    bounds_nondecreasing: bool
    roots_respect_bound: bool

    @property
    def ok(self) -> bool:
        return self.residuals_nonincreasing and self.bounds_nondecreasing and self.roots_respect_bound

    def as_dict(self) -> dict:
        return {"residuals": list(self.residuals), "lower_bounds": list(self.lower_bounds),
                "residuals_nonincreasing": self.residuals_nonincreasing,
                "residuals_strictly_decreasing": self.residuals_strictly_decreasing,
                "bounds_nondecreasing": self.bounds_nondecreasing,
                "roots_respect_bound": self.roots_respect_bound}


def _check_outer(f: HpFunction) -> None:
    if not isinstance(f.exact_form, TaylorPoly):
        raise PreconditionError("the cyclicity sweep needs a polynomial f")
    zs = polynomial_roots(f.exact_form.coeffs)
    if np.any(np.abs(zs) < 1.0 - 1e-12):
        raise PreconditionError("f has zeros in the open disk, so it is not cyclic")


def sweep_cyclic(f: HpFunction, p: float, n_max: int, tol: float = BOUND_TOL,
                 iid: str = "cyclic") -> tuple:
    """Audit ``n = 0..n_max`` for a polynomial without zeros in the disk.

    Returns ``(records, summary)``; the summary checks that the residuals do
    not increase, that the root-modulus lower bound does not decrease, and
    that every root inside the disk clears that bound.
    """
    _check_outer(f)
    records = [audit(f, p, n, iid=f"{iid}-n{n:02d}", tol=tol) for n in range(n_max + 1)]
    res = tuple(r.residual_norm for r in records)
    lb = tuple(root_modulus_lower_bound(min(x, 1.0), p) for x in res)
    pairs = list(zip(res, res[1:]))
    summary = CyclicSummary(
        residuals=res,
        lower_bounds=lb,
        residuals_nonincreasing=all(b <= a + 1e-12 for a, b in pairs),
        residuals_strictly_decreasing=all(b < a for a, b in pairs),
        bounds_nondecreasing=all(b >= a - 1e-12 for a, b in zip(lb, lb[1:])),
        roots_respect_bound=all(b.satisfied for r in records for b in r.bounds
                                if b.name.startswith("root_modulus")),
    )
    return records, summary


class RegressionLock:
    """JSON file of locked scalar values, written on first use and compared afterwards."""

    def __init__(self, path):
        self.path = Path(path)
        self.values = json.loads(self.path.read_text()) if self.path.exists() else {}

    def check(self, key: str, value: float, rtol: float = 1e-6, atol: float = 1e-12,
              record: bool = True) -> tuple:
        """Return ``(ok, locked_value)``; an unknown key is locked to ``value`` when ``record``."""
        if key not in self.values:
            if record:
                self.values[key] = value
                self.save()
            return True, value
        locked = self.values[key]
        if locked is None or value is None:
            return locked == value, locked
        return math.isclose(value, locked, rel_tol=rtol, abs_tol=atol), locked

    def save(self) -> None:
        self.path.parent.mkdir(parents=True, exist_ok=True)
        self.path.write_text(json.dumps(self.values, indent=2, sort_keys=True) + "\n")
