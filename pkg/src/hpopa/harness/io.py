"""JSON and CSV persistence for audit records.

Everything except the header timestamp is a pure function of the inputs,
so repeated runs produce byte-identical record bodies.
"""

from __future__ import annotations

import csv
import io
import json
from datetime import datetime, timezone
from pathlib import Path

from .. import __version__
from .audit import SCHEMA_VERSION, SweepRecord

CSV_COLUMNS = ("instance_id", "f_descriptor", "p", "n", "residual", "a_re", "a_im",
               "w_re", "w_im", "w_abs", "min_bound_slack", "converged")


def _cx(z):
    return None if z is None else [float(z.real), float(z.imag)]


def _clean(obj):
    """Convert numpy scalars and complex numbers into plain JSON values."""
    if isinstance(obj, dict):
        return {k: _clean(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_clean(v) for v in obj]
    if isinstance(obj, complex):
        return _cx(obj)
    if hasattr(obj, "item"):
        return _clean(obj.item())
    return obj


def record_to_dict(rec: SweepRecord) -> dict:
    """Stable field order: the fixed schema first, then harness extras."""
    formulas = None
    if rec.formulas is not None:
        formulas = rec.formulas.as_dict()
        formulas["abcd"] = rec.abcd
    d = {
        "schema_version": SCHEMA_VERSION,
        "p": rec.p,
        "n": rec.n,
        "grid": rec.grid,
        "coeffs": [_cx(c) for c in rec.coeffs],
        "residual_pnorm": rec.residual_norm,
        "orth_residuals": list(rec.orth_residuals),
        "a": _cx(rec.a),
        "w": _cx(rec.w),
        "bounds": [b.as_dict() for b in rec.bounds],
        "formulas": formulas,
        "converged": rec.converged,
        "iterations": rec.iterations,
        "instance_id": rec.instance_id,
        "f": rec.f_descriptor,
        "w_abs": rec.w_abs,
        "roots": [_cx(z) for z in rec.roots],
        "constant_opa": rec.constant_opa,
        "notes": list(rec.notes),
    }
    return _clean(d)


def make_header(command: str) -> dict:
    return {"tool": "hpopa", "version": __version__, "command": command,
            "timestamp": datetime.now(timezone.utc).isoformat(timespec="seconds")}


def dumps_records(records, header: dict | None = None, summary=None) -> str:
    doc = {"header": header or {}, "records": [record_to_dict(r) for r in records]}
    if summary is not None:
        doc["summary"] = _clean(summary)
    return json.dumps(doc, indent=1, allow_nan=True) + "\n"


def write_json(path, records, header: dict | None = None, summary=None) -> None:
    Path(path).write_text(dumps_records(records, header, summary))


def _num(x) -> str:
    return "" if x is None else repr(float(x))


def csv_row(rec: SweepRecord) -> list:
    a, w = rec.a, rec.w
    return [rec.instance_id, rec.f_descriptor, _num(rec.p), str(rec.n), _num(rec.residual_norm),
            _num(None if a is None else a.real), _num(None if a is None else a.imag),
            _num(None if w is None else w.real), _num(None if w is None else w.imag),
            _num(rec.w_abs), _num(rec.min_bound_slack), "true" if rec.converged else "false"]


def dumps_csv(records) -> str:
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(CSV_COLUMNS)
    for rec in records:
        writer.writerow(csv_row(rec))
    return buf.getvalue()


def write_csv(path, records) -> None:
    Path(path).write_text(dumps_csv(records))
