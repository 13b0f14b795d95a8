"""Command-line entry point ``hpopa``."""

from __future__ import annotations

import argparse
import logging
import sys

from ..boundary import DEFAULT_GRID, format_complex
from ..errors import HpOpaError
from ..solver import SolverOptions, solve
from .audit import RegressionLock, audit, record_from_result, sweep_cyclic, sweep_roots
from .corpus import CorpusSpec, parse_function
from .io import make_header, write_csv, write_json
from .pythag import pythag_audit

EXIT_OK, EXIT_VIOLATION, EXIT_NONCONVERGED, EXIT_INPUT = 0, 2, 3, 4

log = logging.getLogger("hpopa")


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_INPUT, f"{self.prog}: error: {message}\n")


def _p_list(text: str) -> list:
    try:
        out = [float(s) for s in text.split(",") if s.strip()]
    except ValueError as exc:
        raise argparse.ArgumentTypeError(f"bad exponent list {text!r}") from exc
    if not out:
        raise argparse.ArgumentTypeError("empty exponent list")
    return out


def _status(records) -> int:
    if any(r.converged and r.violations for r in records):
        return EXIT_VIOLATION
    if any(not r.converged for r in records):
        return EXIT_NONCONVERGED
    return EXIT_OK


def _opts(args) -> SolverOptions:
    return SolverOptions(max_iters=args.max_iters)


def _describe(rec) -> str:
    parts = [f"{rec.instance_id or rec.f_descriptor} p={rec.p:g} n={rec.n}",
             f"residual={rec.residual_norm:.12g}"]
    if rec.w is not None:
        parts.append(f"w={format_complex(rec.w)} |w|={rec.w_abs:.12g}")
    if rec.constant_opa:
        parts.append("constant OPA")
    if rec.bounds:
        parts.append(f"min_slack={rec.min_bound_slack:.3e} violated={len(rec.violations)}")
    parts.append("converged" if rec.converged else "NOT CONVERGED")
    return " ".join(parts)


def cmd_solve(args) -> int:
    f = parse_function(args.f, args.grid)
    res = solve(f, args.n, args.p, _opts(args))
    print(f"coeffs: {', '.join(format_complex(c) for c in res.coeffs.coeffs)}")
    print(f"residual_pnorm: {res.residual_norm!r}")
    print(f"max_orth_residual: {max(res.orth_residuals)!r}")
    print(f"iterations: {res.iterations} converged: {res.converged}")
    if args.json:
        write_json(args.json, [record_from_result(f, res)], make_header("solve"))
    return EXIT_OK if res.converged else EXIT_NONCONVERGED


def cmd_audit(args) -> int:
    f = parse_function(args.f, args.grid)
    rec = audit(f, args.p, args.n, _opts(args))
    print(_describe(rec))
    for b in rec.bounds:
        print(f"  {b.name}: lhs={b.lhs:.12g} rhs={b.rhs:.12g} slack={b.slack:.3e}"
              f" {'ok' if b.satisfied else 'VIOLATED'}")
    for note in rec.notes:
        print(f"  note: {note}")
    if args.json:
        write_json(args.json, [rec], make_header("audit"))
    return _status([rec])


def cmd_sweep_roots(args) -> int:
    spec = CorpusSpec.load(args.corpus)
    records, summary = sweep_roots(spec, args.p, n=args.n, jobs=args.jobs, M=args.grid)
    status = _status(records)
    lock = RegressionLock(args.lock) if args.lock else None
    for s in summary:
        line = (f"p={s.p:g} min|w|={s.min_w_abs!r} at {s.argmin} counted={s.counted}"
                f" constant={s.constant} nonconverged={s.nonconverged} violations={s.violations}")
        if lock is not None and s.min_w_abs is not None:
            ok, locked = lock.check(f"sweep_roots/{spec.kind}/seed={spec.seed}/count={spec.count}/p={s.p:g}",
                                    s.min_w_abs)
            line += " lock=ok" if ok else f" lock=MISMATCH (locked {locked!r})"
            if not ok:
                status = EXIT_VIOLATION
        print(line)
    if args.csv:
        write_csv(args.csv, records)
    if args.json:
        write_json(args.json, records, make_header("sweep-roots"),
                   {"corpus": spec.as_dict(), "per_p": [s.as_dict() for s in summary]})
    return status


def cmd_sweep_cyclic(args) -> int:
    f = parse_function(args.f, args.grid)
    records, summary = sweep_cyclic(f, args.p, args.nmax)
    for rec, lb in zip(records, summary.lower_bounds):
        print(f"n={rec.n} residual={rec.residual_norm!r} root_lower_bound={lb!r}"
              f" {'converged' if rec.converged else 'NOT CONVERGED'}")
    print(f"residuals nonincreasing: {summary.residuals_nonincreasing}"
          f" (strict: {summary.residuals_strictly_decreasing});"
          f" bound nondecreasing: {summary.bounds_nondecreasing};"
          f" roots clear bound: {summary.roots_respect_bound}")
    if args.csv:
        write_csv(args.csv, records)
    if args.json:
        write_json(args.json, records, make_header("sweep-cyclic"), summary.as_dict())
    status = _status(records)
    if status == EXIT_OK and not summary.ok:
        status = EXIT_VIOLATION
    return status


def cmd_pythag(args) -> int:
    status = EXIT_OK
    for s in pythag_audit(args.p, args.trials, args.seed, args.grid):
        ok = s.min_lower_slack >= -args.tol and s.min_upper_slack >= -args.tol
        print(f"p={s.p:g} trials={s.trials} min_lower_slack={s.min_lower_slack:.3e}"
              f" min_upper_slack={s.min_upper_slack:.3e} {'ok' if ok else 'VIOLATED'}")
        if not ok:
            status = EXIT_VIOLATION
    return status


def build_parser() -> argparse.ArgumentParser:
    ap = _Parser(prog="hpopa", description="Optimal polynomial approximants in H^p and checks of their bounds.")
    ap.add_argument("-v", "--verbose", action="store_true", help="log solver diagnostics")
    sub = ap.add_subparsers(dest="command", required=True, parser_class=_Parser)

    def common(p, f=True):
        if f:
            p.add_argument("--f", required=True, help="poly:c0,c1,... or blaschke:z1,z2,...")
        p.add_argument("--grid", type=int, default=DEFAULT_GRID, help="boundary grid size M")

    s = sub.add_parser("solve", help="compute q_{n,p}[f]")
    common(s)
    s.add_argument("--p", type=float, required=True)
    s.add_argument("--n", type=int, required=True)
    s.add_argument("--json")
    s.add_argument("--max-iters", type=int, default=SolverOptions.max_iters)
    s.set_defaults(func=cmd_solve)

    s = sub.add_parser("audit", help="solve and run every applicable check")
    common(s)
    s.add_argument("--p", type=float, required=True)
    s.add_argument("--n", type=int, required=True)
    s.add_argument("--json")
    s.add_argument("--max-iters", type=int, default=SolverOptions.max_iters)
    s.set_defaults(func=cmd_audit)

    s = sub.add_parser("sweep-roots", help="root locations over a seeded corpus")
    common(s, f=False)
    s.add_argument("--corpus", required=True, help="JSON file with a corpus spec")
    s.add_argument("--p", type=_p_list, required=True, help="comma-separated exponents")
    s.add_argument("--n", type=int, default=1)
    s.add_argument("--csv")
    s.add_argument("--json")
    s.add_argument("--jobs", type=int, default=1)
    s.add_argument("--lock", help="regression-lock file for min |w|")
    s.set_defaults(func=cmd_sweep_roots)

    s = sub.add_parser("sweep-cyclic", help="residuals and root bounds for n = 0..nmax")
    common(s)
    s.add_argument("--p", type=float, required=True)
    s.add_argument("--nmax", type=int, required=True)
    s.add_argument("--csv")
    s.add_argument("--json")
    s.set_defaults(func=cmd_sweep_cyclic)

    s = sub.add_parser("pythag", help="Pythagorean inequalities on random orthogonal pairs")
    common(s, f=False)
    s.add_argument("--trials", type=int, default=1000)
    s.add_argument("--seed", type=int, default=0)
    s.add_argument("--p", type=_p_list, required=True)
    s.add_argument("--tol", type=float, default=1e-9)
    s.set_defaults(func=cmd_pythag)
    return ap


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    logging.basicConfig(level=logging.DEBUG if args.verbose else logging.WARNING,
                        format="%(levelname)s %(name)s: %(message)s")
    try:
        return args.func(args)
    except (HpOpaError, ValueError, OSError) as exc:
        print(f"hpopa: error: {exc}", file=sys.stderr)
        return EXIT_INPUT


if __name__ == "__main__":
    sys.exit(main())
