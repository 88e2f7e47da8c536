"""Command-line front end: ``weiljacobi <command> ...``.

Exit status is 0 when every check passes, 1 when a mathematical check fails
and 2 for usage or input errors.  Artifacts go to ``--out`` (a directory),
falling back to ``$WEILJACOBI_OUT`` and then the current directory; ``--out -``
prints the artifact instead.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
from pathlib import Path

from . import colimit, flows, gji4, sdiff, serial
from .rng import stream

OK, FAILED, USAGE = 0, 1, 2
OUT_ENV = "WEILJACOBI_OUT"


class UsageError(Exception):
    pass


def dumps(data) -> str:
    return json.dumps(data, indent=2, ensure_ascii=False) + "\n"


def dumps_lines(data: dict) -> str:
    """Compact JSON with one line per top-level list item (the trace is large)."""
    compact = lambda x: json.dumps(x, separators=(",", ":"), ensure_ascii=False)
    parts = []
    for k, v in data.items():
        if isinstance(v, list) and v:
            body = ",\n".join(compact(x) for x in v)
            parts.append(f"{compact(k)}:[\n{body}\n]")
        else:
            parts.append(f"{compact(k)}:{compact(v)}")
    return "{\n" + ",\n".join(parts) + "\n}\n"


def out_dir(args) -> Path | None:
    raw = args.out if args.out is not None else os.environ.get(OUT_ENV, ".")
    if raw == "-":
        return None
    path = Path(raw)
    path.mkdir(parents=True, exist_ok=True)
    return path


def emit(args, name: str, text: str) -> None:
    where = out_dir(args)
    if where is None:
        sys.stdout.write(text)
        return
    (where / name).write_text(text, encoding="utf-8")
    print(f"wrote {where / name}")


def trial_seed(seed: int, t: int) -> int:
    return stream(seed, t).next64()


# -- verify-gji4 -----------------------------------------------------------------------------

def load_overrides(path: str | None):
    if not path:
        return None
    try:
        raw = json.loads(Path(path).read_text(encoding="utf-8"))
        return {w: {int(p): tuple(m) for p, m in table.items()} for w, table in raw.items()}
    except (OSError, ValueError, AttributeError, TypeError) as exc:
        raise UsageError(f"cannot read injection overrides {path}: {exc}") from exc


def run_symbolic(args, inj) -> int:
    trace = gji4.replay_theorem_3_2(inj, strict_displays=args.strict_displays)
    for tag, v in zip(gji4.end_tags(), trace.vectors):
        print(f"({tag}) {v}")
    print(f"({gji4.SUM_TAG}) sum = {trace.total}  zero: {trace.total.is_zero}")
    if trace.errata:
        print(f"{len(trace.errata)} displayed intermediate results disagree with the certified values:")
        for tag, diff in trace.errata:
            print(f"  ({tag}) {diff}")
    emit(args, "trace.json", dumps_lines(serial.trace_to_json(trace)))
    return OK


def run_model(args) -> int:
    failures = []
    for t in range(args.trials):
        s = trial_seed(args.seed, t)
        fam = gji4.random_compatible_family(s, m=args.m)
        total = sdiff.tangent_add(gji4.model_terms(fam))
        if not total.is_zero:
            failures.append(s)
            print(f"model trial {t} (seed {s}): nonzero sum {total}")
    summary = {"schema": "weiljacobi/model-run/1", "seed": args.seed, "m": args.m,
               "trials": args.trials, "passed": args.trials - len(failures), "failed_seeds": failures}
    print(f"model: {summary['passed']}/{args.trials} families give an exactly zero sum")
    emit(args, "model.json", dumps(summary))
    return FAILED if failures else OK


def cmd_verify_gji4(args) -> int:
    try:
        inj = gji4.build_injections(load_overrides(args.injections))
    except gji4.InjectionError as exc:
        print(f"FAILED ({exc.tag}): {exc}", file=sys.stderr)
        return FAILED
    status = OK
    try:
        if args.mode in ("symbolic", "both"):
            status = max(status, run_symbolic(args, inj))
        if args.mode in ("model", "both"):
            status = max(status, run_model(args))
    except gji4.ReplayMismatch as exc:
        print(f"FAILED ({exc.tag}): {exc}", file=sys.stderr)
        return FAILED
    except gji4.HypothesisViolation as exc:
        print(f"FAILED (seed {args.seed}): {exc}", file=sys.stderr)
        return FAILED
    return status


# -- audit-colimit ---------------------------------------------------------------------------

def load_target(target: str):
    kind, _, rest = target.partition(":")
    if kind == "builtin" and rest:
        try:
            return colimit.builtin(rest)
        except (KeyError, ValueError) as exc:
            raise UsageError(f"unknown builtin diagram {rest!r}") from exc
    if kind == "file" and rest:
        try:
            return serial.diagram_from_json(json.loads(Path(rest).read_text(encoding="utf-8")))
        except (OSError, ValueError, KeyError, TypeError, IndexError) as exc:
            raise UsageError(f"malformed diagram file {rest}: {exc}") from exc
    raise UsageError(f"target must be builtin:<name> or file:<path>, got {target!r}")


def cmd_audit_colimit(args) -> int:
    if args.target == "builtin:theorem3.1":
        audit = gji4.audit_theorem_3_1(args.trials, args.seed)
        emit(args, "audit.md", audit.to_markdown())
        emit(args, "audit.json", dumps(audit.to_json()))
        ok = (audit.edge_report.ok and all(audit.well_defined.values()) and audit.report.exists_for_all
              and audit.families_solved == audit.families_checked)
        print(f"theorem3.1: compat_dim {audit.report.compat_dim}, rank {audit.report.rank}, "
              f"kernel_dim {audit.report.kernel_dim}, families {audit.families_solved}/{audit.families_checked}")
        return OK if ok else FAILED
    diagram = load_target(args.target)
    try:
        report = colimit.check_quasi_colimit(diagram)
    except colimit.DiagramError as exc:
        print(f"FAILED ({args.target}): {exc}", file=sys.stderr)
        return FAILED
    emit(args, "report.json", dumps(serial.report_to_json(report)))
    print(f"{report.diagram}: compat_dim {report.compat_dim}, rank {report.rank}, "
          f"exists {report.exists_for_all}, unique {report.unique}")
    return OK if report.quasi_colimit else FAILED


# -- tables ----------------------------------------------------------------------------------

EXTENSIONS = {"csv": "csv", "json": "json", "text": "txt"}


def cmd_tables(args) -> int:
    text = gji4.emit_figures(args.figure, args.format)
    emit(args, f"figure{args.figure}.{EXTENSIONS[args.format]}", text)
    return OK


# -- vf --------------------------------------------------------------------------------------

def vf_trial(identity: str, rng, m: int, degree: int) -> bool:
    if identity == "1.2":
        return flows.strong_antisymmetry_sum(*flows.microsquare_pair(rng, m)).is_zero
    if identity == "1.4":
        return flows.gji3_sum(flows.gji3_family(rng, m)).is_zero
    if identity == "bracket":
        X, Y = (flows.random_field(rng, m, degree) for _ in range(2))
        x0 = flows.random_point(rng, m)
        return flows.bracket(X, Y, x0).linear == flows.classical_value(X, Y, x0)
    count = {"1.1": 2, "1.3": 3, "1.5": 4}[identity]
    fields = [flows.random_field(rng, m, degree) for _ in range(count)]
    return flows.verify_identity(identity, fields, flows.random_point(rng, m))


def cmd_vf(args) -> int:
    if args.m < 1:
        raise UsageError("--m must be positive")
    failures = []
    for t in range(args.trials):
        if not vf_trial(args.identity, stream(args.seed, t), args.m, args.degree):
            failures.append(t)
            print(f"identity {args.identity} fails at seed {args.seed}, trial {t}")
    summary = {"schema": "weiljacobi/vf-run/1", "identity": args.identity, "seed": args.seed,
               "m": args.m, "degree": args.degree, "trials": args.trials,
               "passed": args.trials - len(failures), "failed_trials": failures}
    print(f"identity {args.identity}: {summary['passed']}/{args.trials} trials hold exactly")
    emit(args, f"vf-{args.identity}.json", dumps(summary))
    return FAILED if failures else OK


# -- parser ----------------------------------------------------------------------------------

def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--seed", type=int, default=0, help="64-bit seed for SplitMix64 (default 0)")
    common.add_argument("--out", default=None,
                        help=f"output directory; '-' prints to stdout (default ${OUT_ENV} or .)")

    p = argparse.ArgumentParser(prog="weiljacobi", description=__doc__.splitlines()[0])
    sub = p.add_subparsers(dest="command", required=True)

    v = sub.add_parser("verify-gji4", parents=[common], help="four-dimensional identity, symbolic and model")
    v.add_argument("--mode", choices=("symbolic", "model", "both"), default="symbolic")
    v.add_argument("--m", type=int, default=3, help="target dimension of model families (default 3)")
    v.add_argument("--trials", type=int, default=100, help="model families to sample (default 100)")
    v.add_argument("--strict-displays", action="store_true",
                   help="abort on any displayed intermediate that differs from the computed one")
    v.add_argument("--injections", help=argparse.SUPPRESS)
    v.set_defaults(func=cmd_verify_gji4)

    a = sub.add_parser("audit-colimit", parents=[common], help="check a cocone of small objects")
    a.add_argument("target", help="builtin:lemma2.1 | builtin:lemma2.2:n | builtin:lemma2.3 | "
                                   "builtin:lemma2.4:n,m1,m2 | builtin:theorem3.1 | file:<path>")
    a.add_argument("--trials", type=int, default=1000,
                   help="random compatible families to extend for theorem3.1 (default 1000)")
    a.set_defaults(func=cmd_audit_colimit)

    t = sub.add_parser("tables", parents=[common], help="the three coefficient tables")
    t.add_argument("--figure", type=int, choices=(1, 2, 3), required=True)
    t.add_argument("--format", choices=("csv", "json", "text"), default="csv")
    t.set_defaults(func=cmd_tables)

    f = sub.add_parser("vf", parents=[common], help="identities for polynomial vector fields")
    f.add_argument("--identity", choices=flows.IDENTITIES + ("bracket",), required=True)
    f.add_argument("--m", type=int, default=3, help="space dimension (default 3)")
    f.add_argument("--degree", type=int, default=2, help="degree bound of random fields (default 2)")
    f.add_argument("--trials", type=int, default=50, help="seeded trials (default 50)")
    f.set_defaults(func=cmd_vf)
    return p


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    if getattr(args, "trials", 0) < 0:
        parser.error("--trials must be non-negative")
    try:
        return args.func(args)
    except UsageError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return USAGE


if __name__ == "__main__":
    sys.exit(main())
