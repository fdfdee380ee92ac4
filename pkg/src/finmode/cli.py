"""Command-line front end.

Exit codes: 0 success, 1 negative verdict (NonSolution or a failed check),
2 usage or input error.
"""
from __future__ import annotations

import argparse
import json
import sys
from fractions import Fraction

from . import campaigns, fixtures
from . import freq as fq
from .classifier import (
    NonSolution,
    NscCertificate,
    certificate_to_dict,
    classify_euler,
    classify_nsc,
)
from .dynamics import GalerkinSystem, default_truncation, extended_support, integrate, support_growth_report
from .field import SchemaError, parse, serialize, validate

DEFAULT_SEED = 0


class UsageError(Exception):
    pass


def _floats(text: str, n: int | None = None) -> list[float]:
    try:
        vals = [float(x) for x in text.split(",") if x.strip() != ""]
    except ValueError as exc:
        raise UsageError(f"bad number list {text!r}") from exc
    if n is not None and len(vals) != n:
        raise UsageError(f"expected {n} comma-separated values, got {text!r}")
    return vals


def _rational_vec(text: str) -> tuple:
    try:
        parts = [Fraction(x.strip()) for x in text.split(",")]
    except (ValueError, ZeroDivisionError) as exc:
        raise UsageError(f"bad vector {text!r}") from exc
    if len(parts) != 3 or all(p == 0 for p in parts):
        raise UsageError(f"expected a nonzero 3-vector, got {text!r}")
    return tuple(parts)


def _read_field(path: str):
    try:
        if path == "-":
            text = sys.stdin.read()
        else:
            with open(path, encoding="utf-8") as fh:
                text = fh.read()
    except OSError as exc:
        raise UsageError(str(exc)) from exc
    return parse(text)


def _emit(obj) -> None:
    sys.stdout.write(json.dumps(obj, indent=2, sort_keys=False) + "\n")


# --------------------------------------------------------------------------
# subcommands


def cmd_make(args) -> int:
    kind = args.kind
    if kind == "abc":
        field = fixtures.abc(args.A, args.B, args.C)
    elif kind == "perturbed-abc":
        field = fixtures.perturbed_abc(args.A, args.B, args.C, args.factor)
    elif kind == "tetrahedron":
        field = fixtures.tetrahedron()
    elif kind == "line":
        field = fixtures.line(_rational_vec(args.direction), args.modes or 2, args.seed)
    elif kind == "planar-perp":
        field = fixtures.planar_perp(_rational_vec(args.normal), args.modes or 3, args.seed)
    elif kind == "planar-q":
        q = _floats(args.q) if args.q else []
        if args.p < 4 or args.p % 2:
            raise UsageError("--p must be an even number of at least 4")
        seed = None if args.seed_alphas is False else args.seed
        field = fixtures.planar_q(_rational_vec(args.normal), q, args.p, seed)
    elif kind == "beltrami-random":
        if (args.modes or 6) < 3:
            raise UsageError("--modes must be at least 3 for a Beltrami field")
        field = fixtures.beltrami_random(args.seed, args.modes or 6, args.sign)
    else:  # argparse restricts choices
        raise UsageError(f"unknown kind {kind}")
    sys.stdout.write(serialize(field))
    return 0


def cmd_validate(args) -> int:
    field = _read_field(args.file)
    report = validate(field, args.tol)
    _emit(report.to_dict())
    return 0 if report.ok else 1


def cmd_classify(args) -> int:
    field = _read_field(args.file)
    try:
        if args.nu == 0 and args.omega == 0:
            cert = classify_euler(field, args.tol)
        else:
            cert = classify_nsc(field, args.nu, args.omega, args.tol)
    except ValueError as exc:
        raise UsageError(str(exc)) from exc
    _emit(certificate_to_dict(cert))
    base = cert.certificate if isinstance(cert, NscCertificate) else cert
    return 1 if isinstance(base, NonSolution) else 0


def cmd_simulate(args) -> int:
    field = _read_field(args.file)
    if args.dt <= 0 or args.t_end < 0:
        raise UsageError("need dt > 0 and t-end >= 0")
    if field.zero_mode is not None:
        raise UsageError("remove the zero mode before simulating")
    S = field.support
    if args.truncation == "default":
        T = default_truncation(S)
    elif args.truncation == "extended":
        T = extended_support(S)
    else:
        raise UsageError(f"unknown truncation {args.truncation}")
    T = sorted(set(T) | set(S), key=fq.sort_key)
    system = GalerkinSystem(T, args.nu, args.omega)
    traj = integrate(system, field, args.t_end, args.dt, save_every=args.save_every)
    if args.jsonl:
        with open(args.jsonl, "w", encoding="utf-8") as fh:
            traj.write_jsonl(fh)
    if args.csv:
        with open(args.csv, "w", encoding="utf-8") as fh:
            traj.write_csv(fh)
    growth = support_growth_report(traj, S)
    d0, d1 = traj.diagnostics[0], traj.diagnostics[-1]
    _emit({
        "truncation_size": len(T),
        "steps": len(traj.diagnostics) - 1,
        "energy_initial": d0["energy"],
        "energy_final": d1["energy"],
        "max_realness_drift": max(d["realness_drift"] for d in traj.diagnostics),
        "growth": [{"n": [str(c) for c in e.frequency], "time": e.time, "peak": e.peak}
                   for e in growth],
    })
    return 0


def cmd_verify(args) -> int:
    if args.trials < 1:
        raise UsageError("--trials must be at least 1")
    res = campaigns.run(args.lemma, args.trials, args.seed)
    print(f"seed {args.seed}")
    print(res.summary())
    return 0 if res.ok else 1


# --------------------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="finmode", description="Finite-mode Euler flow toolkit")
    p.add_argument("--threads", type=int, default=1, help="accepted for compatibility; output is thread-independent")
    sub = p.add_subparsers(dest="command", required=True)

    m = sub.add_parser("make", help="emit a fixture field as JSON")
    m.add_argument("kind", choices=fixtures.KINDS)
    m.add_argument("--A", type=float, default=1.0)
    m.add_argument("--B", type=float, default=1.0)
    m.add_argument("--C", type=float, default=1.0)
    m.add_argument("--factor", type=float, default=2.0, help="scale of the A cos x term (perturbed-abc)")
    m.add_argument("--normal", default="0,0,1")
    m.add_argument("--direction", default="1,0,0")
    m.add_argument("--q", default="", help="Q coefficients beta_1,beta_2,... (no constant term)")
    m.add_argument("--p", type=int, default=4, help="number of circle points (planar-q)")
    m.add_argument("--modes", type=int, default=None, help="number of conjugate pairs")
    m.add_argument("--sign", choices=["plus", "minus"], default="plus")
    m.add_argument("--seed", type=int, default=DEFAULT_SEED)
    m.add_argument("--random-alphas", dest="seed_alphas", action="store_true", default=False,
                   help="draw planar-q amplitudes from the seed instead of the fixed default")
    m.set_defaults(func=cmd_make)

    v = sub.add_parser("validate", help="check field invariants")
    v.add_argument("file")
    v.add_argument("--tol", type=float, default=1e-10)
    v.set_defaults(func=cmd_validate)

    c = sub.add_parser("classify", help="classify a field")
    c.add_argument("file")
    c.add_argument("--nu", type=float, default=0.0)
    c.add_argument("--omega", type=float, default=0.0)
    c.add_argument("--tol", type=float, default=1e-10)
    c.set_defaults(func=cmd_classify)

    s = sub.add_parser("simulate", help="integrate the Galerkin system with RK4")
    s.add_argument("file")
    s.add_argument("--t-end", dest="t_end", type=float, default=1.0)
    s.add_argument("--dt", type=float, default=1e-3)
    s.add_argument("--nu", type=float, default=0.0)
    s.add_argument("--omega", type=float, default=0.0)
    s.add_argument("--truncation", choices=["default", "extended"], default="default")
    s.add_argument("--save-every", dest="save_every", type=int, default=100)
    s.add_argument("--jsonl", default=None, help="write snapshots as JSON lines")
    s.add_argument("--csv", default=None, help="write diagnostics CSV")
    s.set_defaults(func=cmd_simulate)

    r = sub.add_parser("verify", help="run a randomized lemma campaign")
    r.add_argument("lemma", choices=sorted(campaigns.CAMPAIGNS))
    r.add_argument("--trials", type=int, default=100)
    r.add_argument("--seed", type=int, default=DEFAULT_SEED)
    r.set_defaults(func=cmd_verify)
    return p


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return 0 if exc.code == 0 else 2
    try:
        return args.func(args)
    except (UsageError, SchemaError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
