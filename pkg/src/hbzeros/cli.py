"""Command-line front end: ``hbzeros solve | verify | constants | eval``.

Exit codes: 0 success, 1 numerical failure / no convergence, 2 converged but a
certificate failed, 64 usage error, 65 evaluation point outside the modelled
range, 66 missing or corrupt input file.
"""
from __future__ import annotations

import argparse
import csv
import hashlib
import json
import math
import sys
from dataclasses import dataclass, field
from datetime import datetime, timezone
from pathlib import Path

import numpy as np

from . import __version__
from .errors import HBZerosError, InvariantViolation, NoConvergence, OutOfRange
from .extremal import (PhiEvaluator, asymptotic_tail_constant, constant_bracket, eval_phi,
                       residual_start)
from .operators import OperatorTruncation, apply_B, compute_w
from .seqspace import ZeroTable, deltas_to_zeros
from .solver import (Certificate, SolverConfig, ball_certificates, certify_ball,
                     estimate_contraction, extend_deltas, extended_zeros, fixed_point_solve)
from .special import gauss_legendre

SCHEMA_VERSION = 1
EXIT_OK, EXIT_FAIL, EXIT_CERT, EXIT_USAGE, EXIT_RANGE, EXIT_INPUT = 0, 1, 2, 64, 65, 66
ZEROS_HEADER = ["n", "tau_n", "delta_n"]
RESIDUAL_BOUND = 1e-6
LOW_N = 100
CONTRACTION_N_MAX = 512


class UsageError(Exception):
    pass


class InputError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        print(f"error: {message}", file=sys.stderr)
        raise SystemExit(EXIT_USAGE)


def _err(msg):
    print(f"error: {msg}", file=sys.stderr)


def _warn(msg):
    print(f"warn: {msg}", file=sys.stderr)


# -- files ------------------------------------------------------------------


def write_zeros_csv(path, zeros: ZeroTable) -> None:
    """n,tau_n,delta_n with shortest round-trip float formatting."""
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    with path.open("w", encoding="utf-8", newline="") as fh:
        fh.write(",".join(ZEROS_HEADER) + "\n")
        for n, (t, d) in enumerate(zip(zeros.tau.tolist(), zeros.delta.tolist()), start=1):
            fh.write(f"{n},{t!r},{d!r}\n")


def read_zeros_csv(path) -> ZeroTable:
    path = Path(path)
    if not path.is_file():
        raise InputError(f"zeros file not found: {path}")
    try:
        with path.open(encoding="utf-8", newline="") as fh:
            rows = list(csv.reader(fh))
    except (OSError, UnicodeDecodeError) as exc:
        raise InputError(f"cannot read {path}: {exc}") from exc
    if not rows or [c.strip() for c in rows[0]] != ZEROS_HEADER:
        raise InputError(f"{path}: expected header {','.join(ZEROS_HEADER)}")
    tau, delta = [], []
    for lineno, row in enumerate(rows[1:], start=2):
        if not row:
            continue
        try:
            n, t, d = int(row[0]), float(row[1]), float(row[2])
        except (ValueError, IndexError) as exc:
            raise InputError(f"{path}:{lineno}: malformed row {row!r}") from exc
        if n != len(tau) + 1:
            raise InputError(f"{path}:{lineno}: expected n = {len(tau) + 1}, found {n}")
        tau.append(t)
        delta.append(d)
    if not tau:
        raise InputError(f"{path}: no data rows")
    try:
        return ZeroTable(np.array(tau), np.array(delta))
    except InvariantViolation as exc:
        raise InputError(f"{path}: {exc}") from exc


def _write_json(path, payload) -> None:
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    with path.open("w", encoding="utf-8") as fh:
        json.dump(payload, fh, indent=2, sort_keys=True, allow_nan=True)
        fh.write("\n")


def _sha256(path) -> str:
    return hashlib.sha256(Path(path).read_bytes()).hexdigest()


@dataclass
class RunManifest:
    config: dict
    command: str
    artifacts: list = field(default_factory=list)
    timestamp: str = field(
        default_factory=lambda: datetime.now(timezone.utc).isoformat(timespec="seconds"))
    software_version: str = __version__

    def add(self, path) -> None:
        self.artifacts.append({"path": str(path), "sha256": _sha256(path),
                               "bytes": Path(path).stat().st_size})

    def as_dict(self) -> dict:
        return {"schema_version": SCHEMA_VERSION, "command": self.command,
                "config": self.config, "timestamp": self.timestamp,
                "software_version": self.software_version, "artifacts": self.artifacts}


# -- shared helpers -----------------------------------------------------------


def _add_solver_flags(p):
    p.add_argument("--n-truncate", type=int, default=400, help="truncation N (>= 8)")
    p.add_argument("--tol", type=float, default=1e-10, help="l2 step tolerance")
    p.add_argument("--max-iter", type=int, default=30)
    p.add_argument("--quad-order", type=int, default=8)
    p.add_argument("--fast-apply", action="store_true", help="FFT-based A and B products")


def _config(args) -> SolverConfig:
    if args.n_truncate < 8:
        raise UsageError(f"--n-truncate must be at least 8, got {args.n_truncate}")
    if not (args.tol > 0 and math.isfinite(args.tol)):
        raise UsageError(f"--tol must be positive, got {args.tol}")
    if args.max_iter < 1:
        raise UsageError("--max-iter must be at least 1")
    if not 1 <= args.quad_order <= 64:
        raise UsageError("--quad-order must lie in 1..64")
    return SolverConfig(N=args.n_truncate, max_iter=args.max_iter, tol=args.tol,
                        quad_order=args.quad_order, fast_apply=args.fast_apply)


def _zeros_from_args(args) -> ZeroTable:
    """Zeros from --zeros, or from a fresh solve with the solver flags."""
    if args.zeros:
        return read_zeros_csv(args.zeros)
    report = fixed_point_solve(_config(args))
    return report.zeros()


def _print_certificates(certs) -> None:
    width = max(len(c.name) for c in certs)
    for c in certs:
        status = "PASS" if c.passed else "FAIL"
        slack = f" + {c.slack:.3g}" if c.slack else ""
        print(f"  {c.name:<{width}}  {c.value:.6e} <= {c.bound:.6g}{slack}  {status}")


# -- commands -----------------------------------------------------------------


def cmd_solve(args) -> int:
    cfg = _config(args)
    if args.extend and args.extend < cfg.N:
        raise UsageError("--extend must be 0 or at least --n-truncate")
    out = Path(args.out)
    report_path = Path(args.report) if args.report else out.with_name("report.json")
    manifest_path = out.with_name("manifest.json")
    try:
        report = fixed_point_solve(cfg)
    except NoConvergence as exc:
        _err(str(exc))
        return EXIT_FAIL
    certs = certify_ball(report)
    zeros = extended_zeros(report, args.extend) if args.extend else report.zeros()
    write_zeros_csv(out, zeros)

    payload = {
        "schema_version": SCHEMA_VERSION,
        "command": "solve",
        "config": cfg.as_dict(),
        "converged": report.converged,
        "iterations": report.iterations,
        "step_norms": list(report.step_norms),
        "contraction_ratios": list(report.contraction_ratios),
        "norm_delta": report.norm_delta,
        "norm_x": report.norm_x,
        "norm_Bw": report.norm_Bw,
        "residual": report.residual,
        "tail_bounds": report.tail_bounds(),
        "truncation_N": cfg.N,
        "rows_written": zeros.N,
        "extended_to": args.extend or None,
        "asymptotic_tail_constant": asymptotic_tail_constant(zeros),
        "certificates": certs.as_list(),
        "certified": certs.passed,
        "first_zeros": zeros.tau[:4].tolist(),
    }
    _write_json(report_path, payload)
    manifest = RunManifest(config=cfg.as_dict() | {"extend": args.extend}, command="solve")
    manifest.add(out)
    manifest.add(report_path)
    _write_json(manifest_path, manifest.as_dict())

    print(f"converged in {report.iterations} iterations; ||delta|| = {report.norm_delta:.6f}")
    print("first zeros: " + ", ".join(f"{t:.6f}" for t in zeros.tau[:4]))
    _print_certificates(certs.certificates)
    if not certs.passed:
        _warn("converged, but at least one certificate failed")
        return EXIT_CERT
    return EXIT_OK


def verify_zeros(zeros: ZeroTable, k_max: int = 50, quad_order: int = 8) -> dict:
    """Certificates for a zero table read from disk; see ``cmd_verify``."""
    N = zeros.N
    rule = gauss_legendre(quad_order)
    w = compute_w(N, rule).w
    Bw = apply_B(w, OperatorTruncation(max(N, 4), fast_apply=True)).values[:N]
    Nc = max(8, min(N, CONTRACTION_N_MAX))
    contraction = estimate_contraction(zeros.delta[:Nc], SolverConfig(N=Nc, quad_order=quad_order))
    certs = ball_certificates(zeros.delta, Bw, contraction)

    K = min(k_max, N // 2)
    low = N < LOW_N
    if K >= 1:
        ks = np.arange(1, K + 1)
        res = np.abs(residual_start(zeros, ks))
        slack = 0.0
        if low:
            # widen by the size of the modelled tail term itself
            c = abs(asymptotic_tail_constant(zeros))
            slack = float(np.max(c / math.pi * np.log((N + 1 + ks) / (N + 1 - ks)) / ks))
        certs.append(Certificate("residual_start", float(res.max()), RESIDUAL_BOUND, slack,
                                 bool(res.max() <= RESIDUAL_BOUND + slack),
                                 note=f"max over k = 1..{K}"))
    else:
        certs.append(Certificate("residual_start", float("nan"), RESIDUAL_BOUND, 0.0, False,
                                 note="table too short for any row"))
    return {"certificates": certs, "N": N, "k_max": K, "low_truncation": low}


def cmd_verify(args) -> int:
    zeros = read_zeros_csv(args.zeros)
    if args.k_max < 1:
        raise UsageError("--k-max must be positive")
    result = verify_zeros(zeros, args.k_max, args.quad_order)
    certs = result["certificates"]
    if result["low_truncation"]:
        _warn(f"low truncation N = {zeros.N} (< {LOW_N}); residual bound widened by the tail term")
    print(f"verify {args.zeros}: N = {zeros.N}, residual rows k <= {result['k_max']}")
    _print_certificates(certs)
    passed = all(c.passed for c in certs)
    if args.report:
        _write_json(args.report, {
            "schema_version": SCHEMA_VERSION, "command": "verify", "input": str(args.zeros),
            "N": zeros.N, "k_max": result["k_max"], "low_truncation": result["low_truncation"],
            "certificates": [c.as_dict() for c in certs], "passed": passed})
    return EXIT_OK if passed else EXIT_CERT


def cmd_constants(args) -> int:
    zeros = _zeros_from_args(args)
    if args.extend and args.extend > zeros.N:
        d = extend_deltas(zeros.delta, args.extend, args.quad_order)
        zeros = deltas_to_zeros(d)
    tail_start = args.tail_start or zeros.N
    if args.n_zeros < 1 or args.n_zeros > tail_start - 5:
        raise UsageError(f"--n-zeros must lie in 1..{tail_start - 5}")
    ev = PhiEvaluator(zeros, tail_start)
    cb = constant_bracket(ev, args.n_zeros, args.quad_tol)
    lo, hi = cb.reference
    print(f"||phi||_1           = {cb.phi_l1:.12f}  (tail {cb.tail:.3e} +- {cb.uncertainty:.1e})")
    print(f"lower bound 1/||phi|| = {cb.lower:.12f}")
    print(f"  interval          = [{cb.lower_interval[0]:.12f}, {cb.lower_interval[1]:.12f}]")
    print(f"reference bracket   = [{lo:.10f}, {hi:.10f}]")
    print(f"gap to bracket      = {cb.gap:+.3e}")
    print("upper bound term    = not computed")
    payload = cb.as_dict() | {"schema_version": SCHEMA_VERSION, "command": "constants",
                              "zeros_rows": zeros.N, "tail_start": tail_start}
    _write_json(args.out, payload)
    return EXIT_OK


def _grid(args):
    if args.at is not None:
        if any(v is not None for v in (args.start, args.stop, args.step)):
            raise UsageError("use either --at or --from/--to/--step")
        return np.array(args.at, dtype=np.float64)
    if None in (args.start, args.stop, args.step):
        raise UsageError("need --at, or all of --from, --to and --step")
    if not args.step > 0 or args.stop < args.start:
        raise UsageError("grid needs --step > 0 and --to >= --from")
    count = int(math.floor((args.stop - args.start) / args.step + 1e-9)) + 1
    return args.start + args.step * np.arange(count)


def cmd_eval(args) -> int:
    xs = _grid(args)
    zeros = _zeros_from_args(args)
    ev = PhiEvaluator(zeros, args.tail_start or zeros.N)
    try:
        values = eval_phi(ev, xs)
    except OutOfRange as exc:
        _err(str(exc))
        return EXIT_RANGE
    if args.at is not None and not args.out:
        for x, v in zip(xs.tolist(), values.tolist()):
            print(f"{x!r} {v!r}")
        return EXIT_OK
    out = Path(args.out or "phi.csv")
    out.parent.mkdir(parents=True, exist_ok=True)
    with out.open("w", encoding="utf-8", newline="") as fh:
        fh.write("x,phi\n")
        for x, v in zip(xs.tolist(), values.tolist()):
            fh.write(f"{x!r},{v!r}\n")
    print(f"wrote {xs.size} rows to {out}")
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="hbzeros", description="Zeros of the L^1-extremal Paley-Wiener function.")
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    p = sub.add_parser("solve", help="run the fixed-point iteration and write zeros.csv")
    _add_solver_flags(p)
    p.add_argument("--out", default="zeros.csv")
    p.add_argument("--report", default=None, help="report path (default: report.json beside --out)")
    p.add_argument("--extend", type=int, default=0,
                   help="continue the solution to this many rows before writing")
    p.set_defaults(func=cmd_solve)

    p = sub.add_parser("verify", help="certify a zeros.csv file")
    p.add_argument("--zeros", default="zeros.csv")
    p.add_argument("--k-max", type=int, default=50)
    p.add_argument("--quad-order", type=int, default=8)
    p.add_argument("--report", default=None)
    p.set_defaults(func=cmd_verify)

    p = sub.add_parser("constants", help="||phi||_1 and the lower bound for the constant")
    _add_solver_flags(p)
    p.add_argument("--zeros", default=None, help="zeros.csv (default: solve afresh)")
    p.add_argument("--n-zeros", type=int, default=300)
    p.add_argument("--extend", type=int, default=4096,
                   help="continue the zero table to this many rows (0 disables)")
    p.add_argument("--tail-start", type=int, default=0)
    p.add_argument("--quad-tol", type=float, default=1e-10)
    p.add_argument("--out", default="constants.json")
    p.set_defaults(func=cmd_constants)

    p = sub.add_parser("eval", help="tabulate phi")
    _add_solver_flags(p)
    p.add_argument("--zeros", default=None, help="zeros.csv (default: solve afresh)")
    p.add_argument("--at", type=float, action="append", default=None)
    p.add_argument("--from", dest="start", type=float, default=None)
    p.add_argument("--to", dest="stop", type=float, default=None)
    p.add_argument("--step", type=float, default=None)
    p.add_argument("--tail-start", type=int, default=0)
    p.add_argument("--out", default=None)
    p.set_defaults(func=cmd_eval)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return exc.code if isinstance(exc.code, int) else EXIT_USAGE
    try:
        return args.func(args)
    except UsageError as exc:
        parser.print_usage(sys.stderr)
        _err(str(exc))
        return EXIT_USAGE
    except InputError as exc:
        _err(str(exc))
        return EXIT_INPUT
    except NoConvergence as exc:
        _err(str(exc))
        return EXIT_FAIL
    except HBZerosError as exc:
        _err(f"numerical failure: {exc}")
        return EXIT_FAIL


if __name__ == "__main__":
    sys.exit(main())
