"""Command-line front end: factor, verify, lowerbound, sweep, lattice, filtration.

All commands are deterministic functions of their arguments and input
files; wall-clock timings go to stderr so repeated runs produce
byte-identical files and stdout.  The default seed comes from the
TRACELESS_SEED environment variable (0 when unset) and every tolerance is
overridable by flag.

Exit codes: 0 success, 1 verification failed, 2 parse/usage error,
3 nonzero trace, 4 numerical failure.
"""

from __future__ import annotations

import argparse
import json
import math
import os
import sys
import time

import numpy as np

from . import lattice as lattice_mod
from .factorizer import factor
from .filtration import build_filtration, verify_filtration_structure
from .linalg import commutator, hs_norm, operator_norm
from .lowerbound import lower_bound_report
from .matio import MatrixFormatError, read_matrix, write_matrix, write_points

EXIT_OK = 0
EXIT_FAIL = 1
EXIT_PARSE = 2
EXIT_TRACE = 3
EXIT_NUMERICAL = 4


def _default_seed() -> int:
    try:
        return int(os.environ.get("TRACELESS_SEED", "0"))
    except ValueError:
        return 0


def _emit_json(payload: dict, out_path: str | None) -> None:
    text = json.dumps(payload, indent=2, sort_keys=True) + "\n"
    if out_path:
        with open(out_path, "w", encoding="utf-8", newline="\n") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def _read_matrix_or_exit(path: str) -> np.ndarray:
    try:
        return read_matrix(path)
    except (MatrixFormatError, OSError) as exc:
        print(f"error: cannot read matrix {path!r}: {exc}", file=sys.stderr)
        raise SystemExit(EXIT_PARSE)


def _random_trace_zero(m: int, seed: int) -> np.ndarray:
    """Ginibre-style test matrix, diagonal shifted to zero trace."""
    rng = np.random.default_rng([seed, m, 0x7A11])
    a = (rng.standard_normal((m, m)) + 1j * rng.standard_normal((m, m))) / math.sqrt(2.0 * m)
    a -= (np.trace(a) / m) * np.eye(m)
    return a


def cmd_factor(args) -> int:
    a = _read_matrix_or_exit(args.input)
    if a.shape[0] != a.shape[1]:
        print("error: input matrix is not square", file=sys.stderr)
        return EXIT_PARSE
    if abs(np.trace(a)) > 1e-10 * max(1.0, hs_norm(a)):
        print(f"error: trace {np.trace(a):.6e} is not zero", file=sys.stderr)
        return EXIT_TRACE
    try:
        cert = factor(a, trials=args.trials, seed=args.seed,
                      optimize_assignment=args.optimize_assignment, tol=args.tol)
    except np.linalg.LinAlgError as exc:
        print(f"error: numerical failure: {exc}", file=sys.stderr)
        return EXIT_NUMERICAL
    os.makedirs(args.out_dir, exist_ok=True)
    paths = {name: os.path.join(args.out_dir, f"{name}.txt") for name in ("B", "C", "Q")}
    write_matrix(paths["B"], cert.b)
    write_matrix(paths["C"], cert.c)
    write_matrix(paths["Q"], cert.q)
    payload = {
        "m": cert.m,
        "residual": cert.residual,
        "op_norm_b": cert.op_norm_b,
        "hs_norm_c": cert.hs_norm_c,
        "hs_norm_a": cert.hs_norm_a,
        "ratio": cert.ratio,
        "bound": cert.bound,
        "seed": cert.seed,
        "trials": cert.trials,
        "valid": cert.valid,
        "rng": cert.rng,
        "diag_residual": cert.diag_residual,
        # references relative to the certificate's own directory
        "b_path": "B.txt",
        "c_path": "C.txt",
        "q_path": "Q.txt",
    }
    _emit_json(payload, os.path.join(args.out_dir, "certificate.json"))
    print(f"ratio={cert.ratio:.17g} bound={cert.bound:.17g} valid={cert.valid}")
    return EXIT_OK if cert.valid else EXIT_NUMERICAL


def cmd_verify(args) -> int:
    a = _read_matrix_or_exit(args.a)
    b = _read_matrix_or_exit(args.b)
    c = _read_matrix_or_exit(args.c)
    if not (a.shape == b.shape == c.shape) or a.shape[0] != a.shape[1]:
        print("error: matrices must be square and of equal dimension", file=sys.stderr)
        return EXIT_PARSE
    residual = hs_norm(a - commutator(b, c))
    op_b = operator_norm(b)
    hs_c = hs_norm(c)
    hs_a = hs_norm(a)
    ratio = op_b * hs_c / hs_a if hs_a > 0.0 else 0.0
    residual_ok = residual <= args.tol * max(1.0, op_b * hs_c)
    sanity_ok = hs_a <= 2.0 * op_b * hs_c + args.tol * max(1.0, op_b * hs_c)
    _emit_json(
        {
            "residual": residual,
            "op_norm_b": op_b,
            "hs_norm_c": hs_c,
            "hs_norm_a": hs_a,
            "ratio": ratio,
            "residual_ok": residual_ok,
            "sanity_hs_le_2_opb_hsc": sanity_ok,
        },
        None,
    )
    return EXIT_OK if residual_ok and sanity_ok else EXIT_FAIL


def cmd_lowerbound(args) -> int:
    if args.m < 2:
        print("error: m must be >= 2", file=sys.stderr)
        return EXIT_PARSE
    try:
        report = lower_bound_report(args.m, trials=args.trials, seed=args.seed,
                                    rank_tol=args.rank_tol)
    except np.linalg.LinAlgError as exc:
        print(f"error: numerical failure: {exc}", file=sys.stderr)
        return EXIT_NUMERICAL
    payload = {
        "m": report.m,
        "normalization": report.normalization,
        "dims": report.dims,
        "dims_ok": report.dims_ok,
        "filtration_complete": report.filtration_complete,
        "block_residual": report.block_residual,
        "block_tol": report.block_tol,
        "trace_inequality": [
            {
                "n": r.n,
                "lhs": r.lhs,
                "rhs": r.rhs,
                "slack": r.slack,
                "passed": r.passed,
                "rank_cum": r.rank_cum,
                "normbd_bound": r.normbd_bound,
                "normbd_passed": r.normbd_passed,
            }
            for r in report.trace_records
        ],
        "partial_sums": [
            {"l": r.l, "sum": r.partial_sum, "bound": r.bound, "passed": r.passed}
            for r in report.partial_sums.records
        ],
        "partial_sums_triangular": [
            {"l": r.l, "sum": r.partial_sum, "bound": r.bound, "passed": r.passed}
            for r in report.partial_sums.triangular_records
        ],
        "quarter_log_sum": report.quarter_log_sum,
        "iso_residual_v": report.iso_residual_v,
        "iso_residual_w": report.iso_residual_w,
        "v_norm": report.v_norm,
        "w_norm": report.w_norm,
        "hs_lower_pass": report.hs_lower_pass,
        "hs_lower": [
            {
                "m": r.m,
                "ratio": r.ratio,
                "ratio_sq": r.ratio_sq,
                "log_m": r.log_m,
                "window_lower": r.window_lower,
                "passed": r.passed,
                "c_prime_empirical": r.c_prime_empirical,
                "o1_empirical": r.o1_empirical,
            }
            for r in report.hs_lower.records
        ],
        "all_strict_passed": report.all_strict_passed,
    }
    _emit_json(payload, args.out)
    return EXIT_OK if report.all_strict_passed else EXIT_FAIL


def cmd_sweep(args) -> int:
    t0 = time.perf_counter()
    records = []
    for m in sorted(set(args.m)):
        if m < 2:
            print("error: all m must be >= 2", file=sys.stderr)
            return EXIT_PARSE
        for seed in sorted(set(args.seeds)):
            t_rec = time.perf_counter()
            a = _random_trace_zero(m, seed)
            cert = factor(a, trials=args.trials, seed=seed)
            wall_ms = 1000.0 * (time.perf_counter() - t_rec)
            records.append((m, seed, cert.ratio, cert.ratio**2 - math.log(m), wall_ms))
    lines = ["m,seed,ratio,ratio_sq_minus_log_m"]
    for m, seed, ratio, excess, _ in records:
        lines.append(f"{m},{seed},{ratio:.17g},{excess:.17g}")
    text = "\n".join(lines) + "\n"
    with open(args.out, "w", encoding="utf-8", newline="\n") as fh:
        fh.write(text)
    if records:
        excesses = [r[3] for r in records]
        logs = np.array([math.log(r[0]) for r in records])
        ratios_sq = np.array([r[2] ** 2 for r in records])
        if len(set(r[0] for r in records)) > 1:
            slope, intercept = np.polyfit(logs, ratios_sq, 1)
        else:
            slope, intercept = float("nan"), float("nan")
        print(
            f"records={len(records)} max_ratio_sq_minus_log_m={max(excesses):.17g} "
            f"regression_ratio_sq_on_log_m: slope={slope:.17g} intercept={intercept:.17g}"
        )
    else:
        print("records=0")
    print(f"wall_ms={1000.0 * (time.perf_counter() - t0):.1f}", file=sys.stderr)
    return EXIT_OK


def cmd_lattice(args) -> int:
    if args.m < 2:
        print("error: m must be >= 2", file=sys.stderr)
        return EXIT_PARSE
    base = lattice_mod.gaussian_points(args.m)
    report = lattice_mod.pair_expectation(base)
    payload = {
        "m": args.m,
        "radius_bound": base.radius_bound,
        "pair_energy": report.pair_energy,
        "expectation": report.expectation,
        "bound_value": report.bound_value,
        "excess_over_pi_log_m": args.m * report.expectation - math.pi * math.log(args.m),
    }
    points = base.points
    if args.optimize:
        points, energy = lattice_mod.optimize_configuration(args.m, args.iterations, args.seed)
        payload["optimized_energy"] = energy
        payload["relative_improvement"] = (
            (report.pair_energy - energy) / report.pair_energy if report.pair_energy > 0 else 0.0
        )
    if args.out:
        write_points(args.out, points)
    _emit_json(payload, None)
    return EXIT_OK


def cmd_filtration(args) -> int:
    s = _read_matrix_or_exit(args.s)
    t = _read_matrix_or_exit(args.t)
    mb = _read_matrix_or_exit(args.m_basis)
    try:
        lam_re, lam_im = (float(p) for p in args.lam.split(","))
    except ValueError:
        print(f"error: bad --lam value {args.lam!r}, expected re,im", file=sys.stderr)
        return EXIT_PARSE
    try:
        filt = build_filtration(s, t, mb, rank_tol=args.rank_tol)
        report = verify_filtration_structure(filt, s, t, complex(lam_re, lam_im), mb)
    except ValueError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_PARSE
    except np.linalg.LinAlgError as exc:
        print(f"error: numerical failure: {exc}", file=sys.stderr)
        return EXIT_NUMERICAL
    payload = {
        "dims": report.dims,
        "dims_ok": report.dims_ok,
        "rank_tolerance": filt.rank_tolerance,
        "hypothesis_residual": report.hypothesis_residual,
        "hypothesis_tol": report.hypothesis_tol,
        "hypothesis_ok": report.hypothesis_ok,
        "structure_residual_s": report.structure_residual_s,
        "structure_residual_t": report.structure_residual_t,
        "structure_tol": report.structure_tol,
        "structure_ok": report.structure_ok,
        "invariance_residual": report.invariance_residual,
        "invariance_tol": report.invariance_tol,
        "invariance_ok": report.invariance_ok,
        "all_ok": report.all_ok,
    }
    _emit_json(payload, args.out)
    return EXIT_OK if report.all_ok else EXIT_FAIL


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="traceless",
        description="Factor trace-zero complex matrices as commutators "
        "A = [B, C] with B normal and certified norm bounds.",
    )
    sub = parser.add_subparsers(dest="command", required=True)
    seed = _default_seed()

    p = sub.add_parser("factor", help="factor a trace-zero matrix, write B, C, Q and a certificate")
    p.add_argument("input", help="matrix file (text format)")
    p.add_argument("--out-dir", default=".", help="output directory")
    p.add_argument("--trials", type=int, default=32)
    p.add_argument("--seed", type=int, default=seed)
    p.add_argument("--tol", type=float, default=1e-10,
                   help="zero-diagonal tolerance for the reduction")
    p.add_argument("--optimize-assignment", action="store_true",
                   help="pairwise-swap descent on the winning assignment")
    p.set_defaults(func=cmd_factor)

    p = sub.add_parser("verify", help="check A = [B, C] and print norms and ratio")
    p.add_argument("a")
    p.add_argument("b")
    p.add_argument("c")
    p.add_argument("--tol", type=float, default=1e-10)
    p.set_defaults(func=cmd_verify)

    p = sub.add_parser("lowerbound", help="factor the witness matrix and verify the whole inequality chain")
    p.add_argument("-m", type=int, required=True)
    p.add_argument("--trials", type=int, default=32)
    p.add_argument("--seed", type=int, default=seed)
    p.add_argument("--rank-tol", type=float, default=None)
    p.add_argument("--out", default=None, help="report path (stdout when omitted)")
    p.set_defaults(func=cmd_lowerbound)

    p = sub.add_parser("sweep", help="ratio sweep over random trace-zero matrices, CSV output")
    p.add_argument("--m", type=int, nargs="*", default=[])
    p.add_argument("--seeds", type=int, nargs="*", default=[seed])
    p.add_argument("--trials", type=int, default=32)
    p.add_argument("--out", required=True, help="CSV path")
    p.set_defaults(func=cmd_sweep)

    p = sub.add_parser("lattice", help="emit the canonical lattice points and their pair energy")
    p.add_argument("m", type=int)
    p.add_argument("--optimize", action="store_true")
    p.add_argument("--iterations", type=int, default=1000)
    p.add_argument("--seed", type=int, default=seed)
    p.add_argument("--out", default=None, help="points file path")
    p.set_defaults(func=cmd_lattice)

    p = sub.add_parser("filtration", help="build the degree filtration for user-supplied S, T, M")
    p.add_argument("s")
    p.add_argument("t")
    p.add_argument("m_basis")
    p.add_argument("--lam", default="0,0", help="shift lambda as re,im")
    p.add_argument("--rank-tol", type=float, default=None)
    p.add_argument("--out", default=None)
    p.set_defaults(func=cmd_filtration)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        # argparse exits 2 on usage errors already; normalize other codes
        return int(exc.code) if exc.code is not None else EXIT_PARSE
    try:
        return args.func(args)
    except SystemExit as exc:
        return int(exc.code) if exc.code is not None else EXIT_PARSE
    except ValueError as exc:
        msg = str(exc)
        print(f"error: {msg}", file=sys.stderr)
        if "trace" in msg:
            return EXIT_TRACE
        return EXIT_PARSE
    except np.linalg.LinAlgError as exc:
        print(f"error: numerical failure: {exc}", file=sys.stderr)
        return EXIT_NUMERICAL


if __name__ == "__main__":
    sys.exit(main())
