"""Command-line front end.

Each subcommand writes CSV data (and, unless disabled, an SVG figure) into
``--out`` and prints a short summary. Exit codes: 0 success, 1 property
violation, 2 bad arguments, 3 I/O failure, 4 matrix-file parse error.
"""

from __future__ import annotations

import argparse
import cmath
import csv
import math
import os
import sys
from pathlib import Path

import numpy as np

from . import matrixio
from .contraction import (
    DEFAULT_BAND,
    Classification,
    region_scan,
    three_way_trials,
    volterra_contraction_oracle,
)
from .curves import compare_wv, reference_boundary
from .errors import InvalidArgumentError, MatrixParseError, RangeError
from .geometry import face, numerical_range_boundary
from .operators import MoebiusParams, build_volterra, operator_power
from .spectral import eigenvalues
from .witnesses import witness_g_quotient, witness_gr_quotient, witness_h_quotient

EXIT_OK, EXIT_VIOLATION, EXIT_ARGS, EXIT_IO, EXIT_PARSE = 0, 1, 2, 3, 4
WITNESS_TOL = 1e-6


class UsageError(Exception):
    pass


def _num(x) -> str:
    return repr(float(x))


def _complex_arg(text):
    try:
        return matrixio.parse_complex(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected re:im, got {text!r}") from None


def _floats(text, count, what):
    parts = text.split(":")
    if len(parts) != count:
        raise argparse.ArgumentTypeError(f"{what} needs {count} ':'-separated values, got {text!r}")
    try:
        return tuple(float(p) for p in parts)
    except ValueError:
        raise argparse.ArgumentTypeError(f"bad number in {text!r}") from None


def _window_arg(text):
    return _floats(text, 4, "--window")


def _res_arg(text):
    nx, ny = _floats(text, 2, "--res")
    if nx != int(nx) or ny != int(ny) or nx < 2 or ny < 2:
        raise argparse.ArgumentTypeError("--res needs integers >= 2")
    return int(nx), int(ny)


def _dims_arg(text):
    lo, hi = _floats(text, 2, "--dims") if ":" in text else (float(text),) * 2
    if lo != int(lo) or hi != int(hi) or lo < 1 or hi < lo:
        raise argparse.ArgumentTypeError("--dims needs integers 1 <= lo <= hi")
    return int(lo), int(hi)


def _gr_arg(text):
    n, theta, r = _floats(text, 3, "--gr")
    if n != int(n):
        raise argparse.ArgumentTypeError("--gr power must be an integer")
    return int(n), theta, r


def _write_csv(path: Path, header, rows):
    with open(path, "w", newline="", encoding="utf-8") as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(header)
        w.writerows(rows)


def _formats(args):
    want_csv = args.csv or not (args.csv or args.svg)
    want_svg = args.svg or not (args.csv or args.svg)
    return want_csv, want_svg


def _outdir(args) -> Path:
    out = Path(args.out)
    out.mkdir(parents=True, exist_ok=True)
    if not os.access(out, os.W_OK):
        raise PermissionError(f"output directory {out} is not writable")
    return out


def _check_grid(n):
    if n < 2:
        raise UsageError("--n must be at least 2")


def cmd_verify_theorem1(args) -> int:
    if args.trials < 1:
        raise UsageError("--trials must be >= 1")
    trials = three_way_trials(args.trials, args.dims, args.seed)
    out = _outdir(args)
    rows = [
        [
            t.trial, t.dim, _num(t.lam.real), _num(t.lam.imag), _num(t.mu.real), _num(t.mu.imag),
            _num(t.direct_norm), _num(t.quad_gap), _num(t.support_lhs), _num(t.support_rhs), t.status,
        ]
        for t in trials
    ]
    header = ["trial", "dim", "lambda_re", "lambda_im", "mu_re", "mu_im",
              "direct_norm", "quad_gap", "support_lhs", "support_rhs", "agree"]
    _write_csv(out / "verify_theorem1.csv", header, rows)
    counts = {s: sum(t.status == s for t in trials) for s in ("agree", "disagree", "borderline", "singular")}
    contractions = sum(t.direct_norm <= 1 for t in trials if t.status == "agree")
    print(f"trials={len(trials)} " + " ".join(f"{k}={v}" for k, v in counts.items()) + f" contractions={contractions}")
    return EXIT_VIOLATION if counts["disagree"] else EXIT_OK


def _scan_rows(scan, oracle):
    rows = []
    for lam, norm, cls in scan.cells():
        rows.append([_num(lam.real), _num(lam.imag), _num(norm), cls.value, oracle(lam)])
    return rows


def cmd_volterra_region(args) -> int:
    _check_grid(args.n)
    mu = args.mu
    band = args.tol
    scan = region_scan(build_volterra(args.n), mu, args.window, args.res, band=band)
    out = _outdir(args)
    want_csv, want_svg = _formats(args)

    def oracle(lam):
        return "" if lam == mu else str(volterra_contraction_oracle(MoebiusParams(lam, mu))).lower()

    if want_csv:
        _write_csv(out / "volterra_region.csv",
                   ["lambda_re", "lambda_im", "direct_norm", "classification", "oracle_norm_one"],
                   _scan_rows(scan, oracle))
    violations = 0
    worst_on = 0.0
    for lam, norm, cls in scan.cells():
        if lam == mu or cls is Classification.SINGULAR:
            continue
        if cls is Classification.CONTRACTION:
            violations += 1
        if volterra_contraction_oracle(MoebiusParams(lam, mu)):
            worst_on = max(worst_on, abs(norm - 1))
            if cls is Classification.NON_CONTRACTION:
                violations += 1
    if want_svg:
        from .plotting import region_figure, save_figure

        segment = (-mu.conjugate(), mu) if mu.real > 0 else None
        fig = region_figure(scan, f"V_N, N={args.n}, mu={mu:g}", segment)
        save_figure(fig, out / "volterra_region.svg")
    print(
        f"cells={scan.cell_count} "
        + " ".join(f"{c.value}={scan.count(c)}" for c in Classification)
        + f" max|norm-1| on predicted segment={worst_on:.3e} band={band:g} violations={violations}"
    )
    return EXIT_VIOLATION if violations else EXIT_OK


def cmd_vn_region(args) -> int:
    _check_grid(args.n)
    if args.power < 2:
        raise UsageError("--power must be >= 2")
    mu = args.mu
    op = operator_power(build_volterra(args.n), args.power)
    scan = region_scan(op, mu, args.window, args.res, band=args.tol)
    out = _outdir(args)
    want_csv, want_svg = _formats(args)
    if want_csv:
        _write_csv(out / "vn_region.csv",
                   ["lambda_re", "lambda_im", "direct_norm", "classification", "lambda_equals_mu"],
                   _scan_rows(scan, lambda lam: str(lam == mu).lower()))
    off = scan.off_diagonal() & np.isfinite(scan.norms)
    min_norm = float(scan.norms[off].min()) if off.any() else math.nan
    violations = int(np.sum(scan.norms[off] <= 1.0))
    if want_svg:
        from .plotting import region_figure, save_figure

        fig = region_figure(scan, f"V_N^{args.power}, N={args.n}, mu={mu:g}")
        save_figure(fig, out / "vn_region.svg")
    print(
        f"cells={scan.cell_count} "
        + " ".join(f"{c.value}={scan.count(c)}" for c in Classification)
        + f" min norm off lambda=mu: {min_norm!r} margin={min_norm - 1:.6e} violations={violations}"
    )
    return EXIT_VIOLATION if violations else EXIT_OK


def cmd_numrange(args) -> int:
    if args.angles < 8:
        raise UsageError("--angles must be >= 8")
    if args.matrix_file:
        a = matrixio.load(args.matrix_file)
        label = Path(args.matrix_file).name
        volterra = False
    else:
        _check_grid(args.n)
        a = build_volterra(args.n).matrix
        label = f"V_N, N={args.n}"
        volterra = True
    bnd = numerical_range_boundary(a, args.angles)
    out = _outdir(args)
    want_csv, want_svg = _formats(args)
    if want_csv:
        rows = [[_num(th), _num(s), _num(w.real), _num(w.imag)] for th, s, w in bnd.samples()]
        _write_csv(out / "numrange.csv", ["theta", "support", "re", "im"], rows)
    ref = reference_boundary() if volterra else None
    if want_svg:
        from .plotting import numrange_figure, save_figure

        eigs = eigenvalues(a) if a.shape[0] <= 400 else None
        fig = numrange_figure(bnd, f"W(A): {label}", ref.samples if ref is not None else None, eigs)
        save_figure(fig, out / "numrange.svg")
    msg = f"angles={len(bnd)} dim={bnd.source_dim} consistent={bnd.check()}"
    if ref is not None:
        dev = float(np.max(np.abs(bnd.support - ref.support(bnd.thetas))))
        msg += f" max deviation from reference curve={dev:.3e}"
    print(msg)
    return EXIT_OK if bnd.check() else EXIT_VIOLATION


def cmd_witnesses(args) -> int:
    if args.n_max < 0:
        raise UsageError("--n-max must be >= 0")
    header = ["id", "closed_re", "closed_im", "quad_re", "quad_im", "abs_diff", "target_arg", "measured_arg", "error"]
    rows = []
    bad = 0
    for n in range(1, args.n_max + 1):
        pairs = [(witness_g_quotient(n, s), witness_g_quotient(n, s, "quadrature")) for s in (1, -1)]
        pairs.append((witness_h_quotient(n), witness_h_quotient(n, "quadrature")))
        for closed, quad in pairs:
            diff = abs(closed.quotient - quad.quotient)
            bad += diff > WITNESS_TOL
            rows.append([closed.description, _num(closed.quotient.real), _num(closed.quotient.imag),
                         _num(quad.quotient.real), _num(quad.quotient.imag), _num(diff), "", "", ""])
    for n, theta, r in args.gr:
        target = math.remainder(n * theta, 2 * math.pi)
        try:
            q = witness_gr_quotient(n, theta, r)
        except (RangeError, InvalidArgumentError) as exc:
            rows.append([f"g_r(n={n}, theta={theta:g}, r={r:g})", "", "", "", "", "", _num(target), "", str(exc)])
            continue
        rows.append([q.description, "", "", _num(q.quotient.real), _num(q.quotient.imag), "",
                     _num(target), _num(cmath.phase(q.quotient)), ""])
    out = _outdir(args)
    _write_csv(out / "witnesses.csv", header, rows)
    print(f"rows={len(rows)} closed/quadrature mismatches above {WITNESS_TOL:g}: {bad}")
    return EXIT_VIOLATION if bad else EXIT_OK


def cmd_curves(args) -> int:
    _check_grid(args.n)
    if args.angles < 8:
        raise UsageError("--angles must be >= 8")
    ref = reference_boundary()
    op = build_volterra(args.n)
    cmp = compare_wv(op, args.angles, reference=ref)
    lo, hi = sorted(face(op.matrix, math.pi), key=lambda z: z.imag)
    out = _outdir(args)
    want_csv, want_svg = _formats(args)
    if want_csv:
        _write_csv(out / "wv_reference.csv", ["re", "im"], [[_num(w.real), _num(w.imag)] for w in ref.samples])
        rows = [[_num(th), _num(c), _num(r), _num(abs(c - r))] for th, c, r in cmp.per_angle]
        _write_csv(out / "wv_compare.csv", ["theta", "computed_support", "reference_support", "deviation"], rows)
    if want_svg:
        from .plotting import numrange_figure, save_figure, support_figure

        bnd = numerical_range_boundary(op.matrix, args.angles)
        save_figure(numrange_figure(bnd, f"W(V_N), N={args.n}", ref.samples), out / "wv_boundary.svg")
        save_figure(support_figure(cmp.thetas, cmp.computed, cmp.reference, f"support of W(V_N), N={args.n}"),
                    out / "wv_support.svg")
    print(
        f"N={args.n} angles={args.angles} max deviation={cmp.max_deviation:.3e} "
        f"left face=[{lo.imag:.6f}i, {hi.imag:.6f}i] (reference +-{1 / (2 * math.pi):.6f}i)"
    )
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--out", default="out", help="output directory (created if missing)")
    common.add_argument("--csv", action="store_true", help="write CSV (default: CSV and SVG)")
    common.add_argument("--svg", action="store_true", help="write SVG (default: CSV and SVG)")
    common.add_argument("--seed", type=int, default=1)

    region = argparse.ArgumentParser(add_help=False)
    region.add_argument("--n", type=int, default=400, help="grid size N")
    region.add_argument("--mu", type=_complex_arg, default=complex(1.0), help="mu as re:im")
    region.add_argument("--window", type=_window_arg, default=(-1.5, 1.5, -1.5, 1.5), help="x0:x1:y0:y1")
    region.add_argument("--res", type=_res_arg, default=(31, 31), help="nx:ny")
    region.add_argument("--tol", type=float, default=DEFAULT_BAND, help="boundary band around norm 1")

    parser = argparse.ArgumentParser(prog="moebius", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("verify-theorem1", parents=[common], help="three-way contraction test on random matrices")
    p.add_argument("--trials", type=int, default=1000)
    p.add_argument("--dims", type=_dims_arg, default=(2, 8), help="lo:hi matrix dimensions")
    p.set_defaults(func=cmd_verify_theorem1)

    p = sub.add_parser("volterra-region", parents=[common, region], help="lambda-plane scan for V_N")
    p.set_defaults(func=cmd_volterra_region)

    p = sub.add_parser("vn-region", parents=[common, region], help="lambda-plane scan for V_N^n, n >= 2")
    p.add_argument("--power", type=int, default=2)
    p.set_defaults(func=cmd_vn_region)

    p = sub.add_parser("numrange", parents=[common], help="numerical range boundary")
    p.add_argument("--source", choices=["volterra", "file"], default="volterra")
    p.add_argument("--matrix-file", help="matrix file (implies --source file)")
    p.add_argument("--n", type=int, default=400)
    p.add_argument("--angles", type=int, default=256)
    p.set_defaults(func=cmd_numrange)

    p = sub.add_parser("witnesses", parents=[common], help="witness quotients for V^-1 and V^-n")
    p.add_argument("--n-max", type=int, default=3)
    p.add_argument("--gr", type=_gr_arg, action="append", default=[], help="n:theta:r, repeatable")
    p.set_defaults(func=cmd_witnesses)

    p = sub.add_parser("curves", parents=[common], help="compare W(V_N) with the reference boundary of W(V)")
    p.add_argument("--n", type=int, default=400)
    p.add_argument("--angles", type=int, default=128)
    p.set_defaults(func=cmd_curves)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    if args.command == "numrange" and args.source == "file" and not args.matrix_file:
        parser.error("--source file needs --matrix-file")
    try:
        return args.func(args)
    except (UsageError, InvalidArgumentError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_ARGS
    except MatrixParseError as exc:
        print(f"parse error: {exc}", file=sys.stderr)
        return EXIT_PARSE
    except OSError as exc:
        print(f"I/O error: {exc}", file=sys.stderr)
        return EXIT_IO


if __name__ == "__main__":
    sys.exit(main())
