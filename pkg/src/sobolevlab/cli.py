"""Command-line front end: ``sobolevlab <command> [options]``.

Every command prints one JSON document on stdout.  Floats carry 17
significant digits and non-finite values are written as the strings "inf",
"-inf" and "nan", so identical arguments give byte-identical output.

Exit codes: 0 success, 1 numerical failure, 2 invalid arguments or potential
spec, 3 the hypotheses of the perturbation bound (or of its Gaussian-reference
corollary) fail for the given input.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import math
import os
import sys
import time
from pathlib import Path

import numpy as np

from . import __version__
from .beckner import DEFAULT_SWEEP, beckner_quotient, entropy_quotient, estimate_c1_entropy, estimate_cp, quotient_gradient
from .errors import InvalidInputError, InvalidSpecError, SobolevLabError
from .measure import DEFAULT_N, GridFunction, build_measure, write_grid_function
from .perturbation import DEFAULT_P_LIST, DEFAULT_SIGMAS, corollary2_sweep, corollary5_check, theorem1_bound
from .potential import gaussian, parse_potential
from .spectral import spectral_gap
from .suites import SUITES, run_suite

EXIT_OK, EXIT_NUMERICAL, EXIT_USAGE, EXIT_HYPOTHESIS = 0, 1, 2, 3
#: default directory for witness CSV files when --witness is not given
OUTPUT_DIR_ENV = "SOBOLEVLAB_OUTPUT_DIR"
SELFTEST_POINTS = 20
SELFTEST_TOL = 1e-5


# -- deterministic JSON --------------------------------------------------------

def _fmt_float(x: float) -> str:
    if math.isnan(x):
        return '"nan"'
    if math.isinf(x):
        return '"inf"' if x > 0 else '"-inf"'
    s = format(x, ".17g")
    if not any(c in s for c in ".en"):
        s += ".0"
    return s


def _escape(s: str) -> str:
    return json.dumps(s)


def dumps(obj, indent: int = 2, _level: int = 0) -> str:
    """JSON with fixed 17-digit floats and sorted keys."""
    pad = " " * (indent * (_level + 1))
    end = " " * (indent * _level)
    if obj is None:
        return "null"
    if isinstance(obj, (bool, np.bool_)):
        return "true" if obj else "false"
    if isinstance(obj, (int, np.integer)):
        return str(int(obj))
    if isinstance(obj, (float, np.floating)):
        return _fmt_float(float(obj))
    if isinstance(obj, str):
        return _escape(obj)
    if isinstance(obj, dict):
        if not obj:
            return "{}"
        items = [f"{pad}{_escape(str(k))}: {dumps(obj[k], indent, _level + 1)}" for k in sorted(obj, key=str)]
        return "{\n" + ",\n".join(items) + "\n" + end + "}"
    if isinstance(obj, (list, tuple, np.ndarray)):
        if len(obj) == 0:
            return "[]"
        items = [f"{pad}{dumps(v, indent, _level + 1)}" for v in obj]
        return "[\n" + ",\n".join(items) + "\n" + end + "]"
    raise TypeError(f"cannot serialize {type(obj).__name__}")


# -- argument helpers ----------------------------------------------------------

def _float_list(text: str) -> list[float]:
    try:
        return [float(t) for t in text.split(",") if t.strip()]
    except ValueError as exc:
        raise argparse.ArgumentTypeError(f"expected comma-separated numbers, got {text!r}") from exc


def _domain(text: str) -> tuple[float, float]:
    vals = _float_list(text)
    if len(vals) != 2:
        raise argparse.ArgumentTypeError(f"--domain takes a,b (got {text!r})")
    return vals[0], vals[1]


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_USAGE, f"{self.prog}: error: {message}\n")


def _grid_args(p: argparse.ArgumentParser) -> None:
    p.add_argument("--grid-n", type=int, default=DEFAULT_N, help="number of grid nodes (default %(default)s)")
    p.add_argument("--domain", type=_domain, default=None, help="explicit domain a,b (default: automatic)")


def _witness_arg(p: argparse.ArgumentParser) -> None:
    p.add_argument("--witness", type=Path, default=None, help=f"CSV path for the witness (default: ${OUTPUT_DIR_ENV}/...)")


def build_parser() -> argparse.ArgumentParser:
    ap = _Parser(prog="sobolevlab", description="Poincare, Beckner and log-Sobolev constants of e^{-V} dx.")
    ap.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = ap.add_subparsers(dest="command", required=True, parser_class=_Parser)

    p = sub.add_parser("gap", help="Poincare constant C2 from the spectral gap")
    p.add_argument("--potential", required=True)
    _grid_args(p)
    p.add_argument("--out", choices=("json", "csv"), default="json", help="csv prints the gap eigenfunction")

    p = sub.add_parser("cp", help="variational lower bound on C_p")
    p.add_argument("--potential", required=True)
    p.add_argument("--p", type=float, required=True)
    p.add_argument("--mode", choices=("unrestricted", "restricted"), default="unrestricted")
    _grid_args(p)
    _witness_arg(p)

    p = sub.add_parser("c1", help="log-Sobolev lower bound and the p -> 1 sweep")
    p.add_argument("--potential", required=True)
    p.add_argument("--sweep-p", type=_float_list, default=list(DEFAULT_SWEEP))
    _grid_args(p)
    _witness_arg(p)

    p = sub.add_parser("bound", help="perturbation upper bound on C_p")
    p.add_argument("--potential", required=True)
    p.add_argument("--reference", required=True)
    p.add_argument("--p", type=float, required=True)
    p.add_argument("--grid-n", type=int, default=DEFAULT_N)

    p = sub.add_parser("sweep", help="perturbation bounds along p -> 1")
    p.add_argument("--potential", required=True)
    p.add_argument("--reference", required=True)
    p.add_argument("--p-list", type=_float_list, default=list(DEFAULT_P_LIST))
    p.add_argument("--grid-n", type=int, default=DEFAULT_N)

    p = sub.add_parser("cor5", help="Gaussian references x^2/(2 sigma^2): local condition and best sigma")
    p.add_argument("--potential", required=True)
    p.add_argument("--sigma-list", type=_float_list, default=list(DEFAULT_SIGMAS))
    p.add_argument("--p", type=float, default=1.5)
    p.add_argument("--grid-n", type=int, default=DEFAULT_N)

    p = sub.add_parser("check", help="randomized property suites")
    p.add_argument("--suite", choices=SUITES, required=True)
    p.add_argument("--trials", type=int, default=None)
    p.add_argument("--seed", type=int, default=42)
    p.add_argument("--grid-n", type=int, default=DEFAULT_N)

    p = sub.add_parser("selftest", help="analytic gradient vs finite differences, grid convergence")
    p.add_argument("--seed", type=int, default=0)
    return ap


# -- commands ------------------------------------------------------------------

def _measure(args):
    V = parse_potential(args.potential)
    return build_measure(V, args.grid_n, args.domain or "auto")


def _witness_path(args, stem: str) -> Path | None:
    if args.witness is not None:
        return args.witness
    base = os.environ.get(OUTPUT_DIR_ENV)
    if not base:
        return None
    Path(base).mkdir(parents=True, exist_ok=True)
    return Path(base) / f"{stem}.csv"


def _export(witness: GridFunction, path: Path | None) -> str | None:
    if path is None:
        return None
    write_grid_function(witness, path)
    return str(path)


def cmd_gap(args, out):
    mu = _measure(args)
    est = spectral_gap(mu)
    v = est.witness
    if args.out == "csv":
        buf = io.StringIO(newline="")
        w = csv.writer(buf, lineterminator="\r\n")
        w.writerow(["x", "value"])
        for xi, vi in zip(mu.nodes, v.values):
            w.writerow([repr(float(xi)), repr(float(vi))])
        out.write(buf.getvalue())
        return EXIT_OK, None
    vals = v.values
    summary = {
        "sign_changes": int(np.count_nonzero(np.diff(np.sign(vals[mu.weights > 0])) != 0)),
        "argmax": float(mu.nodes[int(np.argmax(vals))]),
        "argmin": float(mu.nodes[int(np.argmin(vals))]),
        "normalization": "int v^2 dmu = 1, int v dmu = 0, v(b) > 0",
    }
    return EXIT_OK, {"c2": est.value, "estimate": est.to_dict(), "eigenfunction": summary}


def cmd_cp(args, out):
    mu = _measure(args)
    est = estimate_cp(mu, args.p, args.mode)
    path = _export(est.witness, _witness_path(args, f"cp_p{args.p:g}_{args.mode}"))
    return EXIT_OK, {"cp": est.value, "estimate": est.to_dict(), "witness_path": path}


def cmd_c1(args, out):
    mu = _measure(args)
    est = estimate_c1_entropy(mu, sweep_p=args.sweep_p)
    path = _export(est.witness, _witness_path(args, "c1"))
    return EXIT_OK, {"c1": est.value, "estimate": est.to_dict(), "witness_path": path}


def cmd_bound(args, out):
    V, W = parse_potential(args.potential), parse_potential(args.reference)
    rep = theorem1_bound(V, W, args.p, args.grid_n)
    code = EXIT_OK if rep.passed else EXIT_HYPOTHESIS
    return code, {"report": rep.to_json_dict(), "diagnostics": rep.diagnostics}


def cmd_sweep(args, out):
    V, W = parse_potential(args.potential), parse_potential(args.reference)
    res = corollary2_sweep(V, W, args.p_list, args.grid_n)
    entries = []
    for p, rep in zip(sorted(args.p_list, reverse=True), res.reports):
        entries.append(rep.to_json_dict() if rep is not None else {"p": p, "error": res.errors.get(p)})
    payload = {
        "reports": entries,
        "endpoint": res.endpoint.to_json_dict() if res.endpoint else None,
        "liminf_surrogate": res.liminf_surrogate,
        "smallest_p_value": res.smallest_p_value,
    }
    code = EXIT_OK if res.liminf_surrogate is not None else EXIT_HYPOTHESIS
    return code, payload


def cmd_cor5(args, out):
    V = parse_potential(args.potential)
    res = corollary5_check(V, args.sigma_list, args.p, args.grid_n)
    entries = [
        {
            "sigma": e.sigma,
            "passed": e.passed,
            "e_inf_grid": e.e_inf_grid,
            "e_inf_location": e.e_inf_location,
            "e_tail": e.e_tail,
            "e_bounded_below": e.e_bounded_below,
            "z_integrable": e.z_integrable,
            "report": e.report.to_json_dict(),
        }
        for e in res.entries
    ]
    code = EXIT_OK if res.any_passed else EXIT_HYPOTHESIS
    return code, {"sigmas": entries, "best_sigma": res.best_sigma}


def cmd_check(args, out):
    res = run_suite(args.suite, args.trials, args.seed, args.grid_n)
    if not res.passed:
        sys.stderr.write(res.failure_csv())
    return (EXIT_OK if res.passed else EXIT_NUMERICAL), res.to_dict()


def gradient_check(seed: int = 0, points: int = SELFTEST_POINTS, n: int = 64) -> dict:
    """Max relative deviation between the analytic quotient gradient and
    central finite differences, over random (p, u) on a Gaussian grid."""
    rng = np.random.default_rng(seed)
    mu = build_measure(gaussian(1.0), n)
    x = mu.nodes / np.max(np.abs(mu.nodes))
    worst = 0.0
    for _ in range(points):
        p = None if rng.random() < 0.2 else float(rng.uniform(1.05, 2.0))
        coef = rng.normal(size=4)
        u = np.polynomial.polynomial.polyval(x, coef) + rng.normal(scale=0.1, size=n)
        # keep |u| away from 0, where |u|^(2/p) has a kink
        u = np.where(np.abs(u) < 0.05, 0.05 * np.sign(u) + (u == 0) * 0.05, u)
        f = GridFunction(mu, u)
        g = quotient_gradient(f, p)
        q = (lambda vals: entropy_quotient(GridFunction(mu, vals))) if p is None else (
            lambda vals: beckner_quotient(GridFunction(mu, vals), p)
        )
        fd = np.empty(n)
        for i in range(n):
            step = 1e-6 * max(1.0, abs(u[i]))
            up, dn = u.copy(), u.copy()
            up[i] += step
            dn[i] -= step
            fd[i] = (q(up) - q(dn)) / (2 * step)
        worst = max(worst, float(np.max(np.abs(fd - g)) / np.max(np.abs(g))))
    return {"points": points, "max_relative_deviation": worst, "tolerance": SELFTEST_TOL, "passed": worst <= SELFTEST_TOL}


def grid_convergence(ns=(1001, 2001, 4001)) -> dict:
    """C2 of the standard Gaussian against its exact value 1 on refined grids."""
    errs = [abs(spectral_gap(build_measure(gaussian(1.0), n)).value - 1.0) for n in ns]
    ok = all(b <= a or b < 1e-9 for a, b in zip(errs, errs[1:])) and errs[-1] < 5e-3
    return {"n": list(ns), "c2_error": errs, "passed": ok}


def cmd_selftest(args, out):
    grad = gradient_check(args.seed)
    conv = grid_convergence()
    ok = grad["passed"] and conv["passed"]
    return (EXIT_OK if ok else EXIT_NUMERICAL), {"gradient": grad, "grid_convergence": conv, "passed": ok}


COMMANDS = {
    "gap": cmd_gap,
    "cp": cmd_cp,
    "c1": cmd_c1,
    "bound": cmd_bound,
    "sweep": cmd_sweep,
    "cor5": cmd_cor5,
    "check": cmd_check,
    "selftest": cmd_selftest,
}


def run(argv=None, out=None) -> int:
    out = out or sys.stdout
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code) if exc.code is not None else EXIT_OK
    params = {k: (str(v) if isinstance(v, Path) else v) for k, v in vars(args).items()}
    t0 = time.perf_counter()
    try:
        code, result = COMMANDS[args.command](args, out)
    # every input-validation error, including an unavailable reference constant, is a ValueError
    except (InvalidSpecError, InvalidInputError, ValueError) as exc:
        sys.stderr.write(f"sobolevlab: invalid input: {exc}\n")
        return EXIT_USAGE
    except (SobolevLabError, ArithmeticError, np.linalg.LinAlgError) as exc:
        sys.stderr.write(f"sobolevlab: numerical failure: {exc}\n")
        return EXIT_NUMERICAL
    if result is not None:
        doc = {"command": args.command, "parameters": params, "exit_code": code, "result": result}
        if os.environ.get("SOBOLEVLAB_TIMING"):
            doc["seconds"] = time.perf_counter() - t0
        out.write(dumps(doc) + "\n")
    return code


def main(argv=None) -> int:
    return run(argv)


if __name__ == "__main__":
    raise SystemExit(main())
