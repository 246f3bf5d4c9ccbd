"""Command-line front end: figure sweeps, stage dumps and Markovianity reports.

Exit codes: 0 success, 2 argument error, 3 numerical or physicality failure.
"""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

import numpy as np

from . import cv_gaussian, dv_teleport, nonmarkov, sweeps
from .metrics import gaussian_fidelity_1mode, trace_distance, uhlmann_fidelity
from .qudit_core import (
    PhysicalityError,
    basis_ket,
    check_density_matrix,
    ket_to_dm,
    pauli_z_d,
    plus_ket,
    random_density_matrix,
    werner,
)
from .svg import line_chart

EXIT_ARGS = 2
EXIT_NUMERIC = 3


class ArgumentError(Exception):
    pass


def load_matrix(path: str | Path) -> np.ndarray:
    """Read rows of whitespace-separated ``re,im`` pairs into a complex matrix."""
    rows = []
    for line in Path(path).read_text().splitlines():
        line = line.strip()
        if not line or line.startswith("#"):
            continue
        row = []
        for tok in line.split():
            re, sep, im = tok.partition(",")
            row.append(complex(float(re), float(im) if sep else 0.0))
        rows.append(row)
    if not rows or any(len(r) != len(rows) for r in rows):
        raise ArgumentError(f"{path}: expected a square matrix of re,im pairs")
    return np.array(rows, dtype=complex)


def format_matrix(m: np.ndarray) -> str:
    return "\n".join(" ".join(f"{z.real:.9g},{z.imag:.9g}" for z in row) for row in m)


def select_input(choice: str, d: int, seed: int) -> np.ndarray:
    if choice == "ket0":
        return ket_to_dm(basis_ket(d, 0))
    if choice == "maximally_mixed":
        return np.eye(d, dtype=complex) / d
    if choice == "random":
        return random_density_matrix(d, np.random.default_rng(seed))
    rho = load_matrix(choice)
    if rho.shape != (d, d):
        raise ArgumentError(f"{choice}: input is {rho.shape[0]}-dimensional, --d is {d}")
    try:
        return check_density_matrix(rho)
    except PhysicalityError as exc:
        raise ArgumentError(f"{choice}: not a valid density matrix ({exc})") from exc


def _emit(text: str, out: str) -> None:
    if out == "-":
        sys.stdout.write(text)
    else:
        Path(out).write_text(text)


def _emit_sweep(rows, args, xlabel: str) -> None:
    _emit(sweeps.format_csv(rows), args.out)
    if args.svg:
        cols = list(zip(*rows))
        series = dict(zip(("F(S0,S1)", "F(S0,S2)", "F(S0,S3)", "EoF"), cols[1:]))
        Path(args.svg).write_text(line_chart(cols[0], series, xlabel=xlabel, ylabel="F, E"))


def cmd_dv_sweep(args) -> int:
    rho = select_input(args.input, args.d, args.seed)
    rows = sweeps.dv_sweep(args.d, rho, steps=args.steps, workers=args.jobs)
    _emit_sweep(rows, args, "p")
    return 0


def cmd_cv_sweep(args) -> int:
    rows = sweeps.cv_sweep(args.g2, r_max=args.r_max, steps=args.steps, v=args.v, workers=args.jobs)
    _emit_sweep(rows, args, "r")
    return 0


def cmd_stages(args) -> int:
    lines = []
    if args.mode == "dv":
        rho = select_input(args.input, args.d, args.seed)
        if args.p is None:
            trace = dv_teleport.run_ideal(args.d, rho)
        else:
            trace = dv_teleport.run_with_resource(args.d, rho, werner(args.d, args.p))
        lines.append("stage,fidelity,trace_distance")
        for k, s in enumerate(trace.stage_states):
            lines.append(f"{k},{uhlmann_fidelity(rho, s):.9g},{trace_distance(rho, s):.9g}")
        for k, s in enumerate(trace.stage_states):
            lines.append(f"# stage {k} principal state")
            lines.append(format_matrix(s))
    else:
        g1 = np.cosh(args.r) ** 2 if args.g1 is None else args.g1
        trace = cv_gaussian.run_cv(args.v, g1, args.g2)
        v0 = trace.stage_covs[0]
        lines.append("stage,fidelity")
        for k, s in enumerate(trace.stage_covs):
            lines.append(f"{k},{gaussian_fidelity_1mode(v0, s):.9g}")
        for k, s in enumerate(trace.stage_covs):
            lines.append(f"# stage {k} principal covariance")
            lines.append("\n".join(" ".join(f"{x:.9g}" for x in row) for row in s))
    _emit("\n".join(lines) + "\n", args.out)
    return 0


def _resource(d: int, p: float | None):
    return None if p is None else werner(d, p)


def cmd_divisibility(args) -> int:
    resource = _resource(args.d, args.p)
    prefix = nonmarkov.prefix_channel(args.d, resource, 2)
    total = nonmarkov.prefix_channel(args.d, resource, 3)
    rep = nonmarkov.divisibility_residual(prefix, total)
    info = {
        "d": args.d,
        "p": args.p,
        "verdict": rep.verdict,
        "residual": rep.residual,
        "prefix_rank": rep.prefix_rank,
        "intermediate_cp_min_eig": rep.intermediate_cp_min_eig,
        "stage_cp_min_eig": [
            nonmarkov.cp_min_eigenvalue(nonmarkov.prefix_channel(args.d, resource, k)) for k in (1, 2, 3)
        ],
    }
    if args.json:
        text = json.dumps(info, indent=2) + "\n"
    else:
        text = "".join(f"{k}: {v}\n" for k, v in info.items())
    _emit(text, args.out)
    return 0


def blp_inputs(d: int, pair: str) -> tuple[np.ndarray, np.ndarray]:
    if pair == "computational":
        return ket_to_dm(basis_ket(d, 0)), ket_to_dm(basis_ket(d, 1))
    plus = plus_ket(d)
    return ket_to_dm(plus), ket_to_dm(pauli_z_d(d) @ plus)


def cmd_blp(args) -> int:
    a, b = blp_inputs(args.d, args.pair)
    rep = nonmarkov.blp_trace(args.d, _resource(args.d, args.p), a, b)
    text = ",".join(format(x, ".9g") for x in rep.distances) + f"\nverdict: {rep.verdict}\n"
    _emit(text, args.out)
    return 0


def _unit_interval(text: str) -> float:
    x = float(text)
    if not 0.0 <= x <= 1.0:
        raise argparse.ArgumentTypeError(f"{text} is outside [0, 1]")
    return x


def _dimension(text: str) -> int:
    d = int(text)
    if not 2 <= d <= 10:
        raise argparse.ArgumentTypeError(f"dimension {d} is outside [2, 10]")
    return d


def _steps(text: str) -> int:
    n = int(text)
    if n < 2:
        raise argparse.ArgumentTypeError("--steps must be >= 2")
    return n


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="mfteleport", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)

    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--out", default="-", help="output file (default: stdout)")
    common.add_argument("--seed", type=int, default=0)
    common.add_argument("--jobs", type=int, default=1, help="worker threads for sweeps")

    p = sub.add_parser("dv-sweep", parents=[common], help="qudit fidelities vs Werner weight p")
    p.add_argument("--d", type=_dimension, default=2)
    p.add_argument("--steps", type=_steps, default=101)
    p.add_argument("--input", default="ket0", help="ket0, maximally_mixed, random or a matrix file")
    p.add_argument("--svg", help="also write a line chart here")
    p.set_defaults(func=cmd_dv_sweep)

    p = sub.add_parser("cv-sweep", parents=[common], help="Gaussian fidelities vs squeezing r")
    p.add_argument("--g2", type=float, default=3.0)
    p.add_argument("--r-max", type=float, default=2.0)
    p.add_argument("--steps", type=_steps, default=201)
    p.add_argument("--v", type=float, default=1.0, help="input variance (v * identity)")
    p.add_argument("--svg")
    p.set_defaults(func=cmd_cv_sweep)

    p = sub.add_parser("stages", parents=[common], help="dump per-stage principal states")
    p.add_argument("--mode", choices=("dv", "cv"), default="dv")
    p.add_argument("--d", type=_dimension, default=2)
    p.add_argument("--p", type=_unit_interval, help="Werner resource weight (default: ideal U1)")
    p.add_argument("--input", default="ket0")
    p.add_argument("--v", type=float, default=1.0)
    p.add_argument("--r", type=float, default=0.0, help="resource squeezing (g1 = cosh^2 r)")
    p.add_argument("--g1", type=float)
    p.add_argument("--g2", type=float, default=3.0)
    p.set_defaults(func=cmd_stages)

    p = sub.add_parser("divisibility", parents=[common], help="test stage-2 prefix vs full protocol")
    p.add_argument("--d", type=_dimension, default=2)
    p.add_argument("--p", type=_unit_interval, default=1.0)
    p.add_argument("--json", action="store_true")
    p.set_defaults(func=cmd_divisibility)

    p = sub.add_parser("blp", parents=[common], help="trace-distance revival witness")
    p.add_argument("--d", type=_dimension, default=2)
    p.add_argument("--p", type=_unit_interval, default=1.0)
    p.add_argument(
        "--pair",
        choices=("fourier", "computational"),
        default="fourier",
        help="input pair: |+>, Z|+> (fourier) or |0>, |1> (computational)",
    )
    p.set_defaults(func=cmd_blp)
    return parser


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except (ArgumentError, FileNotFoundError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_ARGS
    except (PhysicalityError, np.linalg.LinAlgError) as exc:
        print(f"numerical failure: {exc}", file=sys.stderr)
        return EXIT_NUMERIC
    except ValueError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_ARGS


if __name__ == "__main__":
    sys.exit(main())
