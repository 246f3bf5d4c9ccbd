"""Fidelity-per-stage sweeps over the resource entanglement.

Each row is ``(param, f_stage1, f_stage2, f_stage3, eof)`` where the
fidelities compare the input with the principal state after U1, U2, U3.
"""

from __future__ import annotations

import csv
import io
from concurrent.futures import ThreadPoolExecutor
from typing import Callable, Iterable, Sequence

import numpy as np

from . import cv_gaussian, dv_teleport
from .metrics import eof_tmsv, eof_two_qubit, gaussian_fidelity_1mode, uhlmann_fidelity
from .qudit_core import werner

HEADER = ("param", "f_stage1", "f_stage2", "f_stage3", "eof")

Row = tuple[float, float, float, float, float]


def _map(fn: Callable[[float], Row], grid: Iterable[float], workers: int) -> list[Row]:
    # executor.map keeps parameter order regardless of completion order
    if workers <= 1:
        return [fn(x) for x in grid]
    with ThreadPoolExecutor(max_workers=workers) as pool:
        return list(pool.map(fn, grid))


def dv_row(d: int, rho: np.ndarray, p: float) -> Row:
    resource = werner(d, p)
    trace = dv_teleport.run_with_resource(d, rho, resource)
    f1, f2, f3 = (uhlmann_fidelity(rho, s) for s in trace.stage_states[1:])
    eof = eof_two_qubit(resource) if d == 2 else float("nan")
    return (float(p), f1, f2, f3, eof)


def dv_sweep(d: int, rho: np.ndarray, steps: int = 101, workers: int = 1) -> list[Row]:
    """Werner weight p on an even grid over [0, 1]."""
    if steps < 2:
        raise ValueError(f"steps must be >= 2, got {steps}")
    grid = np.linspace(0.0, 1.0, steps)
    return _map(lambda p: dv_row(d, rho, p), grid, workers)


def cv_row(v: float, r: float, g2: float) -> Row:
    trace = cv_gaussian.run_cv_with_resource(v, r, g2)
    v0 = trace.stage_covs[0]
    f1, f2, f3 = (gaussian_fidelity_1mode(v0, s) for s in trace.stage_covs[1:])
    return (float(r), f1, f2, f3, eof_tmsv(r))


def cv_sweep(g2: float = 3.0, r_max: float = 2.0, steps: int = 201, v: float = 1.0, workers: int = 1) -> list[Row]:
    """Two-mode squeezing r on an even grid over [0, r_max], with g1 = cosh^2 r."""
    if steps < 2:
        raise ValueError(f"steps must be >= 2, got {steps}")
    if r_max < 0:
        raise ValueError(f"r_max must be >= 0, got {r_max}")
    grid = np.linspace(0.0, r_max, steps)
    return _map(lambda r: cv_row(v, r, g2), grid, workers)


def format_csv(rows: Sequence[Row]) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(HEADER)
    for row in rows:
        w.writerow(format(x, ".9g") for x in row)
    return buf.getvalue()
