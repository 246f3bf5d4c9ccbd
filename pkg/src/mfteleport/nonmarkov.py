"""Process tomography of protocol prefixes, divisibility tests and revival witnesses.

Transfer matrices act on column-stacked density matrices:
``vec(M(rho)) = T @ vec(rho)`` with ``vec(A) = A.flatten(order="F")``.
The Choi matrix is ``sum_ij E_ij (x) M(E_ij)`` (input factor first,
unnormalized, so the identity channel maps to d * Phi).
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable, Literal, Sequence

import numpy as np

from . import dv_teleport
from .metrics import trace_distance
from .qudit_core import (
    CHANNEL_ATOL,
    basis_ket,
    check_density_matrix,
    kraus_from_stinespring,
)

DIVISIBILITY_THRESHOLD = 1e-6
CP_ATOL = 1e-9
RANK_RTOL = 1e-10
MONOTONE_ATOL = 1e-9

Verdict = Literal["divisible", "non_divisible", "rank_deficient"]


@dataclass(frozen=True)
class DivisibilityReport:
    """Outcome of solving X @ T_prefix = T_total for an intermediate map X."""

    residual: float
    intermediate_cp_min_eig: float | None
    verdict: Verdict
    prefix_rank: int


@dataclass(frozen=True)
class BlpReport:
    distances: tuple[float, ...]
    verdict: Literal["non_markovian", "inconclusive"]

    @property
    def non_monotonic(self) -> bool:
        return self.verdict == "non_markovian"


def vec(a: np.ndarray) -> np.ndarray:
    return np.asarray(a).flatten(order="F")


def unvec(v: np.ndarray, d: int) -> np.ndarray:
    return np.asarray(v).reshape(d, d, order="F")


def matrix_unit(d: int, i: int, j: int) -> np.ndarray:
    e = np.zeros((d, d), dtype=complex)
    e[i, j] = 1.0
    return e


def transfer_from_map(d: int, channel: Callable[[np.ndarray], np.ndarray]) -> np.ndarray:
    """Tomograph a linear map by feeding it the d^2 matrix units."""
    t = np.zeros((d * d, d * d), dtype=complex)
    for j in range(d):
        for i in range(d):
            t[:, i + d * j] = vec(channel(matrix_unit(d, i, j)))
    return t


def transfer_from_kraus(ops: Sequence[np.ndarray]) -> np.ndarray:
    # vec(F rho F^dag) = (conj(F) (x) F) vec(rho) for column stacking
    return sum(np.kron(f.conj(), f) for f in ops)


def apply_transfer(t: np.ndarray, rho: np.ndarray) -> np.ndarray:
    d = rho.shape[0]
    return unvec(t @ vec(rho), d)


def _dim(t: np.ndarray) -> int:
    d = int(round(np.sqrt(t.shape[0])))
    if t.shape != (d * d, d * d):
        raise ValueError(f"transfer matrix must be d^2 x d^2, got {t.shape}")
    return d


def is_trace_preserving(t: np.ndarray, atol: float = CHANNEL_ATOL) -> bool:
    """Whether the adjoint map fixes the identity."""
    d = _dim(t)
    one = vec(np.eye(d))
    return bool(np.max(np.abs(t.conj().T @ one - one)) <= atol)


def is_hermiticity_preserving(t: np.ndarray, atol: float = CHANNEL_ATOL) -> bool:
    d = _dim(t)
    for i in range(d):
        for j in range(d):
            a = apply_transfer(t, matrix_unit(d, i, j))
            b = apply_transfer(t, matrix_unit(d, j, i))
            if np.max(np.abs(a.conj().T - b)) > atol:
                return False
    return True


def choi_of(t: np.ndarray) -> np.ndarray:
    d = _dim(t)
    return sum(
        np.kron(matrix_unit(d, i, j), apply_transfer(t, matrix_unit(d, i, j)))
        for i in range(d)
        for j in range(d)
    )


def cp_min_eigenvalue(t: np.ndarray) -> float:
    j = choi_of(t)
    return float(np.linalg.eigvalsh((j + j.conj().T) / 2).min())


def prefix_channel(d: int, resource: np.ndarray | None, upto_stage: int) -> np.ndarray:
    """Transfer matrix of input -> principal state after the first ``upto_stage`` stages.

    ``resource=None`` prepares the environment with U1; otherwise the
    resource is injected as the stage-1 environment state.
    """
    if upto_stage not in (1, 2, 3):
        raise ValueError(f"upto_stage must be 1, 2 or 3, got {upto_stage}")
    if resource is not None:
        resource = check_density_matrix(resource)
        if resource.shape != (d * d, d * d):
            raise ValueError(f"resource has shape {resource.shape}, expected ({d * d}, {d * d})")

    def channel(e):
        reduced, _ = dv_teleport._evolve(d, e, resource, keep_global=False)
        return reduced[upto_stage]

    return transfer_from_map(d, channel)


def divisibility_residual(
    t_prefix: np.ndarray, t_total: np.ndarray, threshold: float = DIVISIBILITY_THRESHOLD
) -> DivisibilityReport:
    """Test whether ``t_total`` factors as X @ ``t_prefix`` with X completely positive.

    The least-squares X is the minimum-norm solution. The residual is the
    Frobenius norm of the defect relative to ``t_total``. With a zero
    residual but a singular prefix X is not unique, so a non-CP minimum-norm
    X gives ``rank_deficient`` rather than a verdict.
    """
    d = _dim(t_prefix)
    if t_total.shape != t_prefix.shape:
        raise ValueError(f"shape mismatch {t_prefix.shape} vs {t_total.shape}")
    # X T_p = T_t  <=>  T_p^T X^T = T_t^T
    xt, *_ = np.linalg.lstsq(t_prefix.T, t_total.T, rcond=None)
    x = xt.T
    residual = float(np.linalg.norm(x @ t_prefix - t_total) / np.linalg.norm(t_total))
    rank = int(np.linalg.matrix_rank(t_prefix, tol=RANK_RTOL * np.linalg.norm(t_prefix, 2)))

    if residual > threshold:
        return DivisibilityReport(residual, None, "non_divisible", rank)
    min_eig = cp_min_eigenvalue(x)
    if min_eig >= -CP_ATOL:
        verdict: Verdict = "divisible"
    elif rank < d * d:
        verdict = "rank_deficient"
    else:
        verdict = "non_divisible"
    return DivisibilityReport(residual, min_eig, verdict, rank)


def partial_swap_unitary(d: int, theta: float) -> np.ndarray:
    """exp(i theta SWAP) = cos(theta) I + i sin(theta) SWAP on two qudits."""
    swap = np.zeros((d * d, d * d))
    i, j = np.divmod(np.arange(d * d), d)
    swap[j * d + i, i * d + j] = 1.0
    return np.cos(theta) * np.eye(d * d) + 1j * np.sin(theta) * swap


def markovian_control(d: int = 2, thetas: tuple[float, float] = (0.4, 0.7)) -> tuple[np.ndarray, np.ndarray]:
    """Prefix and total transfer matrices of two collisions with fresh |0> environments.

    Each stage partially swaps the system with a newly prepared ancilla that
    is then discarded, so the total process is divisible by construction.
    """
    env = basis_ket(d, 0)
    stages = [
        transfer_from_kraus(kraus_from_stinespring(partial_swap_unitary(d, th), env, [d, d]))
        for th in thetas
    ]
    return stages[0], stages[1] @ stages[0]


def blp_trace(
    d: int, resource: np.ndarray | None, input_a: np.ndarray, input_b: np.ndarray
) -> BlpReport:
    """Trace distance between two inputs' principal states at stages 0..3.

    Any increase of the distance between consecutive stages witnesses
    non-Markovian dynamics; a non-increasing sequence is inconclusive.
    """
    run = (
        (lambda rho: dv_teleport.run_ideal(d, rho))
        if resource is None
        else (lambda rho: dv_teleport.run_with_resource(d, rho, resource))
    )
    ta, tb = run(input_a), run(input_b)
    dist = tuple(trace_distance(a, b) for a, b in zip(ta.stage_states, tb.stage_states))
    revived = any(b - a > MONOTONE_ATOL for a, b in zip(dist, dist[1:]))
    return BlpReport(dist, "non_markovian" if revived else "inconclusive")
