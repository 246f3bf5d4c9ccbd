"""Measurement-free qudit teleportation as three staged unitaries.

Subsystem layout is ``[d, d, d]`` for (principal S, environment E1,
environment E2). The environment starts in ``|00>``; stage U1 entangles
E1 and E2, U2 couples S to the environment and U3 returns the input to S.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from functools import lru_cache

import numpy as np

from .qudit_core import (
    ATOL,
    CHANNEL_ATOL,
    MAX_DIM,
    basis_ket,
    bell_phi,
    check_density_matrix,
    check_ket,
    embed_gate,
    gate_cnot,
    gate_hadamard,
    gate_swap,
    ket_to_dm,
    partial_trace,
    pauli_x_d,
    pauli_z_d,
    plus_ket,
)

TWO_PI = 2 * np.pi


@dataclass(frozen=True)
class DvStageTrace:
    """Principal-system states after preparation, U1, U2 and U3."""

    d: int
    stage_states: list[np.ndarray]
    global_states: list[np.ndarray] | None = field(default=None, repr=False)

    @property
    def final(self) -> np.ndarray:
        return self.stage_states[-1]


@dataclass(frozen=True)
class StageIdentityReport:
    holds: tuple[bool, bool, bool]
    residuals: tuple[float, float, float]

    @property
    def all_hold(self) -> bool:
        return all(self.holds)


def _check_protocol_dim(d: int) -> int:
    if int(d) != d or not 2 <= d <= MAX_DIM:
        raise ValueError(f"protocol dimension must be an integer in [2, {MAX_DIM}], got {d}")
    return int(d)


@lru_cache(maxsize=None)
def _stage_unitaries(d: int) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    dims = [d, d, d]
    dft = gate_hadamard(d, TWO_PI)
    idft = gate_hadamard(d, 2 * d * np.pi - TWO_PI)
    cnot_shift = gate_cnot(d, TWO_PI, 2 * d * np.pi - TWO_PI)
    cnot = gate_cnot(d, TWO_PI, TWO_PI)
    swap = gate_swap(d, TWO_PI, TWO_PI)

    def on(gate, *targets):
        return embed_gate(gate, dims, targets)

    u1 = on(cnot_shift, 1, 2) @ on(dft, 1)
    u2 = on(dft, 0) @ on(cnot_shift, 0, 1)
    u3 = (
        on(swap, 0, 1)
        @ on(dft, 1)
        @ on(cnot, 0, 1)
        @ on(swap, 1, 2)
        @ on(idft, 2)
        @ on(cnot, 1, 2)
    )
    for u in (u1, u2, u3):
        u.setflags(write=False)
    return u1, u2, u3


def build_stage_unitaries(d: int) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    """The three d^3 x d^3 stage unitaries U1, U2, U3 on (S, E1, E2)."""
    return _stage_unitaries(_check_protocol_dim(d))


def _evolve(d: int, rho: np.ndarray, resource: np.ndarray | None, keep_global: bool):
    """Run the stages on an arbitrary operator (no physicality checks).

    With ``resource=None`` the environment starts in |00> and U1 is applied;
    otherwise the resource is injected directly as the stage-1 environment.
    Linear in ``rho``, so matrix units may be passed for tomography.
    """
    u1, u2, u3 = build_stage_unitaries(d)
    dims = [d, d, d]
    env0 = np.zeros((d * d, d * d), dtype=complex)
    env0[0, 0] = 1.0

    g = np.kron(rho, env0)
    globals_ = [g]
    if resource is None:
        g = u1 @ g @ u1.conj().T
    else:
        g = np.kron(rho, resource)
    globals_.append(g)
    for u in (u2, u3):
        g = u @ g @ u.conj().T
        globals_.append(g)
    reduced = [partial_trace(x, dims, [0]) for x in globals_]
    return reduced, (globals_ if keep_global else None)


def run_ideal(d: int, rho: np.ndarray, keep_global: bool = False) -> DvStageTrace:
    """Teleport ``rho`` with the environment prepared by U1 from |00>."""
    d = _check_protocol_dim(d)
    rho = check_density_matrix(rho)
    if rho.shape != (d, d):
        raise ValueError(f"input has shape {rho.shape}, expected ({d}, {d})")
    reduced, globals_ = _evolve(d, rho, None, keep_global)
    reduced = [check_density_matrix(r, CHANNEL_ATOL) for r in reduced]
    return DvStageTrace(d, reduced, globals_)


def run_with_resource(
    d: int, rho: np.ndarray, resource: np.ndarray, keep_global: bool = False
) -> DvStageTrace:
    """Teleport ``rho`` through a given E1 (x) E2 resource state instead of U1."""
    d = _check_protocol_dim(d)
    rho = check_density_matrix(rho)
    resource = check_density_matrix(resource)
    if rho.shape != (d, d):
        raise ValueError(f"input has shape {rho.shape}, expected ({d}, {d})")
    if resource.shape != (d * d, d * d):
        raise ValueError(f"resource has shape {resource.shape}, expected ({d * d}, {d * d})")
    reduced, globals_ = _evolve(d, rho, resource, keep_global)
    reduced = [check_density_matrix(r, CHANNEL_ATOL) for r in reduced]
    return DvStageTrace(d, reduced, globals_)


def stage2_closed_form_ket(d: int, s: np.ndarray) -> np.ndarray:
    """(1/d) sum_ij |ij> (x) X^(d-j) Z^i |s>."""
    x, z = pauli_x_d(d), pauli_z_d(d)
    out = np.zeros(d**3, dtype=complex)
    for i in range(d):
        zi = np.linalg.matrix_power(z, i) @ s
        for j in range(d):
            ket = np.linalg.matrix_power(x, d - j) @ zi
            out += np.kron(np.kron(basis_ket(d, i), basis_ket(d, j)), ket)
    return out / d


def check_stage_identities(d: int, s: np.ndarray, atol: float = ATOL) -> StageIdentityReport:
    """Compare each stage's action on its closed-form input with the expected ket."""
    d = _check_protocol_dim(d)
    s = check_ket(s)
    u1, u2, u3 = build_stage_unitaries(d)
    zero2 = np.kron(basis_ket(d, 0), basis_ket(d, 0))
    after1 = np.kron(s, bell_phi(d))
    after2 = stage2_closed_form_ket(d, s)
    after3 = np.kron(s, np.kron(plus_ket(d), plus_ket(d)))
    residuals = (
        float(np.linalg.norm(u1 @ np.kron(s, zero2) - after1)),
        float(np.linalg.norm(u2 @ after1 - after2)),
        float(np.linalg.norm(u3 @ after2 - after3)),
    )
    return StageIdentityReport(tuple(r <= atol for r in residuals), residuals)


def ideal_resource(d: int) -> np.ndarray:
    return ket_to_dm(bell_phi(d))
