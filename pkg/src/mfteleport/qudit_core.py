"""Dense linear algebra for qudit states, gates and channels.

Composite systems use row-major indexing: the leftmost subsystem is the
slowest index, matching ``np.kron``. States are plain ``numpy`` arrays;
the ``check_*`` helpers validate them against the physical invariants.
"""

from __future__ import annotations

from functools import reduce
from typing import Sequence

import numpy as np

# constructive invariants (gates, states built here)
ATOL = 1e-10
# end-to-end channel equalities
CHANNEL_ATOL = 1e-9

MAX_DIM = 10


class PhysicalityError(ValueError):
    """A state or map violates a physical invariant beyond tolerance."""


# ---------------------------------------------------------------------------
# validation
# ---------------------------------------------------------------------------


def _check_qudit_dim(d: int) -> int:
    if int(d) != d or d < 2:
        raise ValueError(f"qudit dimension must be an integer >= 2, got {d}")
    return int(d)


def check_density_matrix(rho: np.ndarray, atol: float = ATOL) -> np.ndarray:
    """Return ``rho`` as a complex array, raising if it is not a state.

    Checks Hermiticity, unit trace and positivity, each to ``atol``.
    """
    rho = np.asarray(rho, dtype=complex)
    if rho.ndim != 2 or rho.shape[0] != rho.shape[1]:
        raise ValueError(f"density matrix must be square, got shape {rho.shape}")
    herm = np.max(np.abs(rho - rho.conj().T))
    if herm > atol:
        raise PhysicalityError(f"density matrix not Hermitian (defect {herm:.3g})")
    tr = np.trace(rho).real
    if abs(tr - 1.0) > atol:
        raise PhysicalityError(f"density matrix trace is {tr!r}, expected 1")
    min_eig = np.linalg.eigvalsh(rho).min()
    if min_eig < -atol:
        raise PhysicalityError(f"density matrix has eigenvalue {min_eig:.3g} < 0")
    return rho


def check_ket(psi: np.ndarray, atol: float = ATOL) -> np.ndarray:
    psi = np.asarray(psi, dtype=complex)
    if psi.ndim != 1:
        raise ValueError(f"ket must be one-dimensional, got shape {psi.shape}")
    norm = np.linalg.norm(psi)
    if abs(norm - 1.0) > atol:
        raise PhysicalityError(f"ket norm is {norm!r}, expected 1")
    return psi


def check_unitary(u: np.ndarray, atol: float = ATOL) -> np.ndarray:
    u = np.asarray(u, dtype=complex)
    if u.ndim != 2 or u.shape[0] != u.shape[1]:
        raise ValueError(f"unitary must be square, got shape {u.shape}")
    defect = np.max(np.abs(u.conj().T @ u - np.eye(u.shape[0])))
    if defect > atol:
        raise PhysicalityError(f"matrix is not unitary (defect {defect:.3g})")
    return u


def check_layout(dims: Sequence[int], total: int | None = None) -> tuple[int, ...]:
    dims = tuple(int(x) for x in dims)
    if not dims or any(x < 2 for x in dims):
        raise ValueError(f"layout dimensions must all be >= 2, got {dims}")
    if total is not None and int(np.prod(dims)) != total:
        raise ValueError(f"layout {dims} does not match dimension {total}")
    return dims


def purity(rho: np.ndarray) -> float:
    return float(np.real(np.trace(rho @ rho)))


def ket_to_dm(psi: np.ndarray) -> np.ndarray:
    psi = np.asarray(psi, dtype=complex)
    return np.outer(psi, psi.conj())


def basis_ket(d: int, i: int) -> np.ndarray:
    e = np.zeros(d, dtype=complex)
    e[i] = 1.0
    return e


# ---------------------------------------------------------------------------
# tensor structure
# ---------------------------------------------------------------------------


def tensor_product(*factors: np.ndarray) -> np.ndarray:
    """Kronecker product, leftmost factor as the slowest index."""
    if not factors:
        raise ValueError("tensor_product needs at least one factor")
    return reduce(np.kron, factors)


def embed_gate(gate: np.ndarray, dims: Sequence[int], targets: Sequence[int]) -> np.ndarray:
    """Lift ``gate`` to the full layout, acting on ``targets`` in the given order.

    ``embed_gate(G, [2, 2], [1, 0])`` applies G with subsystem 1 as its
    first tensor factor and subsystem 0 as its second.
    """
    dims = check_layout(dims)
    targets = [int(t) for t in targets]
    n = len(dims)
    if len(set(targets)) != len(targets):
        raise ValueError(f"repeated target index in {targets}")
    if any(t < 0 or t >= n for t in targets):
        raise ValueError(f"target index out of range for {n} subsystems: {targets}")
    gate = np.asarray(gate, dtype=complex)
    d_t = int(np.prod([dims[t] for t in targets]))
    if gate.shape != (d_t, d_t):
        raise ValueError(f"gate shape {gate.shape} does not match targets of dimension {d_t}")

    rest = [k for k in range(n) if k not in targets]
    d_r = int(np.prod([dims[k] for k in rest])) if rest else 1
    full = np.kron(gate, np.eye(d_r))
    # axes of `full` are ordered targets + rest; move them back to layout order
    order = targets + rest
    shape = [dims[k] for k in order]
    full = full.reshape(shape + shape)
    perm = np.argsort(order)
    full = full.transpose(list(perm) + [n + p for p in perm])
    total = int(np.prod(dims))
    return full.reshape(total, total)


def partial_trace(rho: np.ndarray, dims: Sequence[int], keep: Sequence[int]) -> np.ndarray:
    """Reduced operator on ``keep`` (returned in layout order)."""
    rho = np.asarray(rho)
    dims = check_layout(dims, rho.shape[0])
    n = len(dims)
    keep = sorted({int(k) for k in keep})
    if not keep:
        raise ValueError("keep set must be non-empty")
    if keep[0] < 0 or keep[-1] >= n:
        raise ValueError(f"keep index out of range for {n} subsystems: {keep}")
    row = list(range(n))
    col = [n + k if k in keep else k for k in range(n)]
    out = keep + [n + k for k in keep]
    t = rho.reshape(dims + dims)
    red = np.einsum(t, row + col, out)
    d_k = int(np.prod([dims[k] for k in keep]))
    return red.reshape(d_k, d_k)


# ---------------------------------------------------------------------------
# gates
# ---------------------------------------------------------------------------


def gate_hadamard(d: int, theta: float = 2 * np.pi) -> np.ndarray:
    """Generalized Hadamard with entries exp(i j theta sqrt(-1) / d) / sqrt(d).

    ``theta = 2*pi`` is the discrete Fourier transform and
    ``theta = 2*d*pi - 2*pi`` its inverse.
    """
    d = _check_qudit_dim(d)
    k = np.arange(d)
    return np.exp(1j * np.outer(k, k) * theta / d) / np.sqrt(d)


def gate_cphase(d: int, phi: float = 2 * np.pi) -> np.ndarray:
    d = _check_qudit_dim(d)
    k = np.arange(d)
    return np.diag(np.exp(1j * np.outer(k, k).ravel() * phi / d))


def gate_cnot(d: int, phi: float = 2 * np.pi, theta: float = 2 * np.pi) -> np.ndarray:
    """[1 (x) H(theta)] CPhase(phi) [1 (x) H(theta)]; control first, target second."""
    d = _check_qudit_dim(d)
    h = np.kron(np.eye(d), gate_hadamard(d, theta))
    return h @ gate_cphase(d, phi) @ h


def _exchange(d: int) -> np.ndarray:
    """Permutation |ij> -> |ji> on two d-level systems."""
    p = np.zeros((d * d, d * d))
    i, j = np.divmod(np.arange(d * d), d)
    p[j * d + i, i * d + j] = 1.0
    return p


def gate_swap(d: int, phi: float = 2 * np.pi, theta: float = 2 * np.pi) -> np.ndarray:
    """Three generalized CNOTs, the middle one with control and target exchanged."""
    d = _check_qudit_dim(d)
    c = gate_cnot(d, phi, theta)
    p = _exchange(d)
    return c @ (p @ c @ p) @ c


def pauli_x_d(d: int) -> np.ndarray:
    """Cyclic shift |i> -> |i + 1 mod d>."""
    d = _check_qudit_dim(d)
    return np.roll(np.eye(d, dtype=complex), 1, axis=0)


def pauli_z_d(d: int) -> np.ndarray:
    d = _check_qudit_dim(d)
    return np.diag(np.exp(2j * np.pi * np.arange(d) / d))


# ---------------------------------------------------------------------------
# states
# ---------------------------------------------------------------------------


def bell_phi(d: int) -> np.ndarray:
    """Maximally entangled ket (1/sqrt(d)) sum_i |ii>."""
    d = _check_qudit_dim(d)
    psi = np.zeros(d * d, dtype=complex)
    psi[np.arange(d) * (d + 1)] = 1.0 / np.sqrt(d)
    return psi


def plus_ket(d: int) -> np.ndarray:
    d = _check_qudit_dim(d)
    return np.full(d, 1.0 / np.sqrt(d), dtype=complex)


def werner(d: int, p: float) -> np.ndarray:
    """Isotropic state p Phi + (1 - p) I / d^2 (the two-qubit Werner state at d=2)."""
    d = _check_qudit_dim(d)
    if not 0.0 <= p <= 1.0:
        raise ValueError(f"Werner weight p must lie in [0, 1], got {p}")
    return p * ket_to_dm(bell_phi(d)) + (1.0 - p) * np.eye(d * d) / (d * d)


def random_ket(d: int, rng: np.random.Generator) -> np.ndarray:
    """Haar-random pure state from a normalized complex Gaussian vector."""
    psi = rng.normal(size=d) + 1j * rng.normal(size=d)
    return psi / np.linalg.norm(psi)


def random_density_matrix(d: int, rng: np.random.Generator, env_dim: int | None = None) -> np.ndarray:
    """Mixed state obtained by tracing out half of a Haar-random bipartite pure state."""
    env_dim = d if env_dim is None else env_dim
    psi = random_ket(d * env_dim, rng).reshape(d, env_dim)
    rho = psi @ psi.conj().T
    return (rho + rho.conj().T) / 2


def random_unitary(d: int, rng: np.random.Generator) -> np.ndarray:
    """Haar-random unitary via QR of a complex Ginibre matrix."""
    z = (rng.normal(size=(d, d)) + 1j * rng.normal(size=(d, d))) / np.sqrt(2)
    q, r = np.linalg.qr(z)
    ph = np.diag(r) / np.abs(np.diag(r))
    return q * ph


# ---------------------------------------------------------------------------
# channels
# ---------------------------------------------------------------------------


def check_kraus(ops: Sequence[np.ndarray], atol: float = CHANNEL_ATOL) -> list[np.ndarray]:
    ops = [np.asarray(f, dtype=complex) for f in ops]
    if not ops:
        raise ValueError("empty Kraus set")
    d_in = ops[0].shape[1]
    if any(f.ndim != 2 or f.shape != ops[0].shape for f in ops):
        raise ValueError("Kraus operators must all share one shape")
    completeness = sum(f.conj().T @ f for f in ops)
    defect = np.max(np.abs(completeness - np.eye(d_in)))
    if defect > atol:
        raise PhysicalityError(f"Kraus set is not trace preserving (defect {defect:.3g})")
    return ops


def kraus_from_stinespring(
    u: np.ndarray, env: np.ndarray, dims: Sequence[int], drop_zero: bool = True
) -> list[np.ndarray]:
    """Kraus operators F_k = (I (x) <k|) U (I (x) |env>) for layout (system, environment)."""
    u = np.asarray(u, dtype=complex)
    d_s, d_e = check_layout(dims, u.shape[0])
    env = check_ket(env)
    if env.shape[0] != d_e:
        raise ValueError(f"environment ket has dimension {env.shape[0]}, layout expects {d_e}")
    # U as tensor [s_out, e_out, s_in, e_in]; contract e_in with |env>
    t = u.reshape(d_s, d_e, d_s, d_e) @ env
    ops = [t[:, k, :] for k in range(d_e)]
    if drop_zero:
        ops = [f for f in ops if np.max(np.abs(f)) > ATOL] or ops[:1]
    return check_kraus(ops)


def apply_kraus(ops: Sequence[np.ndarray], rho: np.ndarray) -> np.ndarray:
    ops = check_kraus(ops)
    rho = np.asarray(rho, dtype=complex)
    return sum(f @ rho @ f.conj().T for f in ops)


def apply_mixed_unitary(
    probs: Sequence[float], unitaries: Sequence[np.ndarray], rho: np.ndarray
) -> np.ndarray:
    probs = np.asarray(probs, dtype=float)
    if len(probs) != len(unitaries):
        raise ValueError(f"{len(probs)} probabilities for {len(unitaries)} unitaries")
    if np.any(probs < 0) or abs(probs.sum() - 1.0) > ATOL:
        raise ValueError(f"probabilities must be non-negative and sum to 1, got {probs}")
    rho = np.asarray(rho, dtype=complex)
    out = np.zeros_like(rho)
    for p, u in zip(probs, unitaries):
        u = check_unitary(u)
        out += p * (u @ rho @ u.conj().T)
    return out


def stinespring_apply(u: np.ndarray, rho: np.ndarray, env: np.ndarray, dims: Sequence[int]) -> np.ndarray:
    """tr_E[U (rho (x) |env><env|) U^dagger]."""
    env_dm = ket_to_dm(env)
    joint = u @ np.kron(rho, env_dm) @ u.conj().T
    return partial_trace(joint, dims, [0])
