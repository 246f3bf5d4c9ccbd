"""Fidelities, trace distance and entanglement of formation."""

from __future__ import annotations

import numpy as np

from .qudit_core import PhysicalityError

EIG_CLAMP = 1e-12
# total negative spectral weight tolerated before a square root is refused
CLAMP_MASS_LIMIT = 1e-8
HERMITIAN_ATOL = 1e-10


def _as_pair(rho: np.ndarray, sigma: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    rho = np.asarray(rho, dtype=complex)
    sigma = np.asarray(sigma, dtype=complex)
    if rho.shape != sigma.shape or rho.ndim != 2 or rho.shape[0] != rho.shape[1]:
        raise ValueError(f"states must be square and of equal shape, got {rho.shape} and {sigma.shape}")
    for m in (rho, sigma):
        if np.max(np.abs(m - m.conj().T)) > HERMITIAN_ATOL:
            raise ValueError("input matrix is not Hermitian")
    return rho, sigma


def psd_sqrt(m: np.ndarray) -> np.ndarray:
    """Square root of a Hermitian PSD matrix with small negative eigenvalues clamped."""
    m = (m + m.conj().T) / 2
    w, u = np.linalg.eigh(m)
    neg = w[w < -EIG_CLAMP]
    if -neg.sum() > CLAMP_MASS_LIMIT:
        raise PhysicalityError(f"matrix is not positive semidefinite (negative mass {-neg.sum():.3g})")
    # rounding leaves exact zeros at ~1e-17, whose square roots would add ~1e-9
    floor = 10 * len(w) * np.finfo(float).eps * max(np.abs(w).max(), 1e-300)
    w = np.where(w > floor, w, 0.0)
    w = np.sqrt(w)
    return (u * w) @ u.conj().T


def uhlmann_fidelity(rho: np.ndarray, sigma: np.ndarray) -> float:
    """(tr sqrt(sqrt(rho) sigma sqrt(rho)))^2."""
    rho, sigma = _as_pair(rho, sigma)
    sr = psd_sqrt(rho)
    inner = psd_sqrt(sr @ sigma @ sr)
    return float(np.real(np.trace(inner)) ** 2)


def trace_distance(rho: np.ndarray, sigma: np.ndarray) -> float:
    rho, sigma = _as_pair(rho, sigma)
    diff = rho - sigma
    return float(0.5 * np.abs(np.linalg.eigvalsh((diff + diff.conj().T) / 2)).sum())


def gaussian_fidelity_1mode(vi: np.ndarray, vj: np.ndarray) -> float:
    """Fidelity of two zero-mean single-mode Gaussian states.

    Uses 2 / (sqrt(mu + nu) - sqrt(nu)) with mu = det(Vi + Vj) and
    nu = (det Vi - 1)(det Vj - 1), in the vacuum = identity convention.
    """
    vi = np.asarray(vi, dtype=float)
    vj = np.asarray(vj, dtype=float)
    if vi.shape != (2, 2) or vj.shape != (2, 2):
        raise ValueError(f"single-mode covariances must be 2x2, got {vi.shape} and {vj.shape}")
    with np.errstate(over="ignore", invalid="ignore"):
        mu = np.linalg.det(vi + vj)
        nu = (np.linalg.det(vi) - 1.0) * (np.linalg.det(vj) - 1.0)
    if not (np.isfinite(mu) and np.isfinite(nu)):
        raise PhysicalityError("Gaussian fidelity overflowed; covariance entries are too large")
    # pure states have det = 1; rounding can push nu a hair below zero
    nu = max(nu, 0.0)
    return float(2.0 / (np.sqrt(mu + nu) - np.sqrt(nu)))


def binary_entropy(x: float) -> float:
    if x <= 0.0 or x >= 1.0:
        return 0.0
    return float(-x * np.log2(x) - (1 - x) * np.log2(1 - x))


def concurrence(rho: np.ndarray) -> float:
    """Wootters concurrence of a two-qubit density matrix."""
    rho = np.asarray(rho, dtype=complex)
    if rho.shape != (4, 4):
        raise ValueError(f"concurrence needs a 4x4 two-qubit state, got {rho.shape}")
    sy = np.array([[0, -1j], [1j, 0]])
    yy = np.kron(sy, sy)
    flipped = yy @ rho.conj() @ yy
    sr = psd_sqrt(rho)
    lam = np.sqrt(np.clip(np.linalg.eigvalsh(sr @ flipped @ sr), 0.0, None))
    lam = np.sort(lam)[::-1]
    return float(max(0.0, lam[0] - lam[1] - lam[2] - lam[3]))


def eof_two_qubit(rho: np.ndarray) -> float:
    """Entanglement of formation (ebits) from the concurrence closed form."""
    c = min(concurrence(rho), 1.0)
    return binary_entropy((1.0 + np.sqrt(1.0 - c * c)) / 2.0)


def eof_tmsv(r: float) -> float:
    """EoF of a two-mode squeezed vacuum: cosh^2 r log2 cosh^2 r - sinh^2 r log2 sinh^2 r."""
    if r < 0:
        raise ValueError(f"squeezing r must be >= 0, got {r}")
    c2 = np.cosh(r) ** 2
    s2 = np.sinh(r) ** 2
    tail = s2 * np.log2(s2) if s2 > 0 else 0.0
    return float(c2 * np.log2(c2) - tail)
