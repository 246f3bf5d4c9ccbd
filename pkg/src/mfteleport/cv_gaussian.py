"""Zero-mean Gaussian states and the all-optical teleportation stages.

Quadratures are ordered (x1, p1, ..., xn, pn) and the vacuum covariance
is the identity, so physical states satisfy ``V + i*Omega >= 0``.
Modes are ordered (S, E1, E2).
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Sequence

import numpy as np
from scipy.linalg import block_diag

from .qudit_core import PhysicalityError

SYMPLECTIC_ATOL = 1e-10
PHYSICAL_ATOL = 1e-9

Z2 = np.diag([1.0, -1.0])
I2 = np.eye(2)


def symplectic_form(n: int) -> np.ndarray:
    return block_diag(*([np.array([[0.0, 1.0], [-1.0, 0.0]])] * n))


def _modes(m: np.ndarray) -> int:
    if m.ndim != 2 or m.shape[0] != m.shape[1] or m.shape[0] % 2:
        raise ValueError(f"expected a 2n x 2n matrix, got shape {m.shape}")
    return m.shape[0] // 2


def min_physical_eigenvalue(v: np.ndarray) -> float:
    """Smallest eigenvalue of V + i*Omega."""
    v = np.asarray(v, dtype=float)
    return float(np.linalg.eigvalsh(v + 1j * symplectic_form(_modes(v))).min())


def check_covariance(v: np.ndarray, atol: float = PHYSICAL_ATOL) -> np.ndarray:
    v = np.asarray(v, dtype=float)
    _modes(v)
    if not np.all(np.isfinite(v)):
        raise PhysicalityError("covariance matrix has non-finite entries (overflow)")
    asym = np.max(np.abs(v - v.T))
    if asym > 1e-12 * max(1.0, np.max(np.abs(v))):
        raise PhysicalityError(f"covariance matrix is not symmetric (defect {asym:.3g})")
    # relative slack: entries grow like g1 in the large-gain limit
    scale = max(1.0, float(np.max(np.abs(v))))
    lam = min_physical_eigenvalue(v)
    if lam < -atol * scale:
        raise PhysicalityError(f"covariance violates the uncertainty principle (min eig {lam:.3g})")
    return v


def is_symplectic(s: np.ndarray, atol: float = SYMPLECTIC_ATOL) -> bool:
    s = np.asarray(s, dtype=float)
    om = symplectic_form(_modes(s))
    scale = max(1.0, float(np.max(np.abs(s))) ** 2)
    return bool(np.max(np.abs(s @ om @ s.T - om)) <= atol * scale)


def tms_symplectic(r: float) -> np.ndarray:
    """Two-mode squeezer [[cosh r I, sinh r Z], [sinh r Z, cosh r I]].

    On two vacua this gives diagonal blocks cosh(2r) I and correlations
    sinh(2r) Z, i.e. (2g-1) I and 2 sqrt(g(g-1)) Z for cosh^2 r = g.
    """
    if not np.isfinite(r):
        raise ValueError(f"squeezing must be finite, got {r}")
    c, s = np.cosh(r), np.sinh(r)
    return np.block([[c * I2, s * Z2], [s * Z2, c * I2]])


def tms_from_gain(g: float) -> np.ndarray:
    """Two-mode squeezer with cosh^2 r = g, built without round-tripping through r."""
    if g < 1:
        raise ValueError(f"gain must be >= 1, got {g}")
    c, s = np.sqrt(g), np.sqrt(g - 1.0)
    return np.block([[c * I2, s * Z2], [s * Z2, c * I2]])


def bs_symplectic(tau: float) -> np.ndarray:
    """Beam splitter of transmissivity ``tau``; first output is sqrt(tau) a - sqrt(1-tau) b."""
    if not 0.0 <= tau <= 1.0:
        raise ValueError(f"transmissivity must lie in [0, 1], got {tau}")
    t, u = np.sqrt(tau), np.sqrt(1.0 - tau)
    return np.block([[t * I2, -u * I2], [u * I2, t * I2]])


def direct_sum(*covs: np.ndarray) -> np.ndarray:
    return block_diag(*[np.asarray(v, dtype=float) for v in covs])


def _mode_index(modes: Sequence[int]) -> np.ndarray:
    return np.array([2 * m + q for m in modes for q in (0, 1)], dtype=int)


def embed_symplectic(op: np.ndarray, modes: Sequence[int], total: int) -> np.ndarray:
    """Identity-padded symplectic acting on ``modes`` (in order) of ``total`` modes."""
    op = np.asarray(op, dtype=float)
    modes = [int(m) for m in modes]
    if len(set(modes)) != len(modes) or any(m < 0 or m >= total for m in modes):
        raise IndexError(f"bad mode selection {modes} for {total} modes")
    if op.shape != (2 * len(modes),) * 2:
        raise ValueError(f"operator shape {op.shape} does not match {len(modes)} modes")
    full = np.eye(2 * total)
    idx = _mode_index(modes)
    full[np.ix_(idx, idx)] = op
    return full


def ptrace_modes(v: np.ndarray, keep: Sequence[int]) -> np.ndarray:
    """Reduced covariance: keep the rows/columns of the listed modes."""
    v = np.asarray(v, dtype=float)
    n = _modes(v)
    keep = [int(m) for m in keep]
    if not keep or any(m < 0 or m >= n for m in keep):
        raise IndexError(f"bad mode selection {keep} for {n} modes")
    idx = _mode_index(keep)
    return v[np.ix_(idx, idx)]


def transform(s: np.ndarray, v: np.ndarray) -> np.ndarray:
    out = s @ v @ s.T
    return (out + out.T) / 2


@dataclass(frozen=True)
class CvStageTrace:
    """Principal-mode covariances after preparation, stage 1, 2 and 3.

    ``global_covs`` holds the covariance of every mode still present:
    6x6 for stages 0-2 (stage 2 before E1 is discarded) and 4x4 on
    (S, E2) after the beam splitter.
    """

    stage_covs: list[np.ndarray]
    global_covs: list[np.ndarray] = field(repr=False)

    @property
    def final(self) -> np.ndarray:
        return self.stage_covs[-1]


def _check_params(v: float, g1: float, g2: float) -> None:
    if not v >= 1:
        raise ValueError(f"input variance v must be >= 1, got {v}")
    if not g1 >= 1:
        raise ValueError(f"resource gain g1 must be >= 1, got {g1}")
    if not g2 > 1:
        raise ValueError(f"amplifier gain g2 must be > 1, got {g2}")


def run_cv(v: float, g1: float, g2: float) -> CvStageTrace:
    """Propagate v*I (x) vac (x) vac through the three symplectic stages."""
    _check_params(v, g1, g2)
    g = direct_sum(v * I2, I2, I2)
    globals_ = [g]

    # huge gains overflow to inf/nan; check_covariance reports that below
    with np.errstate(over="ignore", invalid="ignore"):
        g = transform(embed_symplectic(tms_from_gain(g1), [1, 2], 3), g)
        globals_.append(g)
        g = transform(embed_symplectic(tms_from_gain(g2), [0, 1], 3), g)
        globals_.append(g)
        # E1 is discarded before the beam splitter couples S and E2
        g = ptrace_modes(g, [0, 2])
        g = transform(bs_symplectic(1.0 / g2), g)
        globals_.append(g)

    for k, x in enumerate(globals_):
        try:
            check_covariance(x)
        except PhysicalityError as exc:
            raise PhysicalityError(f"stage {k}: {exc}") from exc
    stage_covs = [ptrace_modes(x, [0]) for x in globals_]
    return CvStageTrace(stage_covs, globals_)


def run_cv_with_resource(v: float, r: float, g2: float) -> CvStageTrace:
    """run_cv with the resource set to a two-mode squeezed vacuum of squeezing ``r``."""
    if not r >= 0:
        raise ValueError(f"squeezing r must be >= 0, got {r}")
    with np.errstate(over="ignore"):
        g1 = np.cosh(r) ** 2
    return run_cv(v, g1, g2)


def stage2_closed_form(v: float, g1: float, g2: float) -> np.ndarray:
    """The 6x6 pre-trace stage-2 covariance assembled from its nine 2x2 blocks."""
    _check_params(v, g1, g2)
    v11 = (2 * g1 * (g2 - 1) + g2 * (v - 1) + 1) * I2
    v22 = (v * (g2 - 1) + g2 * (2 * g1 - 1)) * I2
    v33 = (2 * g1 - 1) * I2
    v12 = (v + 2 * g1 - 1) * np.sqrt(g2 * (g2 - 1)) * Z2
    v13 = 2 * np.sqrt(g1 * (g1 - 1) * (g2 - 1)) * I2
    v23 = 2 * np.sqrt(g1 * g2 * (g1 - 1)) * Z2
    return np.block([[v11, v12, v13], [v12.T, v22, v23], [v13.T, v23.T, v33]])


def output_excess_noise(g1: float, g2: float) -> float:
    """Added noise of the final principal mode above v*I.

    ((g2-1)/g2) * (4 g1 - 2 - 4 sqrt(g1(g1-1))), rewritten to avoid
    cancellation at large g1.
    """
    a = np.sqrt(g1 * (g1 - 1.0))
    return (g2 - 1.0) / g2 * 2.0 / (2.0 * g1 - 1.0 + 2.0 * a)
