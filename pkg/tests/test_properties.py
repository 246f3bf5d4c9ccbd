"""Randomized invariants over seeded inputs."""

import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from mfteleport import cv_gaussian as cv
from mfteleport.dv_teleport import build_stage_unitaries
from mfteleport.metrics import (
    eof_two_qubit,
    gaussian_fidelity_1mode,
    trace_distance,
    uhlmann_fidelity,
)
from mfteleport.qudit_core import (
    apply_kraus,
    gate_cnot,
    gate_cphase,
    gate_hadamard,
    gate_swap,
    kraus_from_stinespring,
    partial_trace,
    random_density_matrix,
    random_ket,
    random_unitary,
    stinespring_apply,
    werner,
)

seeds = st.integers(min_value=0, max_value=2**32 - 1)
dims = st.integers(min_value=2, max_value=5)
phases = st.floats(min_value=0.0, max_value=2 * math.pi * 5, allow_nan=False)


def unitarity_defect(u):
    return np.max(np.abs(u.conj().T @ u - np.eye(u.shape[0])))


@given(d=dims, phi=phases, k=st.integers(1, 40))
def test_gates_unitary(d, phi, k):
    # the Hadamard family is unitary exactly when theta / (2 pi) is an integer coprime to d
    if math.gcd(k, d) != 1:
        k = 1
    theta = 2 * math.pi * k
    for u in (gate_hadamard(d, theta), gate_cphase(d, phi), gate_cnot(d, phi, theta), gate_swap(d, phi, theta)):
        assert unitarity_defect(u) <= 1e-10


@pytest.mark.parametrize("d", [2, 3, 4, 5])
def test_stage_unitaries_unitary(d):
    for u in build_stage_unitaries(d):
        assert unitarity_defect(u) <= 1e-10


@given(seed=seeds, dims_=st.lists(st.integers(2, 3), min_size=2, max_size=3), data=st.data())
def test_partial_trace_preserves_trace_and_positivity(seed, dims_, data):
    rng = np.random.default_rng(seed)
    rho = random_density_matrix(int(np.prod(dims_)), rng)
    keep = data.draw(st.sets(st.integers(0, len(dims_) - 1), min_size=1))
    red = partial_trace(rho, dims_, keep)
    assert abs(np.trace(red) - 1) <= 1e-12
    assert np.linalg.eigvalsh(red).min() >= -1e-10


@settings(max_examples=25)
@given(seed=seeds, d=st.integers(2, 3))
def test_kraus_equals_dilation(seed, d):
    rng = np.random.default_rng(seed)
    u = random_unitary(d * d, rng)
    env = random_ket(d, rng)
    rho = random_density_matrix(d, rng)
    ops = kraus_from_stinespring(u, env, [d, d])
    assert np.max(np.abs(apply_kraus(ops, rho) - stinespring_apply(u, rho, env, [d, d]))) <= 1e-9


@given(r=st.floats(-6, 6), tau=st.floats(0, 1))
def test_symplectic_constructions(r, tau):
    assert cv.is_symplectic(cv.tms_symplectic(r))
    assert cv.is_symplectic(cv.bs_symplectic(tau))
    assert cv.is_symplectic(cv.embed_symplectic(cv.bs_symplectic(tau), [2, 0], 3))


@given(
    v=st.floats(1, 50),
    g1=st.floats(1, 1e6),
    g2=st.floats(1.001, 1e3),
)
def test_stage_covariances_physical(v, g1, g2):
    trace = cv.run_cv(v, g1, g2)
    for g in trace.global_covs:
        scale = max(1.0, np.max(np.abs(g)))
        assert cv.min_physical_eigenvalue(g) >= -1e-9 * scale
    for s in trace.stage_covs:
        assert cv.min_physical_eigenvalue(s) >= -1e-9 * max(1.0, np.max(np.abs(s)))


@given(seed=seeds, d=dims)
def test_metric_symmetry_and_range(seed, d):
    rng = np.random.default_rng(seed)
    rho, sigma = random_density_matrix(d, rng), random_density_matrix(d, rng)
    f1, f2 = uhlmann_fidelity(rho, sigma), uhlmann_fidelity(sigma, rho)
    assert abs(f1 - f2) <= 1e-10
    assert -1e-9 <= f1 <= 1 + 1e-9
    t1, t2 = trace_distance(rho, sigma), trace_distance(sigma, rho)
    assert abs(t1 - t2) <= 1e-10
    assert 0 <= t1 <= 1 + 1e-9


def _random_single_mode(rng):
    r = rng.uniform(-1.5, 1.5)
    phi = rng.uniform(0, np.pi)
    n = rng.uniform(1, 4)
    rot = np.array([[np.cos(phi), -np.sin(phi)], [np.sin(phi), np.cos(phi)]])
    sq = np.diag([np.exp(r), np.exp(-r)])
    return n * rot @ sq @ sq.T @ rot.T


@given(seed=seeds)
def test_gaussian_fidelity_symmetry_and_range(seed):
    rng = np.random.default_rng(seed)
    a, b = _random_single_mode(rng), _random_single_mode(rng)
    f1, f2 = gaussian_fidelity_1mode(a, b), gaussian_fidelity_1mode(b, a)
    assert abs(f1 - f2) <= 1e-10
    assert 0 <= f1 <= 1 + 1e-9
    assert gaussian_fidelity_1mode(a, a) == pytest.approx(1.0, abs=1e-9)


def test_fuchs_van_de_graaf():
    rng = np.random.default_rng(2024)
    for _ in range(50):
        rho, sigma = random_density_matrix(2, rng), random_density_matrix(2, rng)
        f = uhlmann_fidelity(rho, sigma)
        t = trace_distance(rho, sigma)
        assert 1 - math.sqrt(f) <= t + 1e-12
        assert t <= math.sqrt(1 - f) + 1e-12


def test_werner_eof_threshold():
    ps = np.linspace(0, 1, 301)
    e = np.array([eof_two_qubit(werner(2, p)) for p in ps])
    assert np.all(e[ps <= 1 / 3] == 0.0)
    above = e[ps > 1 / 3]
    assert np.all(np.diff(above) > 0)


@pytest.mark.parametrize("d", [2, 3, 4, 6])
def test_hadamard_non_coprime_not_unitary(d):
    assert unitarity_defect(gate_hadamard(d, 2 * math.pi * d)) > 0.5
    if d % 2 == 0:
        assert unitarity_defect(gate_hadamard(d, 4 * math.pi)) > 0.5
