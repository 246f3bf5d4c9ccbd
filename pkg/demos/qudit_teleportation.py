"""
Teleporting a qutrit without measurements
=========================================

Three joint unitaries act on the input S and two environment qudits E1, E2.
We follow the reduced state of S after each one.
"""

import numpy as np

from mfteleport import run_ideal, run_with_resource, uhlmann_fidelity, werner
from mfteleport.dv_teleport import check_stage_identities
from mfteleport.qudit_core import random_density_matrix, random_ket

rng = np.random.default_rng(1)
d = 3
rho = random_density_matrix(d, rng)

# with the ideal resource the state leaves S and then comes back intact
trace = run_ideal(d, rho)
for k, s in enumerate(trace.stage_states):
    print(f"after stage {k}: fidelity with input = {uhlmann_fidelity(rho, s):.6f}")

# every stage has a closed form; the residual is the distance to it
rep = check_stage_identities(d, random_ket(d, rng))
print("closed-form residuals:", ["%.1e" % x for x in rep.residuals])

# a noisy isotropic resource only gives back part of the input
for p in (0.0, 0.5, 1.0):
    final = run_with_resource(d, rho, werner(d, p)).final
    print(f"p = {p:.1f}: final fidelity {uhlmann_fidelity(rho, final):.6f}")
