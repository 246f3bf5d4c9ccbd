"""
All-optical teleportation of a Gaussian mode
============================================

Covariance matrices (vacuum = identity) go through a two-mode squeezer that
makes the resource, an amplifier and a beam splitter.
"""

import numpy as np

from mfteleport import gaussian_fidelity_1mode
from mfteleport.cv_gaussian import output_excess_noise, run_cv, run_cv_with_resource

v, g2 = 1.0, 3.0
for r in (0.0, 0.5, 1.0, 2.0):
    trace = run_cv_with_resource(v, r, g2)
    fids = [gaussian_fidelity_1mode(trace.stage_covs[0], s) for s in trace.stage_covs[1:]]
    print(f"r = {r:.1f}: stage fidelities", " ".join(f"{f:.4f}" for f in fids))

# without squeezing the output is still better than a coin flip
print("r = 0 closed form:", 1 / (1 + 2 / 3))

# the added noise dies off as the resource gain grows
for g1 in (1e2, 1e4, 1e6):
    out = run_cv(2.0, g1, g2).final
    print(f"g1 = {g1:.0e}: output {np.diag(out)}, excess {output_excess_noise(g1, g2):.2e}")

# the tripartite correlations right after the amplifier
np.set_printoptions(precision=3, suppress=True)
print(run_cv(1.0, 4.0, 3.0).global_covs[2])
