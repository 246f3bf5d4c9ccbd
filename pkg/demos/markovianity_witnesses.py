"""
Why the teleportation dynamics is not Markovian
===============================================

Two witnesses. The first asks whether the stage-2 map can be continued to
the full map by some CP map. The second looks for a revival of the trace
distance between two inputs.
"""

import numpy as np

from mfteleport.nonmarkov import (
    blp_trace,
    cp_min_eigenvalue,
    divisibility_residual,
    markovian_control,
    prefix_channel,
)
from mfteleport.qudit_core import basis_ket, ket_to_dm, pauli_z_d, plus_ket

d = 2
prefixes = [prefix_channel(d, None, k) for k in (1, 2, 3)]
for k, t in enumerate(prefixes, start=1):
    print(f"stage {k}: rank {np.linalg.matrix_rank(t, tol=1e-9)}, Choi min eig {cp_min_eigenvalue(t):.1e}")

# stage 2 keeps only populations, so no later map can restore coherences
rep = divisibility_residual(prefixes[1], prefixes[2])
print("teleportation:", rep.verdict, f"residual {rep.residual:.4f}")

# two partial-swap collisions with fresh ancillas do factor
rep = divisibility_residual(*markovian_control())
print("collision model:", rep.verdict, f"residual {rep.residual:.1e}")

# |+> and Z|+> become identical after stage 2 and separate again after stage 3
plus = plus_ket(d)
a, b = ket_to_dm(plus), ket_to_dm(pauli_z_d(d) @ plus)
print("fourier pair:", np.round(blp_trace(d, None, a, b).distances, 6))

# computational states survive the dephasing, so they show nothing
a, b = ket_to_dm(basis_ket(d, 0)), ket_to_dm(basis_ket(d, 1))
print("computational pair:", np.round(blp_trace(d, None, a, b).distances, 6))
