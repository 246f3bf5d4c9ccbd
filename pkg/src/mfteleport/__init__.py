"""Measurement-free teleportation as a non-Markovian open-system process.

Qudit and Gaussian simulators for the three-stage protocol, plus tools
for fidelity, entanglement and divisibility analysis.
"""

from .cv_gaussian import CvStageTrace, run_cv, run_cv_with_resource, stage2_closed_form
from .dv_teleport import (
    DvStageTrace,
    build_stage_unitaries,
    check_stage_identities,
    run_ideal,
    run_with_resource,
)
from .metrics import (
    eof_tmsv,
    eof_two_qubit,
    gaussian_fidelity_1mode,
    trace_distance,
    uhlmann_fidelity,
)
from .nonmarkov import DivisibilityReport, blp_trace, divisibility_residual, prefix_channel
from .qudit_core import PhysicalityError, bell_phi, werner

__version__ = "0.1.0"
