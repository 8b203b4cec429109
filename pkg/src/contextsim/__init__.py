"""Simulator and verification suite for single-photon quantum contextuality.

The package models a two-qubit photon (spatial path and polarization),
the nine-observable Peres-Mermin square whose six measurement contexts give
chi = 6 for every quantum state against the noncontextual bound chi <= 4,
the linear-optics devices and cascades that measure the contexts
sequentially, and the counting statistics of a realistic run.
"""

from .experiment import (
    DEFAULT_NOISE,
    DEFAULT_SHOTS,
    IDEAL_NOISE,
    ChiResult,
    CorrelationResult,
    NoiseModel,
    OutcomeDistribution,
    RunConfig,
    chi_ideal,
    correlation,
    estimate,
    exact_chi_result,
    luders_distribution,
    mix_results,
    run_experiment,
    sample_counts,
)
from .nchv import certify_bound, chi_of_assignment, enumerate_assignments
from .optics import (
    Cascade,
    DeviceNetlist,
    Element,
    MeasurementDevice,
    PreparationParams,
    build_cascade,
    compile_device,
    compiled_devices,
    device_netlist,
    element_unitary,
    prepare,
    run_cascade,
    solve_preparation,
)
from .pm_square import Context, PMSquare, build_square, context_product_sign, contexts, verify_compatibility
from .qcore import expectation, partial_transpose, pm_projectors, tensor
from .state_catalog import (
    EntanglementReport,
    StateSpec,
    catalog,
    chsh_max,
    density,
    entanglement_report,
    get_state,
    ppt_min_eig,
)

__version__ = "0.1.0"
