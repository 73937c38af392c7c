"""Degradation of the port-based teleportation resource state under recycling.

Exact Schur-Weyl combinatorics drive closed-form recycling fidelities for
arbitrary port count and local dimension, with the optimal-protocol variant
and a small-instance dense-matrix oracle that verifies every formula.
"""

from .optimal import (
    CoefficientError,
    TriDiagonalMatrix,
    VCoefficients,
    frec_optimal,
    frec_optimal_qubit,
    gamma_angular,
    load_v_coefficients,
    parse_v_coefficients,
    resource_state_fidelity,
    resource_state_fidelity_qubit_angular,
    save_v_coefficients,
    teleportation_matrix_qubit,
    v_qubit,
    v_qubit_analytic,
    v_qubit_numeric,
)
from .oracle import (
    DenseOperator,
    DimensionCapError,
    SpectrumReport,
    build_optimizing_operator,
    channel_fidelity_oracle,
    frec_optimal_oracle,
    frec_oracle,
    permutation_operator,
    pinv_sqrt_psd,
    resource_fidelity_oracle,
    rho_operator,
    rho_spectrum_report,
    signal_state,
    sqrt_psd,
    srm_povm,
    verify_suite,
    young_projector,
)
from .partitions import (
    IrrepDims,
    Partition,
    add_box,
    dim_irrep,
    dims,
    ln_dim_irrep,
    ln_mult_schur_weyl,
    mult_schur_weyl,
    partitions_bounded,
    remove_box,
    theta_of,
)
from .recycling import (
    frec,
    frec_qubit,
    kround_lower_bound,
    povm_block_factor,
    srm_eigenvalue,
    trace_sqrt_povm_signal,
    trace_sqrt_povm_signal_qubit,
)
from .reports import CheckResult, FidelityReport, VerifyReport

__version__ = "0.1.0"

__all__ = [
    "CheckResult",
    "CoefficientError",
    "DenseOperator",
    "DimensionCapError",
    "FidelityReport",
    "IrrepDims",
    "Partition",
    "SpectrumReport",
    "TriDiagonalMatrix",
    "VCoefficients",
    "VerifyReport",
    "add_box",
    "build_optimizing_operator",
    "channel_fidelity_oracle",
    "dim_irrep",
    "dims",
    "frec",
    "frec_optimal",
    "frec_optimal_oracle",
    "frec_optimal_qubit",
    "frec_oracle",
    "frec_qubit",
    "gamma_angular",
    "kround_lower_bound",
    "ln_dim_irrep",
    "ln_mult_schur_weyl",
    "load_v_coefficients",
    "mult_schur_weyl",
    "parse_v_coefficients",
    "partitions_bounded",
    "permutation_operator",
    "pinv_sqrt_psd",
    "povm_block_factor",
    "remove_box",
    "resource_fidelity_oracle",
    "resource_state_fidelity",
    "resource_state_fidelity_qubit_angular",
    "rho_operator",
    "rho_spectrum_report",
    "save_v_coefficients",
    "signal_state",
    "sqrt_psd",
    "srm_eigenvalue",
    "srm_povm",
    "teleportation_matrix_qubit",
    "theta_of",
    "trace_sqrt_povm_signal",
    "trace_sqrt_povm_signal_qubit",
    "v_qubit",
    "v_qubit_analytic",
    "v_qubit_numeric",
    "verify_suite",
    "young_projector",
]
