"""Block-diagonal spectra of the two-qubit quantum Rabi model.

Displaced-frame rotating-wave treatment with per-qubit displacement roots,
closed four-state blocks at joint resonance, exact-diagonalization
cross-checks, and a pseudomode-reservoir extension with dark states.
"""
from .numerics import (
    ConvergenceFailureError,
    EigenDecomposition,
    NoBracketError,
    NonFiniteError,
    SymmetricMatrix,
    eigh,
    eigvals_sym,
    eval_laguerre,
    find_root,
)
from .model import (
    CoefficientMode,
    ModelParams,
    TrwaParams,
    coeff_f1,
    coeff_g0,
    constant_offset,
    resonance_residual,
    residual_eq8,
    residual_eq9,
)
from .resonance import (
    DegenerateDesignError,
    ResonantDesign,
    SingularError,
    WindowScanRow,
    design_resonant,
    lambda_guess,
    scan_delta1_window,
    scan_lambda2_window,
    solve_lambda1,
    solve_lambda2,
)
from .fockspace import (
    Block4,
    ChainState,
    ParityChain,
    SpectrumRow,
    SpectrumTable,
    block_eigenvector_to_wavefunction,
    build_block4,
    build_effective_chain_matrix,
    build_parity_chain,
    chain_n_max_for_blocks,
    closed_block_index_groups,
    spectrum_vs_g1,
    trwa_block_energies,
)
from .oracle import (
    ConvergenceReport,
    DeviationRow,
    TrwaExactComparison,
    build_full_pseudomode,
    build_full_rabi,
    build_rotated_rabi,
    compare_trwa_exact,
    exact_spectrum,
    parity_defect,
    parity_defect_pseudomode,
)
from .reservoir import (
    AsymmetricParamsError,
    DiscrepancyReport,
    EntryMismatch,
    ReservoirChain,
    ReservoirChainState,
    ReservoirCoefficients,
    ReservoirParams,
    SingularDenominatorError,
    SingularEtaError,
    build_h_2w1_2w,
    build_reservoir_chain,
    build_reservoir_matrix,
    compute_K,
    dark_state_energy,
    dark_state_residual,
    eq24_vector,
    lorentzian_density,
    quasi_exact_subspace,
    reservoir_constant,
    verify_eq24,
)

__version__ = "0.1.0"

__all__ = [
    "AsymmetricParamsError",
    "Block4",
    "ChainState",
    "CoefficientMode",
    "ConvergenceFailureError",
    "ConvergenceReport",
    "DegenerateDesignError",
    "DeviationRow",
    "DiscrepancyReport",
    "EigenDecomposition",
    "EntryMismatch",
    "ModelParams",
    "NoBracketError",
    "NonFiniteError",
    "ParityChain",
    "ReservoirChain",
    "ReservoirChainState",
    "ReservoirCoefficients",
    "ReservoirParams",
    "ResonantDesign",
    "SingularDenominatorError",
    "SingularError",
    "SingularEtaError",
    "SpectrumRow",
    "SpectrumTable",
    "SymmetricMatrix",
    "TrwaExactComparison",
    "TrwaParams",
    "WindowScanRow",
    "block_eigenvector_to_wavefunction",
    "build_block4",
    "build_effective_chain_matrix",
    "build_full_pseudomode",
    "build_full_rabi",
    "build_h_2w1_2w",
    "build_parity_chain",
    "build_reservoir_chain",
    "build_reservoir_matrix",
    "build_rotated_rabi",
    "chain_n_max_for_blocks",
    "closed_block_index_groups",
    "coeff_f1",
    "coeff_g0",
    "compare_trwa_exact",
    "compute_K",
    "constant_offset",
    "dark_state_energy",
    "dark_state_residual",
    "design_resonant",
    "eigh",
    "eigvals_sym",
    "eq24_vector",
    "eval_laguerre",
    "exact_spectrum",
    "find_root",
    "lambda_guess",
    "lorentzian_density",
    "parity_defect",
    "parity_defect_pseudomode",
    "quasi_exact_subspace",
    "reservoir_constant",
    "resonance_residual",
    "residual_eq8",
    "residual_eq9",
    "scan_delta1_window",
    "scan_lambda2_window",
    "solve_lambda1",
    "solve_lambda2",
    "spectrum_vs_g1",
    "trwa_block_energies",
    "verify_eq24",
]
