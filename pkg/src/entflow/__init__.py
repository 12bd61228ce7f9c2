"""Steady-state Gaussian dynamics of a squeezed bosonic mode driving a
cascaded chain: stability, one-way entanglement transport, and thermal
limits, all in the covariance-matrix picture."""

from .errors import (
    ComplexEigenvalueError,
    ConfigError,
    EigenFailureError,
    EntflowError,
    IllConditionedError,
    LengthMismatchError,
    MissingDirectionError,
    NegativeRateError,
    NonpositiveOccupationError,
    ResidualTooLargeError,
    SingularSystemError,
    UnstableError,
    ZeroModesError,
)
from .network import (
    Direction,
    NetworkConfig,
    SystemMatrices,
    ValidatedNetwork,
    bath_occupations,
    build_dynamical_matrix,
    build_input_matrix,
    build_noise_matrix,
    build_system_matrices,
    config_violations,
    node_damping,
    validate_config,
)
from .lyapunov import (
    SpectralDecomposition,
    StabilityReport,
    evolve_covariance,
    solve_steady_state_spectral,
    solve_steady_state_vectorized,
    spectral_abscissa,
    spectral_decomposition,
    stability_report,
)
from .measures import (
    EntanglementRecord,
    PhysicalityReport,
    TwoModeCovariance,
    check_physical,
    effective_temperature,
    log_negativity,
    mean_occupation,
    ppt_symplectic_min,
    reduce_single_mode,
    reduce_two_mode,
    symplectic_eigenvalues,
    symplectic_form,
    thermal_covariance,
    two_mode_squeezed_covariance,
    vacuum_covariance,
)
from .sweep import (
    ENTANGLEMENT_THRESHOLD,
    FIGURE_NAMES,
    FigureTable,
    PointResult,
    SweepGrid,
    export_csv,
    figure_dataset,
    max_entangled_node,
    run_point,
    sweep_grid,
)
from .config_io import (
    DEFAULT_CONFIG,
    MICROWAVE,
    PRESETS,
    PhysicalPreset,
    load_config_file,
    save_eigenvalues_csv,
    save_matrix_csv,
)

__version__ = "0.1.0"
