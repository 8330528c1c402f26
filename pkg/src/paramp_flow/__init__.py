"""Entropy, number and energy flow in a driven degenerate parametric amplifier."""

from .errors import (
    ContractViolation,
    NumericalFailure,
    ParampFlowError,
    RegimeError,
    ResourceLimitError,
    TruncationError,
)
from .gaussian import (
    MultimodeCovariance,
    QuadCovariance,
    SymplecticSpectrum,
    entropy_from_spectrum,
    is_physical,
    symplectic_spectrum,
)
from .paramp import (
    DerivedParams,
    NoiseMatrices,
    ParampParams,
    asymptotic_covariance,
    covariance_at,
    derive,
    early_time_det,
    noise_matrices,
    paramp_entropy,
    resonant_t_max,
    resonant_transition,
    squeezed_initial_covariance,
)
from .output import (
    CoherenceMatrix,
    ModeGrid,
    corZ_continuum,
    diag_coherences,
    diagonal_block,
    f_kernel,
    offdiag_coherences,
    output_covariance,
    structured_spectrum,
)
from .flux import (
    FluxReport,
    delta_N,
    drive_power,
    entropy_flux_scan,
    naive_blockwise_entropy,
    number_flux,
    output_entropy,
    output_power,
)
from .fock import FockState, beamsplitter_transfer, entanglement_swap

__version__ = "0.1.0"
