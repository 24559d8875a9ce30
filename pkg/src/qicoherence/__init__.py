"""Relative-entropy coherence of quantum channels through their Choi states."""

from .channels import (
    ChoiState,
    KrausChannel,
    QubitAffine,
    affine_from_kraus,
    apply_channel,
    cbc_qubit_choi,
    choi_from_affine,
    choi_from_kraus,
    is_coherence_breaking,
    is_incoherent_kraus,
    is_unital,
    kraus_from_choi,
    output_marginal,
    singular_values_of_T,
)
from .kernels import BACKEND
from .measures import (
    CoherenceReport,
    ConsistencyError,
    asym_discord,
    decomposition_check,
    monotonicity_witness,
    qi_rec,
    rec,
    rec_choi,
    rising_intervals,
    sym_discord,
)
from .physics import (
    AmplitudeDampingParams,
    CPTPViolation,
    PhaseCovariantParams,
    ad_channel,
    ad_coherence_closed_form,
    gamma_z_closed_form,
    lorentzian_c,
    phase_covariant_coherence_closed_form,
    phase_covariant_frame,
    phase_covariant_trajectory,
)
from .qmat import (
    BipartiteLabel,
    DensityMatrix,
    ValidationError,
    dephase,
    dephase_s,
    hermitian_eigenvalues,
    mutual_information,
    partial_trace,
    relative_entropy,
    von_neumann_entropy,
)

__version__ = "0.1.0"
