"""Single-mode Gaussian channels, Petz recovery of lossy channels, and a Fock-space oracle."""

from .errors import (
    CutoffTooSmallError,
    DomainError,
    FormatError,
    InternalConsistencyError,
    NoBeamSplitterRealizationError,
    NotScalarError,
    PetzLossError,
    PureOutputError,
    UnphysicalStateError,
)
from .fidelity import fidelity, fidelity_f, fidelity_value
from .fock import (
    FockDensity,
    fock_apply_scalar_channel,
    fock_fidelity,
    fock_from_gaussian,
    quadrature_moments,
)
from .gaussian import (
    GaussianChannel,
    GaussianState,
    apply_channel,
    coherent_state,
    compose,
    identity_channel,
    is_completely_positive,
    squeezed_state,
    state_from_cov,
    thermal_state,
    vacuum,
)
from .petz import (
    LossySpec,
    PetzResult,
    Realization,
    beam_splitter_condition,
    generalized_transmissivity,
    lossy_channel,
    petz_ancilla,
    petz_map,
    petz_recovery,
)
from .recovery import (
    eta_max,
    family_member,
    optimal_recovery,
    protocol_r0,
    protocol_r1,
    relative_diffs,
    result2_band,
)

__version__ = "0.1.0"
