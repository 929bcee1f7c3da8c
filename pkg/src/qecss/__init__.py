"""Channel-adapted quantum error correcting codes via see-saw iteration.

Find encoder/decoder pairs maximizing the fidelity of ``decoder after noise
after encoder`` with the identity, by a fidelity-improving power-method
generalization alternating between the two slots.
"""

from .channel import (
    Channel,
    ChoiOperator,
    ValidationReport,
    apply,
    channel_fidelity,
    channel_from_json,
    channel_to_json,
    choi_of,
    compose,
    compress,
    identity_channel,
    kraus_of,
    tensor_power,
    tensor_product,
    validate_channel,
)
from .codes import (
    CodePair,
    code_fidelity,
    code_from_json,
    code_to_json,
    five_bit_code,
    trivial_code,
)
from .errors import (
    DimMismatch,
    NegativeEigenvalue,
    NonSquare,
    NotHermitian,
    NotPSD,
    OutOfRange,
    QecssError,
    ShapeMismatch,
    ZeroMap,
    ZeroMatrix,
)
from .iterate import (
    IterationConfig,
    IterationStepReport,
    OptimizationTrace,
    StopReason,
    iteration_step,
    optimize_channel,
    perturb,
    trace_to_json,
)
from .linalg import EigenSystem, hermitian_eigensystem, kron, psd_inv_sqrt
from .objective import (
    ObjectiveOperator,
    decoder_objective,
    encoder_objective,
    evaluate_objective,
    fidelity_objective,
    middle_objective,
)
from .seesaw import (
    CodeSearchResult,
    DiagnosticsReport,
    SeesawConfig,
    diagnostics_to_json,
    isometry_defect,
    optimize_code,
    result_to_json,
    syndrome_diagnostic,
)
from .standard import (
    RandomChannelSpec,
    bit_flip,
    depolarizing,
    mix_with_identity,
    random_channel,
)

__version__ = "0.1.0"
