"""QuDit state-vector simulation of quantum sorters and remote port determination."""

from .gates import (
    GateApplication,
    LinearMap,
    NotUnitaryError,
    Unitary,
    adjoint,
    apply,
    controlled,
    controlled_rev,
    is_unitary,
    mqs,
    pauli_x,
    perfect_sorter_map,
    sqs,
    swap,
)
from .hilbert import (
    BasisLabel,
    Register,
    RegisterLayout,
    StateVector,
    basis_state,
    inner_product,
    mod_add,
    mod_sub,
    tensor,
)
from .kernels import BACKEND
from .measure import (
    DEFAULT_SEED,
    CollapseResult,
    ImpossibleOutcomeError,
    OutcomeDistribution,
    ShotRecord,
    collapse,
    marginal,
    sample,
)
from .protocols import (
    BipartiteConfig,
    ProtocolResult,
    TripartiteConfig,
    certainty_verdict,
    entangled_state,
    ghz_state,
    run_bipartite,
    run_tripartite,
    w_state,
)

__version__ = "0.1.0"
