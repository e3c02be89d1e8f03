"""Secure linear network coding under eavesdropping and active attacks.

Exact finite-field arithmetic, transfer-matrix derivation for acyclic
networks, a causal adversary simulator, a randomized robust code,
Toeplitz privacy amplification and exact leakage oracles.
"""

__version__ = "0.1.0"

from .field import (
    FieldElement,
    FieldMismatchError,
    FieldSpec,
    ReducibleModulusError,
    field_arith,
    format_field,
    lift_element,
    make_extension_field,
    make_prime_field,
    parse_field,
)
from .linalg import (
    FqMatrix,
    NoSolution,
    image_basis,
    independent_rows,
    kernel_basis,
    lift_matrix,
    random_invertible,
    rank,
    solve_left,
)
from .network import (
    AdversaryPlacement,
    ChannelParams,
    LinearNetwork,
    TransferMatrices,
    channel_params,
    derive_transfer,
    node_to_edge,
    parse_network,
)
from .attack import enumerate_strategies, passive, random_strategy, simulate
from .robust import (
    DecodeFailure,
    RobustCodeInstance,
    RobustCodeParams,
    SideInfo,
    check_conditions,
    collision_oracle,
    decode,
    encode,
    keygen,
    lift_block,
    reduce_HZ,
)
from .privacy import (
    HashSpec,
    SecureCode,
    ToeplitzSeed,
    hash_apply,
    leakage_bound,
    rates,
    secure_decode,
    secure_encode,
    universal2_check,
)
from .secrecy import JointPMF, empirical_mi, leakage_of_secure_code, linear_leakage, theorem1_audit
