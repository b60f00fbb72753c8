"""Group key establishment over a broadcast channel, with its breaks.

The package implements an authenticated group key transfer protocol built
from Diffie-Hellman pairwise secrets and polynomial secret sharing, a toy
PKI to certify long-term keys, working implementations of the attacks the
construction admits, and a deterministic harness that records scenario
transcripts.  A FastAPI service and a CLI sit on top.
"""

from .adversary import (
    ObservedSession,
    RecoveredShareSet,
    brute_force_dlog,
    forge_replay,
    insider_forge_broadcast,
    insider_recover_shares,
    outsider_recover_key,
)
from .errors import (
    BadGeneratorError,
    BadModulusError,
    CertificateInvalidError,
    DlogNotFoundError,
    DuplicateAbscissaError,
    DuplicateIdentifierError,
    DuplicateRecipientError,
    EmptyGroupError,
    EmptyPointSetError,
    GkesimError,
    KeyRecoveryMismatchError,
    MissingLeakedKeyError,
    NotAMemberError,
    NotPrimeError,
    OrderMismatchError,
    ParamsTooLargeError,
    ScenarioInvalidError,
    TooManyPointsError,
    ZeroIdentifierError,
)
from .groups import (
    GroupParams,
    is_probable_prime,
    lagrange_eval,
    mod_exp,
    mod_inv,
    random_scalar,
    random_scalar_excluding,
    validate_params,
)
from .harness import (
    Community,
    Scenario,
    ScenarioKind,
    Transcript,
    extend_with_attack,
    run_scenario,
    seeded_rng,
    setup_community,
)
from .pki import (
    CaKeypair,
    Certificate,
    Member,
    ca_keygen,
    member_keygen,
    sign,
    verify,
    verify_certificate,
)
from .presets import generate_params, std_params, toy_dlog_params, toy_medium_params, toy_params
from .protocol import (
    AcceptanceResult,
    BroadcastMessage,
    RejectReason,
    build_broadcast,
    hash_commitment,
    pairwise_key_initiator,
    pairwise_key_recipient,
    process_broadcast,
    random_session_key,
)

__version__ = "0.1.0"

__all__ = [
    "AcceptanceResult",
    "BadGeneratorError",
    "BadModulusError",
    "BroadcastMessage",
    "CaKeypair",
    "Certificate",
    "CertificateInvalidError",
    "Community",
    "DlogNotFoundError",
    "DuplicateAbscissaError",
    "DuplicateIdentifierError",
    "DuplicateRecipientError",
    "EmptyGroupError",
    "EmptyPointSetError",
    "GkesimError",
    "GroupParams",
    "KeyRecoveryMismatchError",
    "Member",
    "MissingLeakedKeyError",
    "NotAMemberError",
    "NotPrimeError",
    "ObservedSession",
    "OrderMismatchError",
    "ParamsTooLargeError",
    "RecoveredShareSet",
    "RejectReason",
    "Scenario",
    "ScenarioInvalidError",
    "ScenarioKind",
    "TooManyPointsError",
    "Transcript",
    "ZeroIdentifierError",
    "brute_force_dlog",
    "build_broadcast",
    "ca_keygen",
    "extend_with_attack",
    "forge_replay",
    "generate_params",
    "hash_commitment",
    "insider_forge_broadcast",
    "insider_recover_shares",
    "is_probable_prime",
    "lagrange_eval",
    "member_keygen",
    "mod_exp",
    "mod_inv",
    "outsider_recover_key",
    "pairwise_key_initiator",
    "pairwise_key_recipient",
    "process_broadcast",
    "random_scalar",
    "random_scalar_excluding",
    "random_session_key",
    "run_scenario",
    "seeded_rng",
    "setup_community",
    "sign",
    "std_params",
    "toy_dlog_params",
    "toy_medium_params",
    "toy_params",
    "validate_params",
    "verify",
    "verify_certificate",
]
