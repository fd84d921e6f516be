"""Single-root, context-isolated, multi-algorithm key derivation.

One root entropy value, transported as a mnemonic, is hardened with a
passphrase into a usage state; every key the holder ever needs is then
derived from that state under an injective context descriptor naming the
algorithm, curve, purpose and index. Changing the passphrase creates a new,
unlinkable usage state without touching the root or invalidating old
states: rotation is stateless.

Typical use:

    root = decode_mnemonic(Mnemonic.from_text(phrase))
    state = derive_usage_state(root, Passphrase.from_text("pw"), PROFILE_DEFAULT)
    ctx = ContextDescriptor(algorithm_id=0x0001, curve_id=0x0001, purpose="ssh", index=0)
    key = finalize(derive(state, ctx))
"""

from .context import (
    ContextDescriptor,
    DerivedMaterial,
    derive,
    derive_batch,
    encode_context,
    format_context_text,
    parse_context_text,
)
from .errors import (
    BatchDerivationError,
    ChecksumMismatchError,
    ContextEncodingError,
    DerivationError,
    MnemonicError,
    MscikdfError,
    ParameterError,
    RootLengthError,
    SlotMismatchError,
    UnknownWordError,
    UnregisteredSlotError,
    VectorFormatError,
)
from .harness import (
    HarnessConfig,
    IsolationReport,
    avalanche_test,
    cross_curve_correlation_test,
    mnemonic_substitution_test,
    rotation_unlinkability_test,
    run_negative_controls,
    run_suite,
)
from .kat import KatRecord, KatReport, kat_generate, kat_verify, read_vectors, write_vectors
from .mnemonic import Mnemonic, RootEntropy, decode_mnemonic, encode_root
from .slots import (
    BUILTIN_REGISTRY,
    KeyPairOut,
    SlotRegistry,
    SlotSpec,
    finalize,
    finalize_bls_scalar,
    finalize_ed25519,
    finalize_pqc_seed,
    finalize_secp256k1,
    finalize_x25519,
    registry_builtin,
)
from .states import (
    PROFILE_DEFAULT,
    PROFILE_TEST_VECTORS,
    HardeningParams,
    Passphrase,
    UsageState,
    derive_usage_state,
    params_for_profile,
    profile_name,
    usage_fingerprint,
)

__version__ = "0.1.0"

__all__ = [
    "BUILTIN_REGISTRY",
    "BatchDerivationError",
    "ChecksumMismatchError",
    "ContextDescriptor",
    "ContextEncodingError",
    "DerivationError",
    "DerivedMaterial",
    "HardeningParams",
    "HarnessConfig",
    "IsolationReport",
    "KatRecord",
    "KatReport",
    "KeyPairOut",
    "Mnemonic",
    "MnemonicError",
    "MscikdfError",
    "PROFILE_DEFAULT",
    "PROFILE_TEST_VECTORS",
    "ParameterError",
    "Passphrase",
    "RootEntropy",
    "RootLengthError",
    "SlotMismatchError",
    "SlotRegistry",
    "SlotSpec",
    "UnknownWordError",
    "UnregisteredSlotError",
    "UsageState",
    "VectorFormatError",
    "avalanche_test",
    "cross_curve_correlation_test",
    "decode_mnemonic",
    "derive",
    "derive_batch",
    "derive_usage_state",
    "encode_context",
    "encode_root",
    "finalize",
    "finalize_bls_scalar",
    "finalize_ed25519",
    "finalize_pqc_seed",
    "finalize_secp256k1",
    "finalize_x25519",
    "format_context_text",
    "kat_generate",
    "kat_verify",
    "mnemonic_substitution_test",
    "params_for_profile",
    "parse_context_text",
    "profile_name",
    "read_vectors",
    "registry_builtin",
    "rotation_unlinkability_test",
    "run_negative_controls",
    "run_suite",
    "usage_fingerprint",
    "write_vectors",
]
