"""Algorithm slots: the registry of derivable key families and their finalizers.

A slot is one registered (algorithm_id, curve_id) pair with a fixed output
length, a kind, and finalization rules. Finalizers turn the raw expand
output into key material that satisfies the family's range or clamping
rules, plus a public counterpart where one is cheap to compute:

    ed25519     RFC 8032 seed, public key included
    x25519      RFC 7748 clamped scalar, public key included
    secp256k1   scalar in [1, n-1] by rejection sampling, compressed point
    bls12-381   scalar mod r from a 64-byte wide reduction, no public
    pqc seeds   FIPS 203 / FIPS 204 keygen seed bytes, no public

Registries are immutable values. Registering a new slot yields a new
registry and, by construction, cannot change what any existing slot
derives: the slot's identifiers are already in every info string.

Algorithm id 0x0005 is reserved for sr25519 and intentionally has no slot.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Literal

from cryptography.hazmat.primitives.asymmetric.ed25519 import Ed25519PrivateKey
from cryptography.hazmat.primitives.asymmetric.x25519 import X25519PrivateKey

from . import secp256k1
from .context import DerivedMaterial
from .errors import DerivationError, SlotMismatchError, UnregisteredSlotError

SlotKind = Literal["signing-seed", "dh-scalar", "field-scalar", "pqc-seed"]

# BLS12-381 scalar field order r (the order of the G1/G2 subgroups).
BLS12_381_R = 0x73EDA753299D7D483339D80809A1D80553BDA402FFFE5BFEFFFFFFFF00000001

RESERVED_ALGORITHM_IDS = {0x0005: "sr25519"}

MAX_RETRY_COUNTER = 255


@dataclass(frozen=True)
class SlotSpec:
    """One registered derivable key family."""

    algorithm_id: int
    curve_id: int
    name: str
    kind: SlotKind
    secret_length: int
    # Bytes requested from the expand step; differs from secret_length only
    # for wide-reduction slots (BLS asks for 64, emits 32).
    expand_length: int
    # Tokens used in the context text form.
    algorithm: str
    curve: str

    def __post_init__(self) -> None:
        if not 0 <= self.algorithm_id <= 0xFFFF:
            raise ValueError(f"algorithm_id {self.algorithm_id} outside uint16")
        if not 0 <= self.curve_id <= 0xFFFF:
            raise ValueError(f"curve_id {self.curve_id} outside uint16")
        if not 16 <= self.secret_length <= 128:
            raise ValueError(f"secret_length {self.secret_length} outside 16..128")
        if self.expand_length < self.secret_length:
            raise ValueError("expand_length may not be below secret_length")


ED25519 = SlotSpec(0x0001, 0x0001, "ed25519", "signing-seed", 32, 32, "ed25519", "edwards25519")
X25519 = SlotSpec(0x0002, 0x0002, "x25519", "dh-scalar", 32, 32, "x25519", "curve25519")
SECP256K1 = SlotSpec(0x0003, 0x0003, "secp256k1", "field-scalar", 32, 32, "secp256k1", "secp256k1")
BLS12_381_SCALAR = SlotSpec(0x0004, 0x0004, "bls12-381-scalar", "field-scalar", 32, 64, "bls", "bls12-381")
ML_KEM_768_SEED = SlotSpec(0x0010, 0x0010, "ml-kem-768-seed", "pqc-seed", 64, 64, "ml-kem-768", "ml-kem-768")
ML_DSA_65_SEED = SlotSpec(0x0011, 0x0011, "ml-dsa-65-seed", "pqc-seed", 32, 32, "ml-dsa-65", "ml-dsa-65")


@dataclass(frozen=True)
class SlotRegistry:
    """Immutable collection of slots, indexed by ids and by name tokens."""

    slots: tuple[SlotSpec, ...]

    def __post_init__(self) -> None:
        object.__setattr__(self, "slots", tuple(self.slots))
        ids = [(s.algorithm_id, s.curve_id) for s in self.slots]
        if len(set(ids)) != len(ids):
            raise ValueError("duplicate (algorithm_id, curve_id) in registry")
        tokens = [(s.algorithm, s.curve) for s in self.slots]
        if len(set(tokens)) != len(tokens):
            raise ValueError("duplicate (algorithm, curve) token pair in registry")
        names = [s.name for s in self.slots]
        if len(set(names)) != len(names):
            raise ValueError("duplicate slot name in registry")

    def lookup(self, algorithm_id: int, curve_id: int) -> SlotSpec:
        for s in self.slots:
            if s.algorithm_id == algorithm_id and s.curve_id == curve_id:
                return s
        raise UnregisteredSlotError(
            f"no slot registered for (0x{algorithm_id:04x}, 0x{curve_id:04x})"
        )

    def lookup_tokens(self, algorithm: str, curve: str) -> SlotSpec:
        for s in self.slots:
            if s.algorithm == algorithm and s.curve == curve:
                return s
        raise UnregisteredSlotError(
            f"no slot registered for algorithm {algorithm!r} with curve {curve!r}"
        )

    def with_slot(self, spec: SlotSpec) -> "SlotRegistry":
        """New registry with one more slot; the original is untouched."""
        return SlotRegistry(self.slots + (spec,))

    def __iter__(self):
        return iter(self.slots)

    def __len__(self) -> int:
        return len(self.slots)


BUILTIN_REGISTRY = SlotRegistry(
    (ED25519, X25519, SECP256K1, BLS12_381_SCALAR, ML_KEM_768_SEED, ML_DSA_65_SEED)
)


def registry_builtin() -> list[SlotSpec]:
    """The six builtin slots, in registry order."""
    return list(BUILTIN_REGISTRY.slots)


class KeyPairOut:
    """Finalized key material: slot-conformant secret, optional public part."""

    def __init__(self, secret: bytes, public: bytes | None, slot: SlotSpec) -> None:
        self._secret = bytearray(secret)
        self.public = public
        self.slot = slot
        self._wiped = False

    @property
    def secret(self) -> bytes:
        if self._wiped:
            raise DerivationError("key material has been wiped")
        return bytes(self._secret)

    def wipe(self) -> None:
        for i in range(len(self._secret)):
            self._secret[i] = 0
        self._wiped = True

    def __repr__(self) -> str:  # public half only
        pub = self.public.hex() if self.public is not None else None
        return f"KeyPairOut(slot={self.slot.name}, public={pub})"


def _require_slot(m: DerivedMaterial, expected: SlotSpec) -> None:
    if (m.slot.algorithm_id, m.slot.curve_id) != (expected.algorithm_id, expected.curve_id):
        raise SlotMismatchError(
            f"material was derived for slot {m.slot.name}, not {expected.name}"
        )


def finalize_ed25519(m: DerivedMaterial) -> KeyPairOut:
    """Ed25519 signing seed: the 32 bytes unchanged, public per RFC 8032."""
    _require_slot(m, ED25519)
    seed = m.secret
    public = Ed25519PrivateKey.from_private_bytes(seed).public_key().public_bytes_raw()
    return KeyPairOut(secret=seed, public=public, slot=m.slot)


def x25519_clamp(scalar: bytes) -> bytes:
    """RFC 7748 section 5 scalar clamping for curve25519."""
    b = bytearray(scalar)
    b[0] &= 248
    b[31] &= 127
    b[31] |= 64
    return bytes(b)


def finalize_x25519(m: DerivedMaterial) -> KeyPairOut:
    """X25519 scalar: clamped per RFC 7748, public = X25519(scalar, 9)."""
    _require_slot(m, X25519)
    scalar = x25519_clamp(m.secret)
    public = X25519PrivateKey.from_private_bytes(scalar).public_key().public_bytes_raw()
    return KeyPairOut(secret=scalar, public=public, slot=m.slot)


def secp256k1_scalar(m: DerivedMaterial) -> int:
    """secp256k1 scalar in [1, n-1] via rejection sampling.

    Out-of-range candidates (zero, or >= n) are replaced by re-expanding
    with a one-byte retry counter, never by modular reduction, so the
    result carries no modular bias.
    """
    _require_slot(m, SECP256K1)
    value = int.from_bytes(m.secret, "big")
    counter = 0
    while value == 0 or value >= secp256k1.N:
        counter += 1
        if counter > MAX_RETRY_COUNTER:
            raise DerivationError("secp256k1 retry counter exhausted")
        value = int.from_bytes(m.reexpand(counter), "big")
    return value


def finalize_secp256k1(m: DerivedMaterial) -> KeyPairOut:
    """secp256k1 keypair: scalar in [1, n-1], 33-byte compressed public."""
    value = secp256k1_scalar(m)
    public = secp256k1.compressed_public_key(value)
    return KeyPairOut(secret=value.to_bytes(32, "big"), public=public, slot=m.slot)


def bls_scalar(m: DerivedMaterial) -> int:
    """BLS12-381 scalar: 64-byte wide reduction mod r, retry on zero.

    The 64-byte expansion keeps the reduction bias below 2^-256.
    """
    _require_slot(m, BLS12_381_SCALAR)
    value = int.from_bytes(m.secret, "big") % BLS12_381_R
    counter = 0
    while value == 0:
        counter += 1
        if counter > MAX_RETRY_COUNTER:
            raise DerivationError("bls12-381 retry counter exhausted")
        value = int.from_bytes(m.reexpand(counter), "big") % BLS12_381_R
    return value


def finalize_bls_scalar(m: DerivedMaterial) -> KeyPairOut:
    """BLS12-381 secret scalar as 32 bytes big-endian; no public part here
    (that would drag in pairing arithmetic for no derivation benefit)."""
    value = bls_scalar(m)
    return KeyPairOut(secret=value.to_bytes(32, "big"), public=None, slot=m.slot)


def finalize_pqc_seed(m: DerivedMaterial) -> KeyPairOut:
    """PQC keygen seeds, bytes unchanged: 64 for ML-KEM-768 (d || z per
    FIPS 203), 32 for ML-DSA-65 (xi per FIPS 204). Keygen itself is out of
    scope; downstream consumers feed these to their own keygen."""
    if m.slot.kind != "pqc-seed":
        raise SlotMismatchError(
            f"material was derived for slot {m.slot.name}, not a pqc-seed slot"
        )
    return KeyPairOut(secret=m.secret, public=None, slot=m.slot)


_FINALIZERS = {
    (ED25519.algorithm_id, ED25519.curve_id): finalize_ed25519,
    (X25519.algorithm_id, X25519.curve_id): finalize_x25519,
    (SECP256K1.algorithm_id, SECP256K1.curve_id): finalize_secp256k1,
    (BLS12_381_SCALAR.algorithm_id, BLS12_381_SCALAR.curve_id): finalize_bls_scalar,
    (ML_KEM_768_SEED.algorithm_id, ML_KEM_768_SEED.curve_id): finalize_pqc_seed,
    (ML_DSA_65_SEED.algorithm_id, ML_DSA_65_SEED.curve_id): finalize_pqc_seed,
}


def finalize(m: DerivedMaterial) -> KeyPairOut:
    """Route material to its family finalizer.

    Slots outside the builtin set pass through unchanged with no public
    part; their range rules, if any, belong to whoever registered them.
    """
    handler = _FINALIZERS.get((m.slot.algorithm_id, m.slot.curve_id))
    if handler is not None:
        return handler(m)
    if m.slot.kind == "pqc-seed":
        return finalize_pqc_seed(m)
    return KeyPairOut(secret=m.secret, public=None, slot=m.slot)
