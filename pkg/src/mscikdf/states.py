"""Usage states: passphrase-hardened re-rootings of one root entropy.

A usage state is G(R, P): the root entropy R and a passphrase P are bound
into a 64-byte state root via Argon2id (RFC 9106) followed by an
HKDF-SHA-512 extract. Distinct passphrases on the same root give unrelated
states, which is what makes stateless rotation possible: switch passphrase,
re-derive everything, never touch R.

Pipeline, bytes on the wire:

    argon_salt = SHA-256("MSCIKDF/v1/pw-salt" || R)[:16]
    T          = Argon2id(password=P, salt=argon_salt, tag_length=32)
    state_root = HMAC-SHA-512(key="MSCIKDF/v1/extract", msg=R || T)
    prk        = state_root
    fingerprint = HKDF-Expand(prk, "MSCIKDF/v1/fingerprint", 8)

The Argon2id salt depends on R, so equal passphrases under different roots
share nothing, and a precomputed dictionary for one root is useless for
another. The extract step re-binds R directly in case Argon2id's output is
ever weakened.
"""

from __future__ import annotations

import hashlib
from dataclasses import dataclass, field

from cryptography.hazmat.primitives.kdf.argon2 import Argon2id

from .errors import ParameterError
from .kdf import hkdf_expand, hkdf_extract
from .mnemonic import RootEntropy

PW_SALT_LABEL = b"MSCIKDF/v1/pw-salt"
EXTRACT_SALT = b"MSCIKDF/v1/extract"
FINGERPRINT_INFO = b"MSCIKDF/v1/fingerprint"

ARGON_SALT_LEN = 16
ARGON_TAG_LEN = 32
STATE_ROOT_LEN = 64
FINGERPRINT_LEN = 8

MAX_PASSPHRASE_LEN = 1024

# Hardening floor: refuse anything weaker outright.
MIN_MEMORY_MIB = 8
MIN_ITERATIONS = 1


class Passphrase:
    """UTF-8 passphrase, held in a wipeable buffer.

    Empty passphrases are legal (the CLI warns about them); anything over
    1024 bytes is refused.
    """

    def __init__(self, data: bytes = b"") -> None:
        if len(data) > MAX_PASSPHRASE_LEN:
            raise ParameterError(
                f"passphrase is {len(data)} bytes, limit is {MAX_PASSPHRASE_LEN}"
            )
        self._buf = bytearray(data)
        self._wiped = False

    @classmethod
    def from_text(cls, text: str) -> "Passphrase":
        return cls(text.encode("utf-8"))

    @property
    def data(self) -> bytes:
        if self._wiped:
            raise ParameterError("passphrase already wiped")
        return bytes(self._buf)

    def __len__(self) -> int:
        return len(self._buf)

    def wipe(self) -> None:
        """Best-effort zeroization; the interpreter may hold copies."""
        for i in range(len(self._buf)):
            self._buf[i] = 0
        self._wiped = True

    def __repr__(self) -> str:
        return f"Passphrase(<{len(self._buf)} bytes>)"


@dataclass(frozen=True)
class HardeningParams:
    """Argon2id cost parameters. The floor (8 MiB, 1 iteration) is enforced
    at construction; there is no way to run weaker."""

    memory_mib: int = 64
    iterations: int = 3
    parallelism: int = 1

    def __post_init__(self) -> None:
        if self.memory_mib < MIN_MEMORY_MIB:
            raise ParameterError(
                f"memory_mib {self.memory_mib} below floor {MIN_MEMORY_MIB}"
            )
        if self.iterations < MIN_ITERATIONS:
            raise ParameterError(
                f"iterations {self.iterations} below floor {MIN_ITERATIONS}"
            )
        if self.parallelism < 1:
            raise ParameterError(f"parallelism {self.parallelism} below 1")

    @property
    def memory_kib(self) -> int:
        return self.memory_mib * 1024


# The default profile is the production setting. The test-vectors profile
# exists so vector suites and CI run in seconds; it is unsafe for production
# use and the CLI says so whenever it is selected.
PROFILE_DEFAULT = HardeningParams(memory_mib=64, iterations=3, parallelism=1)
PROFILE_TEST_VECTORS = HardeningParams(memory_mib=8, iterations=1, parallelism=1)

_PROFILES = {
    "default": PROFILE_DEFAULT,
    "test-vectors": PROFILE_TEST_VECTORS,
}


def params_for_profile(name: str) -> HardeningParams:
    try:
        return _PROFILES[name]
    except KeyError:
        raise ParameterError(f"unknown hardening profile {name!r}") from None


def profile_name(params: HardeningParams) -> str | None:
    """Name of the profile these params correspond to, if any."""
    for name, profile in _PROFILES.items():
        if profile == params:
            return name
    return None


@dataclass(frozen=True)
class UsageState:
    """G(R, P): everything derivation needs, nothing that recovers R or P."""

    state_root: bytes = field(repr=False)
    prk: bytes = field(repr=False)
    fingerprint: bytes

    def __post_init__(self) -> None:
        if len(self.state_root) != STATE_ROOT_LEN:
            raise ParameterError(f"state_root must be {STATE_ROOT_LEN} bytes")
        if len(self.prk) != STATE_ROOT_LEN:
            raise ParameterError(f"prk must be {STATE_ROOT_LEN} bytes")
        if len(self.fingerprint) != FINGERPRINT_LEN:
            raise ParameterError(f"fingerprint must be {FINGERPRINT_LEN} bytes")

    @property
    def fingerprint_hex(self) -> str:
        """16 lowercase hex chars; safe to print, log and compare."""
        return self.fingerprint.hex()

    def __repr__(self) -> str:
        return f"UsageState(fingerprint={self.fingerprint_hex})"


def _argon_salt(root: RootEntropy) -> bytes:
    return hashlib.sha256(PW_SALT_LABEL + root.data).digest()[:ARGON_SALT_LEN]


def derive_usage_state(
    root: RootEntropy,
    passphrase: Passphrase,
    params: HardeningParams = PROFILE_DEFAULT,
) -> UsageState:
    """Derive G(R, P) under the given hardening parameters.

    Deterministic: same (R, P, params) always yields the same state. The
    caller keeps ownership of ``passphrase`` and should wipe it when done.
    """
    tag = bytearray(
        Argon2id(
            salt=_argon_salt(root),
            length=ARGON_TAG_LEN,
            iterations=params.iterations,
            lanes=params.parallelism,
            memory_cost=params.memory_kib,
        ).derive(passphrase.data)
    )
    try:
        state_root = hkdf_extract(EXTRACT_SALT, root.data + bytes(tag))
    finally:
        for i in range(len(tag)):  # best-effort wipe of the intermediate
            tag[i] = 0
    fingerprint = hkdf_expand(state_root, FINGERPRINT_INFO, FINGERPRINT_LEN)
    return UsageState(state_root=state_root, prk=state_root, fingerprint=fingerprint)


def usage_fingerprint(state: UsageState) -> str:
    """Public, stable identifier for a usage state (16 lowercase hex chars)."""
    return state.fingerprint_hex
