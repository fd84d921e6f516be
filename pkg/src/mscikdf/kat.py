"""Known-answer test vectors: generation, verification, JSONL storage.

One record binds (root, passphrase, hardening profile, context) to the
expected fingerprint, secret and public key. An implementation in any
language can re-derive a record from its first four fields and compare the
rest bit-for-bit; the committed files under vectors/ are the interchange
format (one JSON object per line, LF terminated, fixed key order).

Suites stay on the test-vectors hardening profile so verification runs in
CI seconds; the default profile is exercised by one slow record generated
separately (see scripts/make_default_profile_vector.py).
"""

from __future__ import annotations

import hashlib
import json
from dataclasses import dataclass
from pathlib import Path

from .context import derive, format_context_text, parse_context_text
from .errors import MscikdfError, VectorFormatError
from .mnemonic import RootEntropy
from .slots import SlotRegistry, finalize
from .states import Passphrase, derive_usage_state, params_for_profile

_FIELD_ORDER = (
    "root_hex",
    "passphrase_utf8",
    "hardening_profile",
    "context_text_form",
    "expected_state_fingerprint_hex",
    "expected_secret_hex",
    "expected_public_hex",
)

SUITES = ("core", "slots", "rotation")

# Fixed roots for the core grid: the two all-zero roots plus one
# random-looking but nothing-up-my-sleeve root (a public hash output).
ZERO_ROOT_16 = bytes(16)
ZERO_ROOT_32 = bytes(32)
FIXED_ROOT_32 = hashlib.sha256(b"MSCIKDF/v1/kat-root").digest()

CORE_PASSPHRASES = ("", "pw", "0123456789abcdef" * 4)
ROTATION_PASSPHRASES = ("alpha", "beta", "gamma")

# Trivial contexts: empty purpose, index 0, no extensions.
CORE_CONTEXTS = ("mscikdf:v1/ed25519/edwards25519//0", "mscikdf:v1/x25519/curve25519//0")
ROTATION_CONTEXT = "mscikdf:v1/ed25519/edwards25519//0"


@dataclass(frozen=True)
class KatRecord:
    root_hex: str
    passphrase_utf8: str
    hardening_profile: str
    context_text_form: str
    expected_state_fingerprint_hex: str
    expected_secret_hex: str
    expected_public_hex: str | None = None

    def to_json_line(self) -> str:
        obj = {name: getattr(self, name) for name in _FIELD_ORDER}
        if obj["expected_public_hex"] is None:
            del obj["expected_public_hex"]
        return json.dumps(obj, separators=(",", ":"), ensure_ascii=True)

    @classmethod
    def from_json_line(cls, line: str, lineno: int = 0) -> "KatRecord":
        try:
            obj = json.loads(line)
        except json.JSONDecodeError as exc:
            raise VectorFormatError(lineno, f"invalid JSON ({exc.msg})") from exc
        if not isinstance(obj, dict):
            raise VectorFormatError(lineno, "record is not a JSON object")
        unknown = set(obj) - set(_FIELD_ORDER)
        if unknown:
            raise VectorFormatError(lineno, f"unknown keys {sorted(unknown)}")
        missing = set(_FIELD_ORDER[:-1]) - set(obj)
        if missing:
            raise VectorFormatError(lineno, f"missing keys {sorted(missing)}")
        for key, value in obj.items():
            if not isinstance(value, str):
                raise VectorFormatError(lineno, f"{key} must be a string")
        for key in (
            "root_hex",
            "expected_state_fingerprint_hex",
            "expected_secret_hex",
            "expected_public_hex",
        ):
            value = obj.get(key)
            if value is None:
                continue
            if value != value.lower():
                raise VectorFormatError(lineno, f"{key} must be lowercase hex")
            try:
                bytes.fromhex(value)
            except ValueError:
                raise VectorFormatError(lineno, f"{key} is not valid hex") from None
        if len(obj["root_hex"]) not in (32, 64):
            raise VectorFormatError(lineno, "root_hex must encode 16 or 32 bytes")
        if len(obj["expected_state_fingerprint_hex"]) != 16:
            raise VectorFormatError(lineno, "fingerprint must be 16 hex chars")
        return cls(**obj)


@dataclass(frozen=True)
class KatResult:
    index: int
    passed: bool
    failed_field: str | None = None
    detail: str = ""


@dataclass(frozen=True)
class KatReport:
    results: tuple[KatResult, ...]

    @property
    def all_passed(self) -> bool:
        return all(r.passed for r in self.results)

    @property
    def failures(self) -> tuple[KatResult, ...]:
        return tuple(r for r in self.results if not r.passed)

    def summary(self) -> str:
        n = len(self.results)
        bad = len(self.failures)
        if bad == 0:
            return f"{n} records verified, all pass"
        lines = [f"{n} records verified, {bad} failed:"]
        for r in self.failures:
            lines.append(f"  record {r.index}: field {r.failed_field} ({r.detail})")
        return "\n".join(lines)


def make_record(
    root: bytes,
    passphrase: str,
    profile: str,
    context_text: str,
    registry: SlotRegistry | None = None,
    include_public: bool = True,
) -> KatRecord:
    """Derive one record end-to-end from its defining inputs."""
    params = params_for_profile(profile)
    state = derive_usage_state(
        RootEntropy(root), Passphrase.from_text(passphrase), params
    )
    descriptor = parse_context_text(context_text, registry)
    out = finalize(derive(state, descriptor, registry))
    public_hex = out.public.hex() if include_public and out.public is not None else None
    return KatRecord(
        root_hex=root.hex(),
        passphrase_utf8=passphrase,
        hardening_profile=profile,
        context_text_form=format_context_text(descriptor, registry),
        expected_state_fingerprint_hex=state.fingerprint_hex,
        expected_secret_hex=out.secret.hex(),
        expected_public_hex=public_hex,
    )


def kat_generate(suite: str, registry: SlotRegistry | None = None) -> list[KatRecord]:
    """Generate one of the committed suites, deterministically.

    The grids are fixed: adding slots to the registry must not change what
    these suites contain, so the slots suite iterates the builtin six.
    """
    profile = "test-vectors"
    records: list[KatRecord] = []
    if suite == "core":
        for root in (ZERO_ROOT_16, ZERO_ROOT_32, FIXED_ROOT_32):
            for passphrase in CORE_PASSPHRASES:
                for context_text in CORE_CONTEXTS:
                    records.append(
                        make_record(root, passphrase, profile, context_text, registry)
                    )
    elif suite == "slots":
        from .slots import BUILTIN_REGISTRY

        for slot in BUILTIN_REGISTRY.slots:
            context_text = f"mscikdf:v1/{slot.algorithm}/{slot.curve}//0"
            records.append(
                make_record(FIXED_ROOT_32, "pw", profile, context_text, registry)
            )
    elif suite == "rotation":
        for passphrase in ROTATION_PASSPHRASES:
            records.append(
                make_record(
                    FIXED_ROOT_32,
                    passphrase,
                    profile,
                    ROTATION_CONTEXT,
                    registry,
                    include_public=False,
                )
            )
    else:
        raise VectorFormatError(0, f"unknown suite {suite!r}, expected one of {SUITES}")
    return records


def kat_verify(records: list[KatRecord], registry: SlotRegistry | None = None) -> KatReport:
    """Re-derive every record and compare field by field.

    The record's own hardening profile is always honored; a mismatch
    surfaces as a fingerprint failure rather than a silent substitution.
    """
    results = []
    for i, record in enumerate(records):
        results.append(_verify_one(i, record, registry))
    return KatReport(tuple(results))


def _verify_one(index: int, record: KatRecord, registry: SlotRegistry | None) -> KatResult:
    try:
        params = params_for_profile(record.hardening_profile)
        root = RootEntropy(bytes.fromhex(record.root_hex))
        state = derive_usage_state(
            root, Passphrase.from_text(record.passphrase_utf8), params
        )
        if state.fingerprint_hex != record.expected_state_fingerprint_hex:
            return KatResult(index, False, "fingerprint", "state fingerprint differs")
        descriptor = parse_context_text(record.context_text_form, registry)
        out = finalize(derive(state, descriptor, registry))
        if out.secret.hex() != record.expected_secret_hex:
            return KatResult(index, False, "secret", "derived secret differs")
        if record.expected_public_hex is not None:
            public_hex = out.public.hex() if out.public is not None else None
            if public_hex != record.expected_public_hex:
                return KatResult(index, False, "public", "public key differs")
    except MscikdfError as exc:
        return KatResult(index, False, "pipeline", str(exc))
    return KatResult(index, True)


def write_vectors(path: str | Path, records: list[KatRecord]) -> None:
    """Write a suite file: one record per line, LF, trailing newline."""
    text = "".join(r.to_json_line() + "\n" for r in records)
    Path(path).write_bytes(text.encode("utf-8"))


def read_vectors(path: str | Path) -> list[KatRecord]:
    """Read a suite file; malformed lines are reported by number."""
    records = []
    for lineno, line in enumerate(Path(path).read_text("utf-8").splitlines(), start=1):
        if not line:
            raise VectorFormatError(lineno, "blank line")
        records.append(KatRecord.from_json_line(line, lineno))
    return records
