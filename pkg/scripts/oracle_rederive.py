#!/usr/bin/env python3
"""Re-derive committed test vectors with independent oracle implementations.

This script never imports the mscikdf package. It rebuilds every record in
vectors/*.jsonl from scratch using the test-suite oracles (pure-Python
RFC 9106 Argon2, pure-Python curve arithmetic) plus the OpenSSL-independent
HKDF pieces from `cryptography`, and compares the results field by field.

Run from the repo root:

    python3 scripts/oracle_rederive.py            # verify all suites
    python3 scripts/oracle_rederive.py --chain    # print the frozen-constant chain
    python3 scripts/oracle_rederive.py --default-profile   # slow (minutes)

Exit status 0 when every record matches, 1 otherwise.
"""

from __future__ import annotations

import argparse
import hashlib
import json
import sys
import time
from pathlib import Path

REPO = Path(__file__).resolve().parent.parent
sys.path.insert(0, str(REPO / "tests"))

from argon2_oracle import argon2  # noqa: E402
from curve_oracle import (  # noqa: E402
    ed25519_public_key,
    secp256k1_public_key,
    x25519_base,
)

from cryptography.hazmat.primitives import hashes, hmac  # noqa: E402
from cryptography.hazmat.primitives.kdf.hkdf import HKDFExpand  # noqa: E402

SECP256K1_N = 0xFFFFFFFFFFFFFFFFFFFFFFFFFFFFFFFEBAAEDCE6AF48A03BBFD25E8CD0364141
BLS12_381_R = 0x73EDA753299D7D483339D80809A1D80553BDA402FFFE5BFEFFFFFFFF00000001

PROFILES = {"test-vectors": (8 * 1024, 1, 1), "default": (64 * 1024, 3, 1)}

# Slot table: text tokens -> (algorithm_id, curve_id, expand_length, family)
SLOTS = {
    ("ed25519", "edwards25519"): (0x0001, 0x0001, 32, "ed25519"),
    ("x25519", "curve25519"): (0x0002, 0x0002, 32, "x25519"),
    ("secp256k1", "secp256k1"): (0x0003, 0x0003, 32, "secp256k1"),
    ("bls", "bls12-381"): (0x0004, 0x0004, 64, "bls"),
    ("ml-kem-768", "ml-kem-768"): (0x0010, 0x0010, 64, "seed"),
    ("ml-dsa-65", "ml-dsa-65"): (0x0011, 0x0011, 32, "seed"),
}


def hkdf_expand(prk: bytes, info: bytes, length: int) -> bytes:
    return HKDFExpand(algorithm=hashes.SHA512(), length=length, info=info).derive(prk)


def hmac_sha512(key: bytes, msg: bytes) -> bytes:
    mac = hmac.HMAC(key, hashes.SHA512())
    mac.update(msg)
    return mac.finalize()


_argon_cache: dict[tuple, bytes] = {}


def usage_state(root: bytes, passphrase: bytes, profile: str) -> tuple[bytes, bytes]:
    """(state_root, fingerprint) via the oracle chain."""
    memory_kib, iters, lanes = PROFILES[profile]
    key = (root, passphrase, profile)
    if key not in _argon_cache:
        salt = hashlib.sha256(b"MSCIKDF/v1/pw-salt" + root).digest()[:16]
        _argon_cache[key] = argon2(
            passphrase, salt, time_cost=iters, memory_kib=memory_kib,
            lanes=lanes, tag_length=32, variant="id",
        )
    tag = _argon_cache[key]
    state_root = hmac_sha512(b"MSCIKDF/v1/extract", root + tag)
    fingerprint = hkdf_expand(state_root, b"MSCIKDF/v1/fingerprint", 8)
    return state_root, fingerprint


def encode_context(algorithm_id: int, curve_id: int, purpose: bytes, index: int) -> bytes:
    return (
        bytes([1])
        + algorithm_id.to_bytes(2, "big")
        + curve_id.to_bytes(2, "big")
        + len(purpose).to_bytes(2, "big")
        + purpose
        + index.to_bytes(4, "big")
        + b"\x00\x00"
    )


def parse_context_text(text: str) -> tuple[int, int, int, str, bytes, int]:
    assert text.startswith("mscikdf:v1/"), text
    algorithm, curve, purpose, index = text[len("mscikdf:v1/") :].split("/")
    assert "%" not in purpose, "oracle script only handles unencoded purposes"
    algorithm_id, curve_id, expand_length, family = SLOTS[(algorithm, curve)]
    return algorithm_id, curve_id, expand_length, family, purpose.encode(), int(index)


def derive_record(record: dict) -> dict:
    """Recompute the expected_ fields of one record, oracle-only."""
    root = bytes.fromhex(record["root_hex"])
    passphrase = record["passphrase_utf8"].encode("utf-8")
    state_root, fingerprint = usage_state(root, passphrase, record["hardening_profile"])
    algorithm_id, curve_id, expand_length, family, purpose, index = parse_context_text(
        record["context_text_form"]
    )
    info = b"MSCIKDF/v1/ctx" + encode_context(algorithm_id, curve_id, purpose, index)
    raw = hkdf_expand(state_root, info, expand_length)

    public: bytes | None = None
    if family == "ed25519":
        secret = raw
        public = ed25519_public_key(secret)
    elif family == "x25519":
        clamped = bytearray(raw)
        clamped[0] &= 248
        clamped[31] &= 127
        clamped[31] |= 64
        secret = bytes(clamped)
        public = x25519_base(secret)
    elif family == "secp256k1":
        value = int.from_bytes(raw, "big")
        counter = 0
        while value == 0 or value >= SECP256K1_N:
            counter += 1
            value = int.from_bytes(
                hkdf_expand(state_root, info + bytes([counter]), 32), "big"
            )
        secret = value.to_bytes(32, "big")
        public = secp256k1_public_key(value)
    elif family == "bls":
        value = int.from_bytes(raw, "big") % BLS12_381_R
        counter = 0
        while value == 0:
            counter += 1
            value = int.from_bytes(
                hkdf_expand(state_root, info + bytes([counter]), 64), "big"
            ) % BLS12_381_R
        secret = value.to_bytes(32, "big")
    else:
        secret = raw

    out = {
        "expected_state_fingerprint_hex": fingerprint.hex(),
        "expected_secret_hex": secret.hex(),
    }
    if "expected_public_hex" in record and public is not None:
        out["expected_public_hex"] = public.hex()
    return out


def verify_file(path: Path) -> int:
    failures = 0
    for lineno, line in enumerate(path.read_text().splitlines(), start=1):
        record = json.loads(line)
        t0 = time.time()
        rederived = derive_record(record)
        for field, value in rederived.items():
            if record.get(field) != value:
                print(f"  MISMATCH {path.name}:{lineno} {field}: "
                      f"committed {record.get(field)} oracle {value}")
                failures += 1
                break
        else:
            print(f"  ok {path.name}:{lineno} ({record['context_text_form']}) "
                  f"[{time.time()-t0:.1f}s]")
    return failures


def print_chain() -> None:
    root = bytes(32)
    state_root, fingerprint = usage_state(root, b"", "test-vectors")
    print(f"state_root   = {state_root.hex()}")
    print(f"fingerprint  = {fingerprint.hex()}")
    for text in ("mscikdf:v1/ed25519/edwards25519//0", "mscikdf:v1/x25519/curve25519//0"):
        rec = derive_record({
            "root_hex": root.hex(), "passphrase_utf8": "",
            "hardening_profile": "test-vectors", "context_text_form": text,
            "expected_public_hex": "",
        })
        print(f"{text}:")
        for k, v in rec.items():
            print(f"  {k} = {v}")


def main() -> int:
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--chain", action="store_true",
                        help="print the zero-root/empty-passphrase oracle chain")
    parser.add_argument("--default-profile", action="store_true",
                        help="also verify the slow default-profile vector")
    args = parser.parse_args()

    if args.chain:
        print_chain()
        return 0

    files = sorted((REPO / "vectors").glob("*-v1.jsonl"))
    if not args.default_profile:
        files = [f for f in files if "default-profile" not in f.name]
    failures = 0
    for path in files:
        print(f"{path.name}:")
        failures += verify_file(path)
    print("all records match the oracles" if failures == 0
          else f"{failures} records FAILED oracle verification")
    return 0 if failures == 0 else 1


if __name__ == "__main__":
    sys.exit(main())
