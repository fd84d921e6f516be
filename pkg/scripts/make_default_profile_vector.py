#!/usr/bin/env python3
"""Regenerate vectors/default-profile-v1.jsonl.

One record on the production hardening profile (64 MiB, 3 iterations).
Kept out of the normal suites so that routine verification stays fast;
regenerating takes a few seconds of Argon2id work.
"""

import pathlib
import sys

sys.path.insert(0, str(pathlib.Path(__file__).resolve().parents[1] / "src"))

from mscikdf.kat import make_record, write_vectors

OUT = pathlib.Path(__file__).resolve().parents[1] / "vectors" / "default-profile-v1.jsonl"


def main() -> None:
    record = make_record(
        root=bytes(32),
        passphrase="",
        profile="default",
        context_text="mscikdf:v1/ed25519/edwards25519//0",
    )
    write_vectors(OUT, [record])
    print(f"wrote 1 record to {OUT}")
    print(f"  fingerprint {record.expected_state_fingerprint_hex}")


if __name__ == "__main__":
    main()
