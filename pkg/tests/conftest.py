import sys
from pathlib import Path

import pytest

sys.path.insert(0, str(Path(__file__).resolve().parent))

from mscikdf import (
    PROFILE_TEST_VECTORS,
    Passphrase,
    RootEntropy,
    derive_usage_state,
)

VECTOR_DIR = Path(__file__).resolve().parents[1] / "vectors"


@pytest.fixture(scope="session")
def kat_state():
    """The all-zero 32-byte root with an empty passphrase on the
    test-vectors profile: the anchor state every frozen constant uses."""
    return derive_usage_state(
        RootEntropy(bytes(32)), Passphrase.from_text(""), PROFILE_TEST_VECTORS
    )


@pytest.fixture(scope="session")
def rotation_states():
    """21 usage states over one root, passphrases rot-0 .. rot-20."""
    root = RootEntropy(bytes(32))
    return [
        derive_usage_state(root, Passphrase.from_text(f"rot-{i}"), PROFILE_TEST_VECTORS)
        for i in range(21)
    ]


@pytest.fixture(scope="session")
def fingerprint_pool():
    """Fingerprints of 1500 rotated states over one root. Built once; the
    rotation distinctness checks sample pairs out of this pool."""
    root = RootEntropy(bytes(32))
    return [
        derive_usage_state(
            root, Passphrase.from_text(f"fp-{i}"), PROFILE_TEST_VECTORS
        ).fingerprint
        for i in range(1500)
    ]
