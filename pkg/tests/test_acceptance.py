"""Acceptance gate: the nine properties this package must hold, each as
one test printing one pass/fail line with its measured numbers."""

import random
import subprocess
import sys
import time
from pathlib import Path

import pytest

from mscikdf import (
    BUILTIN_REGISTRY,
    ContextDescriptor,
    Passphrase,
    RootEntropy,
    PROFILE_TEST_VECTORS,
    SlotSpec,
    derive,
    derive_usage_state,
    finalize,
    kat_generate,
    kat_verify,
    read_vectors,
)
from mscikdf.harness import (
    DIMENSIONS,
    avalanche_test,
    mnemonic_substitution_test,
    rotation_unlinkability_test,
    run_negative_controls,
)
from mscikdf.slots import (
    BLS12_381_R,
    ED25519,
    SECP256K1,
    X25519,
    bls_scalar,
    finalize_ed25519,
    finalize_secp256k1,
    finalize_x25519,
    secp256k1_scalar,
)
from mscikdf import secp256k1 as curve

from conftest import VECTOR_DIR
from test_slots import GENERATOR_COMPRESSED, RFC7748_KEYPAIRS, RFC8032_VECTORS, stub_material

WORKER = Path(__file__).resolve().parent / "determinism_worker.py"


def _line(criterion: int, name: str, detail: str) -> None:
    print(f"PASS criterion {criterion} ({name}): {detail}")


def test_criterion_1_kat_reproducibility():
    started = time.monotonic()
    total = 0
    for suite, filename in (
        ("core", "core-v1.jsonl"),
        ("slots", "slots-v1.jsonl"),
        ("rotation", "rotation-v1.jsonl"),
    ):
        committed = (VECTOR_DIR / filename).read_bytes()
        regenerated = "".join(r.to_json_line() + "\n" for r in kat_generate(suite)).encode()
        assert regenerated == committed, f"{filename} is not reproducible byte-for-byte"
        report = kat_verify(read_vectors(VECTOR_DIR / filename))
        assert report.all_passed, f"{filename}: {report.summary()}"
        total += len(committed.splitlines())
    elapsed = time.monotonic() - started
    assert elapsed < 30.0, f"verification took {elapsed:.1f}s, budget is 30s"
    _line(1, "kat reproducibility", f"{total} records byte-exact, verified in {elapsed:.2f}s")


def test_criterion_2_determinism_across_processes():
    runs = [
        subprocess.run(
            [sys.executable, str(WORKER), "90210", "1000"],
            capture_output=True, text=True, check=True,
        ).stdout.strip()
        for _ in range(2)
    ]
    assert runs[0] == runs[1], "same triples, different bytes across processes"
    _line(2, "determinism", f"1000 random triples, 2 processes, digest {runs[0][:16]}..")


def test_criterion_3_context_avalanche(kat_state):
    worst = 0.0
    for dimension in DIMENSIONS:
        report = avalanche_test(dimension, 500, state=kat_state, alpha=0.01)
        assert report.passed, f"{dimension}: {report.detail}"
        worst = max(worst, report.statistic)
    _line(3, "avalanche", f"{len(DIMENSIONS)} dimensions x 500 samples, worst statistic {worst:.3f} <= 1")


def test_criterion_4_multi_curve_validity(kat_state):
    checked = 0
    for i in range(10_000):
        c = ContextDescriptor(algorithm_id=0x0003, curve_id=0x0003, purpose="rng", index=i)
        value = secp256k1_scalar(derive(kat_state, c))
        assert 1 <= value < curve.N
        checked += 1
    for i in range(10_000):
        c = ContextDescriptor(algorithm_id=0x0004, curve_id=0x0004, purpose="rng", index=i)
        value = bls_scalar(derive(kat_state, c))
        assert 1 <= value < BLS12_381_R
        checked += 1
    for i in range(10_000):
        c = ContextDescriptor(algorithm_id=0x0002, curve_id=0x0002, purpose="rng", index=i)
        secret = finalize_x25519(derive(kat_state, c)).secret
        assert secret[0] & 0b111 == 0 and secret[31] & 0x80 == 0 and secret[31] & 0x40
        checked += 1
    for i in range(10_000):
        c = ContextDescriptor(algorithm_id=0x0010, curve_id=0x0010, purpose="rng", index=i)
        assert len(derive(kat_state, c).secret) == 64
        c = ContextDescriptor(algorithm_id=0x0011, curve_id=0x0011, purpose="rng", index=i)
        assert len(derive(kat_state, c).secret) == 32
        checked += 2
    _line(4, "multi-curve validity", f"{checked} derivations, zero range or length violations")


def test_criterion_5_standards_conformance():
    for seed_hex, public_hex in RFC8032_VECTORS:
        m, _ = stub_material(ED25519, bytes.fromhex(seed_hex))
        assert finalize_ed25519(m).public.hex() == public_hex
    for private_hex, public_hex in RFC7748_KEYPAIRS:
        m, _ = stub_material(X25519, bytes.fromhex(private_hex))
        assert finalize_x25519(m).public.hex() == public_hex
    m, _ = stub_material(SECP256K1, (1).to_bytes(32, "big"))
    assert finalize_secp256k1(m).public.hex() == GENERATOR_COMPRESSED
    _line(5, "standards conformance", "3 RFC 8032 + 2 RFC 7748 vectors exact, scalar 1 -> generator")


def test_criterion_6_rotation_semantics(fingerprint_pool):
    root = RootEntropy(bytes(32))
    passphrases = [f"criterion6-{i}" for i in range(10)]
    first = {
        p: derive_usage_state(root, Passphrase.from_text(p), PROFILE_TEST_VECTORS)
        for p in passphrases
    }
    rng = random.Random(906)
    order = passphrases[:]
    rng.shuffle(order)
    for p in order:
        again = derive_usage_state(root, Passphrase.from_text(p), PROFILE_TEST_VECTORS)
        assert again.state_root == first[p].state_root, "re-derivation moved bytes"

    pairs = 0
    n = len(fingerprint_pool)
    for _ in range(10_000):
        i, j = rng.randrange(n), rng.randrange(n)
        if i == j:
            continue
        assert fingerprint_pool[i] != fingerprint_pool[j]
        pairs += 1
    assert pairs >= 9_900

    report = rotation_unlinkability_test(10, 100, alpha=0.01)
    assert report.passed, report.detail
    _line(6, "rotation semantics",
          f"10 states interleave-stable, {pairs} fingerprint pairs distinct, "
          f"unlinkability statistic {report.statistic:.3f} <= 1")


def test_criterion_7_mnemonic_substitution():
    report = mnemonic_substitution_test(1000)
    assert report.passed, report.detail
    assert report.statistic == 0.0
    _line(7, "mnemonic substitution", "1000 substituted mnemonics, zero state collisions")


def test_criterion_8_registry_extension_stability():
    extra = SlotSpec(0x0777, 0x0777, "acceptance-extra", "signing-seed", 32, 32, "acc", "extra")
    extended = BUILTIN_REGISTRY.with_slot(extra)
    for suite, filename in (
        ("core", "core-v1.jsonl"),
        ("slots", "slots-v1.jsonl"),
        ("rotation", "rotation-v1.jsonl"),
    ):
        regenerated = "".join(
            r.to_json_line() + "\n" for r in kat_generate(suite, registry=extended)
        ).encode()
        assert regenerated == (VECTOR_DIR / filename).read_bytes(), (
            f"{filename} changed after registering a new slot"
        )
    _line(8, "registry extension", "new slot registered, all 27 committed records byte-identical")


def test_criterion_9_negative_controls():
    reports = run_negative_controls()
    assert len(reports) == 2
    for report in reports:
        assert not report.passed, f"{report.test_name} failed to fail: {report.detail}"
    _line(9, "negative controls",
          "broken encoder and constant-salt engine both caught by the harness")
