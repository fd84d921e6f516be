"""Statistical property harness: the security claims, made assertable.

Each test operationalizes one claim at desk scale and returns an
IsolationReport whose statistic is normalized so that pass means
statistic <= threshold:

  avalanche_test                 context isolation: perturbing one context
                                 dimension flips about half the output bits
  cross_curve_correlation_test   multi-curve unlinkability: per-slot streams
                                 carry no pairwise structure
  rotation_unlinkability_test    rotated usage states are independent and
                                 coexist (re-derivation is byte-stable)
  mnemonic_substitution_test     a substituted valid mnemonic never lands in
                                 the victim's state

All randomness is drawn from seeded generators fixed in HarnessConfig, so a
given configuration always measures the same samples and the suite cannot
flake. Deliberately broken engines are provided as fixtures; a harness that
cannot fail proves nothing, so run_negative_controls() must report failures.
"""

from __future__ import annotations

import json
import random
from dataclasses import dataclass, replace
from typing import Callable, Sequence

import numpy as np
from cryptography.hazmat.primitives.kdf.argon2 import Argon2id
from scipy.stats import chi2 as _chi2, norm as _norm

from .context import CTX_INFO_PREFIX, ContextDescriptor, derive, encode_context
from .errors import ParameterError
from .kdf import hkdf_expand, hkdf_extract
from .mnemonic import Mnemonic, RootEntropy, decode_mnemonic, encode_root
from .slots import BUILTIN_REGISTRY, SlotRegistry, SlotSpec
from .states import (
    EXTRACT_SALT,
    FINGERPRINT_INFO,
    PROFILE_TEST_VECTORS,
    HardeningParams,
    Passphrase,
    UsageState,
    derive_usage_state,
)

DIMENSIONS = ("version", "purpose", "index", "extension", "slot")

# Slots whose expand length is 32 bytes; avalanche statistics need one
# common bit width, and 256 bits is the width the thresholds assume.
_SLOTS_32 = tuple(s for s in BUILTIN_REGISTRY if s.expand_length == 32)

_UNIFORM_BYTE_VAR = (256.0**2 - 1) / 12  # variance of a uniform byte
_PREFIX_LIMIT = 4  # shared prefixes of this many bytes count as linkage

StateFn = Callable[[RootEntropy, Passphrase, HardeningParams], UsageState]
DeriveRawFn = Callable[[UsageState, ContextDescriptor, SlotSpec], bytes]


@dataclass(frozen=True)
class IsolationReport:
    """Outcome of one statistical test. passed is exactly
    statistic <= threshold; detail is for humans."""

    test_name: str
    samples: int
    statistic: float
    threshold: float
    passed: bool
    detail: str = ""

    def to_dict(self) -> dict:
        return {
            "test_name": self.test_name,
            "samples": self.samples,
            "statistic": self.statistic,
            "threshold": self.threshold,
            "pass": self.passed,
            "detail": self.detail,
        }


@dataclass(frozen=True)
class HarnessConfig:
    """Sample counts, significance level and RNG seeds for one suite run."""

    seed: int = 1009
    alpha: float = 0.01
    avalanche_samples: int = 500
    cross_curve_samples: int = 1000
    rotation_passphrases: int = 10
    rotation_samples: int = 100
    substitution_samples: int = 1000
    hardening: HardeningParams = PROFILE_TEST_VECTORS
    smoke: bool = False

    @classmethod
    def fast(cls) -> "HarnessConfig":
        """Reduced sample counts for smoke runs; results are labeled as
        smoke-level and should not be quoted as property evidence."""
        return cls(
            avalanche_samples=100,
            cross_curve_samples=100,
            rotation_passphrases=4,
            rotation_samples=40,
            substitution_samples=100,
            smoke=True,
        )


def _rng(config_seed: int, label: str) -> random.Random:
    return random.Random(f"{config_seed}/{label}")


def _default_state(params: HardeningParams) -> UsageState:
    return derive_usage_state(
        RootEntropy(bytes(32)), Passphrase.from_text("harness"), params
    )


def _registry_derive_raw(registry: SlotRegistry) -> DeriveRawFn:
    def raw(state: UsageState, c: ContextDescriptor, slot: SlotSpec) -> bytes:
        del slot  # derive looks the slot up from the descriptor itself
        return derive(state, c, registry).secret

    return raw


def _bit_matrix(rows: Sequence[bytes]) -> np.ndarray:
    """(n, bits) 0/1 matrix from equal-length byte strings."""
    return np.unpackbits(np.frombuffer(b"".join(rows), dtype=np.uint8)).reshape(
        len(rows), -1
    )


def _per_bit_chi2(flips: np.ndarray, n: int) -> np.ndarray:
    """Two-cell chi-square per bit position for flip counts out of n."""
    return 4.0 * (flips - n / 2.0) ** 2 / n


def _chi2_crit(alpha: float, comparisons: int) -> float:
    """Critical value at alpha with a Bonferroni split over comparisons."""
    return float(_chi2.ppf(1.0 - alpha / comparisons, df=1))


def _common_prefix_len(a: bytes, b: bytes) -> int:
    n = 0
    for x, y in zip(a, b):
        if x != y:
            break
        n += 1
    return n


def _random_descriptor(rng: random.Random, dimension: str) -> ContextDescriptor:
    slot = rng.choice(_SLOTS_32)
    purpose = "".join(rng.choice("abcdefghijklmnopqrstuvwxyz-") for _ in range(rng.randrange(13)))
    extensions: tuple[tuple[int, bytes], ...] = ()
    if dimension == "extension" or rng.random() < 0.3:
        extensions = ((rng.randrange(1, 2**16), rng.randbytes(4)),)
    return ContextDescriptor(
        algorithm_id=slot.algorithm_id,
        curve_id=slot.curve_id,
        purpose=purpose,
        index=rng.randrange(2**32),
        extensions=extensions,
    )


def _perturb_dimension(rng: random.Random, base: ContextDescriptor, dimension: str) -> ContextDescriptor:
    if dimension == "version":
        return base.replace(version=base.version + 1)
    if dimension == "purpose":
        return base.replace(purpose=base.purpose + rng.choice("abcdefghijklmnopqrstuvwxyz"))
    if dimension == "index":
        return base.replace(index=base.index ^ (1 << rng.randrange(32)))
    if dimension == "extension":
        tag, value = base.extensions[0]
        flipped = bytearray(value)
        flipped[rng.randrange(len(flipped))] ^= 1 << rng.randrange(8)
        return base.replace(extensions=((tag, bytes(flipped)),))
    if dimension == "slot":
        others = [
            s for s in _SLOTS_32
            if (s.algorithm_id, s.curve_id) != (base.algorithm_id, base.curve_id)
        ]
        slot = rng.choice(others)
        return base.replace(algorithm_id=slot.algorithm_id, curve_id=slot.curve_id)
    raise ParameterError(f"unknown context dimension {dimension!r}, expected one of {DIMENSIONS}")


def avalanche_test(
    dimension: str,
    samples: int,
    *,
    state: UsageState | None = None,
    alpha: float = 0.01,
    seed: int = HarnessConfig.seed,
    params: HardeningParams = PROFILE_TEST_VECTORS,
    perturb: Callable[[ContextDescriptor], ContextDescriptor] | None = None,
    derive_raw: DeriveRawFn | None = None,
) -> IsolationReport:
    """Perturb one context dimension and measure output bit flips.

    Pass iff the mean Hamming distance lies in [0.45, 0.55] of the output
    bit width and every bit position's flip rate passes a chi-square test
    at ``alpha`` with a Bonferroni split across the 256 positions.
    """
    if dimension not in DIMENSIONS:
        raise ParameterError(f"unknown context dimension {dimension!r}, expected one of {DIMENSIONS}")
    if samples < 100:
        raise ParameterError(f"avalanche needs at least 100 samples, got {samples}")
    if state is None:
        state = _default_state(params)
    if derive_raw is None:
        derive_raw = _registry_derive_raw(BUILTIN_REGISTRY)
    rng = _rng(seed, f"avalanche/{dimension}")

    xors = []
    for _ in range(samples):
        base = _random_descriptor(rng, dimension)
        perturbed = perturb(base) if perturb is not None else _perturb_dimension(rng, base, dimension)
        if perturbed == base:
            raise ParameterError("degenerate perturbation: perturbed context equals base")
        slot = BUILTIN_REGISTRY.lookup(base.algorithm_id, base.curve_id)
        a = derive_raw(state, base, slot)
        b = derive_raw(state, perturbed, BUILTIN_REGISTRY.lookup(perturbed.algorithm_id, perturbed.curve_id))
        xors.append(bytes(x ^ y for x, y in zip(a, b)))

    bits = _bit_matrix(xors)
    nbits = bits.shape[1]
    mean_fraction = float(bits.mean())
    flips = bits.sum(axis=0)
    worst_chi = float(_per_bit_chi2(flips, samples).max())
    crit = _chi2_crit(alpha, nbits)

    statistic = max(abs(mean_fraction - 0.5) / 0.05, worst_chi / crit)
    return IsolationReport(
        test_name=f"avalanche/{dimension}",
        samples=samples,
        statistic=round(statistic, 6),
        threshold=1.0,
        passed=statistic <= 1.0,
        detail=(
            f"mean flip fraction {mean_fraction:.4f} over {nbits} bits; "
            f"worst per-bit chi2 {worst_chi:.2f} vs critical {crit:.2f}"
        ),
    )


def cross_curve_correlation_test(
    samples: int,
    *,
    state: UsageState | None = None,
    registry: SlotRegistry | None = None,
    alpha: float = 0.01,
    seed: int = HarnessConfig.seed,
    params: HardeningParams = PROFILE_TEST_VECTORS,
    derive_raw: DeriveRawFn | None = None,
) -> IsolationReport:
    """Derive the same (state, purpose, index) across every slot pair.

    Pass iff no two slots share a >= 4-byte output prefix anywhere and each
    pair's XOR stream is bit-balanced under chi-square at ``alpha``
    (Bonferroni across pairs and bit positions).
    """
    if samples < 100:
        raise ParameterError(f"cross-curve needs at least 100 samples, got {samples}")
    if state is None:
        state = _default_state(params)
    reg = registry if registry is not None else BUILTIN_REGISTRY
    if derive_raw is None:
        derive_raw = _registry_derive_raw(reg)
    slots = tuple(reg)
    if len(slots) == 1:
        return IsolationReport(
            test_name="cross-curve-correlation",
            samples=0,
            statistic=0.0,
            threshold=1.0,
            passed=True,
            detail="not applicable: single slot registered",
        )
    rng = _rng(seed, "cross-curve")

    width = min(s.expand_length for s in slots)
    streams: dict[int, list[bytes]] = {i: [] for i in range(len(slots))}
    prefix_hits = 0
    for _ in range(samples):
        purpose = "".join(rng.choice("abcdefghijklmnopqrstuvwxyz") for _ in range(8))
        index = rng.randrange(2**32)
        outs = []
        for slot in slots:
            c = ContextDescriptor(
                algorithm_id=slot.algorithm_id,
                curve_id=slot.curve_id,
                purpose=purpose,
                index=index,
            )
            outs.append(derive_raw(state, c, slot)[:width])
        for i in range(len(slots)):
            for j in range(i + 1, len(slots)):
                if _common_prefix_len(outs[i], outs[j]) >= _PREFIX_LIMIT:
                    prefix_hits += 1
            streams[i].append(outs[i])

    pair_count = len(slots) * (len(slots) - 1) // 2
    nbits = width * 8
    crit = _chi2_crit(alpha, pair_count * nbits)
    worst_chi = 0.0
    mats = {i: _bit_matrix(streams[i]) for i in streams}
    for i in range(len(slots)):
        for j in range(i + 1, len(slots)):
            flips = np.bitwise_xor(mats[i], mats[j]).sum(axis=0)
            worst_chi = max(worst_chi, float(_per_bit_chi2(flips, samples).max()))

    statistic = max(worst_chi / crit, 2.0 if prefix_hits else 0.0)
    return IsolationReport(
        test_name="cross-curve-correlation",
        samples=samples,
        statistic=round(statistic, 6),
        threshold=1.0,
        passed=statistic <= 1.0,
        detail=(
            f"{pair_count} slot pairs; {prefix_hits} shared prefixes >= {_PREFIX_LIMIT} bytes; "
            f"worst pairwise chi2 {worst_chi:.2f} vs critical {crit:.2f}"
        ),
    )


def rotation_unlinkability_test(
    passphrase_count: int,
    samples: int,
    *,
    root: RootEntropy | None = None,
    alpha: float = 0.01,
    seed: int = HarnessConfig.seed,
    params: HardeningParams = PROFILE_TEST_VECTORS,
    state_fn: StateFn = derive_usage_state,
) -> IsolationReport:
    """Derive identical contexts under rotated usage states.

    Pass iff across all state pairs: fingerprints are distinct, no two
    states agree on any derived secret (or share a >= 4-byte prefix), XOR
    streams are bit-balanced, no byte position correlates (|rho| <= 0.1),
    and every state re-derives byte-identically after the others (states
    coexist; rotation alters nothing).
    """
    if passphrase_count < 2:
        raise ParameterError(f"rotation needs at least 2 passphrases, got {passphrase_count}")
    if root is None:
        root = RootEntropy(bytes(32))
    rng = _rng(seed, "rotation")

    passphrases = [f"rotation-{i}" for i in range(passphrase_count)]
    states = [state_fn(root, Passphrase.from_text(p), params) for p in passphrases]

    contexts = []
    for _ in range(samples):
        contexts.append(
            ContextDescriptor(
                algorithm_id=0x0001,
                curve_id=0x0001,
                purpose="".join(rng.choice("abcdefghijklmnopqrstuvwxyz") for _ in range(6)),
                index=rng.randrange(2**32),
            )
        )
    secrets = [[derive(s, c).secret for c in contexts] for s in states]

    # Coexistence: re-derive every state in shuffled order after all other
    # states have been derived; outputs must not move by a single byte.
    order = list(range(passphrase_count))
    rng.shuffle(order)
    stable = True
    for i in order:
        again = state_fn(root, Passphrase.from_text(passphrases[i]), params)
        if again.state_root != states[i].state_root:
            stable = False
        probe = rng.randrange(samples)
        if derive(again, contexts[probe]).secret != secrets[i][probe]:
            stable = False

    fingerprints = [s.fingerprint for s in states]
    distinct = len(set(fingerprints)) == passphrase_count

    pair_count = passphrase_count * (passphrase_count - 1) // 2
    nbits = 32 * 8
    crit = _chi2_crit(alpha, pair_count * nbits)
    worst_chi = 0.0
    prefix_hits = 0
    prod_sum = np.zeros(32)
    pooled = 0
    mats = [_bit_matrix(s) for s in secrets]
    arrays = [
        np.frombuffer(b"".join(s), dtype=np.uint8).reshape(samples, 32).astype(np.float64)
        for s in secrets
    ]
    for i in range(passphrase_count):
        for j in range(i + 1, passphrase_count):
            flips = np.bitwise_xor(mats[i], mats[j]).sum(axis=0)
            worst_chi = max(worst_chi, float(_per_bit_chi2(flips, samples).max()))
            for a, b in zip(secrets[i], secrets[j]):
                if _common_prefix_len(a, b) >= _PREFIX_LIMIT:
                    prefix_hits += 1
            prod_sum += ((arrays[i] - 127.5) * (arrays[j] - 127.5)).sum(axis=0)
            pooled += samples

    rho = prod_sum / (pooled * _UNIFORM_BYTE_VAR)
    worst_rho = float(np.abs(rho).max())
    # The correlation bound is 0.1, but the estimator itself has standard
    # error 1/sqrt(pooled); below that resolution the noise floor governs.
    noise_floor = float(_norm.ppf(1.0 - alpha / (2 * 32))) / pooled**0.5
    rho_limit = max(0.1, noise_floor)

    statistic = max(
        worst_chi / crit,
        worst_rho / rho_limit,
        2.0 if prefix_hits else 0.0,
        2.0 if not stable else 0.0,
        2.0 if not distinct else 0.0,
    )
    return IsolationReport(
        test_name="rotation-unlinkability",
        samples=passphrase_count * samples,
        statistic=round(statistic, 6),
        threshold=1.0,
        passed=statistic <= 1.0,
        detail=(
            f"{passphrase_count} states x {samples} contexts; re-derivation stable: {stable}; "
            f"fingerprints distinct: {distinct}; {prefix_hits} shared prefixes; "
            f"worst chi2 {worst_chi:.2f} vs {crit:.2f}; "
            f"worst byte |rho| {worst_rho:.4f} vs limit {rho_limit:.4f}"
        ),
    )


def mnemonic_substitution_test(
    samples: int = 1000,
    *,
    seed: int = HarnessConfig.seed,
    params: HardeningParams = PROFILE_TEST_VECTORS,
    state_fn: StateFn = derive_usage_state,
) -> IsolationReport:
    """Play the mnemonic-replacement game.

    An adversary swaps the victim's mnemonic for another syntactically
    valid one; with the victim's passphrase the substituted root must land
    in a different usage state every time (different fingerprint, different
    derived secrets). Pass iff zero collisions. Checksum-corrupted
    substitutes never even reach derivation; they count as detected.
    """
    rng = _rng(seed, "substitution")
    victim_root = RootEntropy(rng.randbytes(32))
    victim_pass = "victim-passphrase"
    victim_state = state_fn(victim_root, Passphrase.from_text(victim_pass), params)
    probe = ContextDescriptor(algorithm_id=0x0001, curve_id=0x0001, purpose="probe", index=7)
    victim_secret = derive(victim_state, probe).secret

    # Sanity inverse: substituting the original mnemonic back reproduces
    # the victim state exactly.
    same_root = decode_mnemonic(encode_root(victim_root))
    if state_fn(same_root, Passphrase.from_text(victim_pass), params).state_root != victim_state.state_root:
        raise ParameterError("sanity inverse failed: identical mnemonic gave a different state")

    collisions = 0
    detected_corruptions = 0
    for i in range(samples):
        substitute = encode_root(RootEntropy(rng.randbytes(32)))
        if i % 100 == 0:
            # Corrupt one non-checksum word; decode must reject it.
            words = list(substitute.words)
            pos = rng.randrange(len(words) - 1)
            words[pos] = "abandon" if words[pos] != "abandon" else "ability"
            try:
                decode_mnemonic(Mnemonic(tuple(words)))
            except Exception:
                detected_corruptions += 1
                continue
            # A lucky checksum survival (about 1 in 16 for 12 words) simply
            # proceeds as a normal substitute.
            substitute = Mnemonic(tuple(words))
        sub_state = state_fn(
            decode_mnemonic(substitute), Passphrase.from_text(victim_pass), params
        )
        if sub_state.fingerprint == victim_state.fingerprint:
            collisions += 1
        elif derive(sub_state, probe).secret == victim_secret:
            collisions += 1

    return IsolationReport(
        test_name="mnemonic-substitution",
        samples=samples,
        statistic=float(collisions),
        threshold=0.0,
        passed=collisions <= 0,
        detail=(
            f"{collisions} state collisions over {samples} substitutions; "
            f"{detected_corruptions} checksum corruptions detected at decode"
        ),
    )


# ------------------------------------------------------------------ fixtures
# Deliberately broken engines. These exist so the harness can demonstrate
# that its tests fail when the properties they measure are absent.

CONTROL_SHARED_CURVE_REGISTRY = SlotRegistry((
    SlotSpec(0x7001, 0x0042, "control-a", "signing-seed", 32, 32, "ctrl-a", "shared"),
    SlotSpec(0x7002, 0x0042, "control-b", "signing-seed", 32, 32, "ctrl-b", "shared"),
))


def broken_derive_missing_algorithm(
    state: UsageState, c: ContextDescriptor, slot: SlotSpec
) -> bytes:
    """Engine that forgets to bind algorithm_id into the info bytes.

    Two slots that differ only in algorithm_id then derive identical
    secrets; cross_curve_correlation_test must catch this.
    """
    full = encode_context(c, CONTROL_SHARED_CURVE_REGISTRY)
    # Strip the 2 algorithm_id bytes that follow the 1-byte version.
    info = CTX_INFO_PREFIX + full[:1] + full[3:]
    return hkdf_expand(state.prk, info, slot.expand_length)


def broken_usage_state_constant_salt(
    root: RootEntropy, passphrase: Passphrase, params: HardeningParams
) -> UsageState:
    """Engine that hardens the passphrase over a hardcoded salt and binds
    the root through nothing else.

    The per-root salt is this scheme's only stateless channel tying the
    hardening output to R in this variant; hardcoding it makes every root
    produce the same usage state for a given passphrase, which
    mnemonic_substitution_test must catch.
    """
    del root  # the bug under test: R no longer reaches the state
    tag = Argon2id(
        salt=b"0123456789abcdef",
        length=32,
        iterations=params.iterations,
        lanes=params.parallelism,
        memory_cost=params.memory_kib,
    ).derive(passphrase.data)
    state_root = hkdf_extract(EXTRACT_SALT, tag)
    fingerprint = hkdf_expand(state_root, FINGERPRINT_INFO, 8)
    return UsageState(state_root=state_root, prk=state_root, fingerprint=fingerprint)


# -------------------------------------------------------------------- runner

def run_suite(config: HarnessConfig | None = None) -> list[IsolationReport]:
    """Run every property test with a Bonferroni split across the suite."""
    cfg = config if config is not None else HarnessConfig()
    tests = len(DIMENSIONS) + 3
    alpha_each = cfg.alpha / tests
    state = _default_state(cfg.hardening)
    reports = [
        avalanche_test(
            dim, cfg.avalanche_samples,
            state=state, alpha=alpha_each, seed=cfg.seed, params=cfg.hardening,
        )
        for dim in DIMENSIONS
    ]
    reports.append(
        cross_curve_correlation_test(
            cfg.cross_curve_samples,
            state=state, alpha=alpha_each, seed=cfg.seed, params=cfg.hardening,
        )
    )
    reports.append(
        rotation_unlinkability_test(
            cfg.rotation_passphrases, cfg.rotation_samples,
            alpha=alpha_each, seed=cfg.seed, params=cfg.hardening,
        )
    )
    reports.append(
        mnemonic_substitution_test(
            cfg.substitution_samples, seed=cfg.seed, params=cfg.hardening,
        )
    )
    if cfg.smoke:
        reports = [replace(r, detail=f"smoke-level sample counts; {r.detail}") for r in reports]
    return reports


def run_negative_controls(config: HarnessConfig | None = None) -> list[IsolationReport]:
    """Run the broken-engine fixtures. Every report here is expected to
    come back failed; a control that passes means the harness lost its
    sensitivity."""
    cfg = config if config is not None else HarnessConfig()
    missing_alg = cross_curve_correlation_test(
        max(100, cfg.cross_curve_samples // 5),
        registry=CONTROL_SHARED_CURVE_REGISTRY,
        derive_raw=broken_derive_missing_algorithm,
        alpha=cfg.alpha,
        seed=cfg.seed,
        params=cfg.hardening,
    )
    constant_salt = mnemonic_substitution_test(
        max(50, cfg.substitution_samples // 10),
        seed=cfg.seed,
        params=cfg.hardening,
        state_fn=broken_usage_state_constant_salt,
    )
    return [
        replace(missing_alg, test_name="negative-control/" + missing_alg.test_name),
        replace(constant_salt, test_name="negative-control/" + constant_salt.test_name),
    ]


def report_json(reports: Sequence[IsolationReport]) -> str:
    return json.dumps([r.to_dict() for r in reports], indent=2)


def report_table(reports: Sequence[IsolationReport]) -> str:
    name_w = max(len(r.test_name) for r in reports)
    lines = [f"{'test':<{name_w}}  {'samples':>8}  {'statistic':>10}  {'threshold':>9}  result"]
    for r in reports:
        verdict = "pass" if r.passed else "FAIL"
        lines.append(
            f"{r.test_name:<{name_w}}  {r.samples:>8}  {r.statistic:>10.4f}  "
            f"{r.threshold:>9.2f}  {verdict}"
        )
    return "\n".join(lines)
