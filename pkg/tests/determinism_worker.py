"""Subprocess worker: derive a seeded sequence of random (root, passphrase,
context) triples and print one digest over every derived byte.

Two runs of this script in different processes must print the same digest;
that is the whole point."""

import hashlib
import random
import string
import sys

from mscikdf import (
    PROFILE_TEST_VECTORS,
    ContextDescriptor,
    Passphrase,
    RootEntropy,
    derive,
    derive_usage_state,
    finalize,
    registry_builtin,
)


def run(seed: int, count: int) -> str:
    rng = random.Random(seed)
    slots = registry_builtin()
    digest = hashlib.sha256()
    for _ in range(count):
        root = RootEntropy(rng.randbytes(rng.choice((16, 32))))
        passphrase = "".join(rng.choice(string.printable) for _ in range(rng.randrange(12)))
        slot = rng.choice(slots)
        context = ContextDescriptor(
            algorithm_id=slot.algorithm_id,
            curve_id=slot.curve_id,
            purpose="".join(rng.choice(string.ascii_lowercase) for _ in range(rng.randrange(9))),
            index=rng.randrange(2**32),
        )
        state = derive_usage_state(root, Passphrase.from_text(passphrase), PROFILE_TEST_VECTORS)
        pair = finalize(derive(state, context))
        digest.update(state.fingerprint)
        digest.update(pair.secret)
        digest.update(pair.public or b"")
    return digest.hexdigest()


if __name__ == "__main__":
    print(run(int(sys.argv[1]), int(sys.argv[2])))
