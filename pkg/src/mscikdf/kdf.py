"""HKDF over SHA-512 (RFC 5869), extract and expand halves kept separate.

The two halves are used independently: extract binds root entropy to the
passphrase-hardening output, expand stretches a usage-state root into
per-context secrets. Nothing here is specific to any one curve.
"""

from __future__ import annotations

import hashlib
import hmac

HASH_LEN = 64  # SHA-512 output size
MAX_EXPAND = 255 * HASH_LEN


def hkdf_extract(salt: bytes, ikm: bytes) -> bytes:
    """RFC 5869 extract step: PRK = HMAC-SHA-512(salt, IKM)."""
    return hmac.new(salt, ikm, hashlib.sha512).digest()


def hkdf_expand(prk: bytes, info: bytes, length: int) -> bytes:
    """RFC 5869 expand step, output keyed by ``info``, up to 255 blocks."""
    if not 1 <= length <= MAX_EXPAND:
        raise ValueError(f"expand length {length} outside 1..{MAX_EXPAND}")
    okm = b""
    block = b""
    counter = 1
    while len(okm) < length:
        block = hmac.new(prk, block + info + bytes([counter]), hashlib.sha512).digest()
        okm += block
        counter += 1
    return okm[:length]
