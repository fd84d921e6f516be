"""Mnemonic codec: 16 or 32 bytes of root entropy to 12 or 24 words and back.

The word encoding is the familiar checksummed 11-bit scheme (BIP-39 layout,
English list): entropy is followed by its SHA-256 checksum truncated to
ENT/32 bits, and the concatenation is split into 11-bit word indices. The
words are only a transport encoding for the root. They are deliberately not
fed through any seed-stretching step; hardening happens later, against the
passphrase, not the mnemonic.

Decoding is exact: case-sensitive words, single 0x20 separators, no
abbreviation matching.
"""

from __future__ import annotations

import hashlib
from dataclasses import dataclass
from importlib import resources

from .errors import ChecksumMismatchError, MnemonicError, RootLengthError, UnknownWordError

ROOT_LENGTHS = (16, 32)
WORD_COUNTS = (12, 24)
WORD_BITS = 11


def _load_wordlist() -> tuple[str, ...]:
    text = resources.files(__package__).joinpath("wordlist.txt").read_text("utf-8")
    words = tuple(text.splitlines())
    if len(words) != 2048:
        raise RuntimeError(f"wordlist.txt has {len(words)} entries, expected 2048")
    return words


WORDLIST: tuple[str, ...] = _load_wordlist()
_WORD_INDEX: dict[str, int] = {w: i for i, w in enumerate(WORDLIST)}


@dataclass(frozen=True)
class RootEntropy:
    """Root entropy R. Only 16-byte and 32-byte roots are constructible."""

    data: bytes

    def __post_init__(self) -> None:
        if not isinstance(self.data, bytes):
            object.__setattr__(self, "data", bytes(self.data))
        if len(self.data) not in ROOT_LENGTHS:
            raise RootLengthError(
                f"root entropy must be 16 or 32 bytes, got {len(self.data)}"
            )

    def __repr__(self) -> str:  # keep entropy out of logs and tracebacks
        return f"RootEntropy(<{len(self.data)} bytes>)"

    @property
    def bits(self) -> int:
        return len(self.data) * 8


@dataclass(frozen=True)
class Mnemonic:
    """An ordered tuple of 12 or 24 wordlist words.

    Construction validates word count and membership; checksum validity is
    checked by :func:`decode_mnemonic`, so a Mnemonic may hold a well-formed
    but mis-checksummed phrase (useful for negative tests).
    """

    words: tuple[str, ...]

    def __post_init__(self) -> None:
        object.__setattr__(self, "words", tuple(self.words))
        if len(self.words) not in WORD_COUNTS:
            raise MnemonicError(
                f"expected 12 or 24 words, got {len(self.words)}"
            )
        for pos, word in enumerate(self.words, start=1):
            if word not in _WORD_INDEX:
                raise UnknownWordError(pos, word)

    @classmethod
    def from_text(cls, text: str) -> "Mnemonic":
        """Parse the wire form: words joined by single 0x20 bytes.

        Rejects doubled separators and leading/trailing whitespace; callers
        that want to be forgiving should strip before calling.
        """
        if text != " ".join(text.split(" ")) or text.strip() != text:
            raise MnemonicError("words must be joined by single spaces")
        return cls(tuple(text.split(" ")))

    @property
    def text(self) -> str:
        return " ".join(self.words)

    def __repr__(self) -> str:  # the phrase encodes the root; mask it
        return f"Mnemonic(<{len(self.words)} words>)"


def _checksum_bits(entropy: bytes) -> int:
    """Top ENT/32 bits of SHA-256(entropy), as an int."""
    cs_len = len(entropy) * 8 // 32
    digest = hashlib.sha256(entropy).digest()
    return int.from_bytes(digest, "big") >> (256 - cs_len)


def encode_root(root: RootEntropy) -> Mnemonic:
    """Encode root entropy as a checksummed mnemonic. Deterministic."""
    ent_bits = root.bits
    cs_len = ent_bits // 32
    acc = (int.from_bytes(root.data, "big") << cs_len) | _checksum_bits(root.data)
    total = ent_bits + cs_len
    count = total // WORD_BITS
    indices = [(acc >> (total - WORD_BITS * (i + 1))) & 0x7FF for i in range(count)]
    return Mnemonic(tuple(WORDLIST[i] for i in indices))


def decode_mnemonic(mnemonic: Mnemonic) -> RootEntropy:
    """Decode a mnemonic back to its root, verifying the checksum."""
    count = len(mnemonic.words)
    total = count * WORD_BITS
    ent_bits = total * 32 // 33
    cs_len = total - ent_bits
    acc = 0
    for word in mnemonic.words:
        acc = (acc << WORD_BITS) | _WORD_INDEX[word]
    entropy = (acc >> cs_len).to_bytes(ent_bits // 8, "big")
    if acc & ((1 << cs_len) - 1) != _checksum_bits(entropy):
        raise ChecksumMismatchError("mnemonic checksum does not match entropy")
    return RootEntropy(entropy)
