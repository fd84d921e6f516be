"""Exception types raised across the derivation pipeline."""

from __future__ import annotations


class MscikdfError(Exception):
    """Base class for every error this package raises on purpose."""


class MnemonicError(MscikdfError):
    """Malformed mnemonic: wrong word count or bad separator bytes."""


class UnknownWordError(MnemonicError):
    """A word is not in the 2048-word list.

    ``position`` is 1-based so the message matches what a person counts.
    """

    def __init__(self, position: int, word: str) -> None:
        self.position = position
        self.word = word
        super().__init__(f"word {position} ({word!r}) is not in the wordlist")


class ChecksumMismatchError(MnemonicError):
    """Checksum bits do not match the entropy they claim to protect."""


class RootLengthError(MscikdfError):
    """Root entropy must be exactly 16 or 32 bytes."""


class ParameterError(MscikdfError):
    """A parameter is outside its permitted range (hardening floor,
    passphrase length, statistical-test preconditions)."""


class ContextEncodingError(MscikdfError):
    """Context descriptor cannot be canonically encoded."""


class UnregisteredSlotError(MscikdfError):
    """No registered slot matches the requested identifiers or tokens."""


class SlotMismatchError(MscikdfError):
    """Finalizer applied to material derived for a different slot."""


class DerivationError(MscikdfError):
    """Derivation pipeline failure (e.g. rejection-sampling retries exhausted)."""


class BatchDerivationError(DerivationError):
    """A batch derivation aborted; ``index`` names the offending context."""

    def __init__(self, index: int, cause: MscikdfError) -> None:
        self.index = index
        self.cause = cause
        super().__init__(f"context at index {index}: {cause}")


class VectorFormatError(MscikdfError):
    """A test-vector line is malformed; ``line`` is the 1-based line number."""

    def __init__(self, line: int, reason: str) -> None:
        self.line = line
        self.reason = reason
        super().__init__(f"line {line}: {reason}")
