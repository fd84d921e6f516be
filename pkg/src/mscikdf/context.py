"""Context descriptors, their canonical encoding and per-context derivation.

F(state, context) expands the usage-state PRK with an info string built from
the canonical context encoding. Two contexts that differ anywhere, in any
field, produce independent info strings and therefore unrelated secrets.
The encoding is injective: every field is either fixed-width or length
prefixed, so no two distinct descriptors can collide.

Canonical encoding (all integers big-endian):

    version      1 byte
    algorithm_id 2 bytes
    curve_id     2 bytes
    purpose      2-byte length || UTF-8 bytes (max 256)
    index        4 bytes
    extensions   2-byte count || per extension: 2-byte tag || 2-byte length || value

Extension tags must be strictly increasing, which forces one canonical order.

Text form, round-trippable and safe to put in shell history (contexts are
public coordinates, not secrets):

    mscikdf:v1/<algorithm>/<curve>/<purpose>/<index>[?tttt=hexvalue&...]

Purpose is percent-encoded; extension tags are 4 hex digits.
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field
from typing import TYPE_CHECKING, Callable, Iterable, Sequence
from urllib.parse import quote, unquote

from .errors import (
    BatchDerivationError,
    ContextEncodingError,
    DerivationError,
    MscikdfError,
    UnregisteredSlotError,
)
from .kdf import hkdf_expand

if TYPE_CHECKING:
    from .slots import SlotRegistry, SlotSpec
    from .states import UsageState

CTX_INFO_PREFIX = b"MSCIKDF/v1/ctx"

MAX_PURPOSE_BYTES = 256
MAX_INDEX = 2**32 - 1
MAX_TAG = 2**16 - 1
MAX_EXT_VALUE = 1024


@dataclass(frozen=True)
class ContextDescriptor:
    """Public coordinates of one derived secret."""

    algorithm_id: int
    curve_id: int
    purpose: str = ""
    index: int = 0
    extensions: tuple[tuple[int, bytes], ...] = ()
    version: int = 1

    def __post_init__(self) -> None:
        object.__setattr__(
            self, "extensions", tuple((t, bytes(v)) for t, v in self.extensions)
        )

    def replace(self, **changes) -> "ContextDescriptor":
        from dataclasses import replace as _replace

        return _replace(self, **changes)


def encode_context(c: ContextDescriptor, registry: "SlotRegistry | None" = None) -> bytes:
    """Canonical, injective byte encoding of a descriptor.

    The (algorithm_id, curve_id) pair must name a registered slot; pass the
    registry the descriptor was built against when it is not the builtin one.
    """
    _resolve_registry(registry).lookup(c.algorithm_id, c.curve_id)
    if not 1 <= c.version <= 255:
        raise ContextEncodingError(f"version {c.version} outside 1..255")
    if not 0 <= c.algorithm_id <= 0xFFFF:
        raise ContextEncodingError(f"algorithm_id {c.algorithm_id} outside uint16")
    if not 0 <= c.curve_id <= 0xFFFF:
        raise ContextEncodingError(f"curve_id {c.curve_id} outside uint16")
    purpose = c.purpose.encode("utf-8")
    if len(purpose) > MAX_PURPOSE_BYTES:
        raise ContextEncodingError(
            f"purpose is {len(purpose)} UTF-8 bytes, limit is {MAX_PURPOSE_BYTES}"
        )
    if not 0 <= c.index <= MAX_INDEX:
        raise ContextEncodingError(f"index {c.index} outside uint32")
    out = bytearray()
    out.append(c.version)
    out += c.algorithm_id.to_bytes(2, "big")
    out += c.curve_id.to_bytes(2, "big")
    out += len(purpose).to_bytes(2, "big")
    out += purpose
    out += c.index.to_bytes(4, "big")
    out += len(c.extensions).to_bytes(2, "big")
    prev_tag = -1
    for tag, value in c.extensions:
        if not 0 <= tag <= MAX_TAG:
            raise ContextEncodingError(f"extension tag {tag} outside uint16")
        if tag <= prev_tag:
            raise ContextEncodingError(
                f"extension tags must be strictly increasing, {tag} after {prev_tag}"
            )
        if len(value) > MAX_EXT_VALUE:
            raise ContextEncodingError(f"extension value for tag {tag} too long")
        out += tag.to_bytes(2, "big")
        out += len(value).to_bytes(2, "big")
        out += value
        prev_tag = tag
    return bytes(out)


_TEXT_RE = re.compile(
    r"^mscikdf:v(?P<version>\d+)"
    r"/(?P<algorithm>[^/?]*)"
    r"/(?P<curve>[^/?]*)"
    r"/(?P<purpose>[^/?]*)"
    r"/(?P<index>\d+)"
    r"(?:\?(?P<exts>.*))?$"
)


def format_context_text(c: ContextDescriptor, registry: "SlotRegistry | None" = None) -> str:
    """Render the text form; the registry supplies the name tokens."""
    reg = _resolve_registry(registry)
    slot = reg.lookup(c.algorithm_id, c.curve_id)
    parts = (
        f"mscikdf:v{c.version}/{slot.algorithm}/{slot.curve}"
        f"/{quote(c.purpose, safe='')}/{c.index}"
    )
    if c.extensions:
        encode_context(c, reg)  # reuse the canonical validation (tag order, sizes)
        exts = "&".join(f"{tag:04x}={value.hex()}" for tag, value in c.extensions)
        parts += f"?{exts}"
    return parts


def parse_context_text(text: str, registry: "SlotRegistry | None" = None) -> ContextDescriptor:
    """Parse the text form back into a descriptor. Strict: one valid text
    form per descriptor, anything else is rejected."""
    reg = _resolve_registry(registry)
    m = _TEXT_RE.match(text)
    if m is None:
        raise ContextEncodingError(f"malformed context text {text!r}")
    version = int(m["version"])
    slot = reg.lookup_tokens(m["algorithm"], m["curve"])
    purpose_raw = m["purpose"]
    if "/" in unquote(purpose_raw) and "%2F" not in purpose_raw.upper():
        raise ContextEncodingError("purpose separators must be percent-encoded")
    purpose = unquote(purpose_raw)
    index = int(m["index"])
    extensions: list[tuple[int, bytes]] = []
    if m["exts"] is not None:
        if m["exts"] == "":
            raise ContextEncodingError("empty extension block")
        for item in m["exts"].split("&"):
            tag_s, sep, value_s = item.partition("=")
            if not sep or not re.fullmatch(r"[0-9a-f]{4}", tag_s):
                raise ContextEncodingError(f"malformed extension {item!r}")
            if not re.fullmatch(r"(?:[0-9a-f]{2})*", value_s):
                raise ContextEncodingError(f"extension value must be lowercase hex: {item!r}")
            extensions.append((int(tag_s, 16), bytes.fromhex(value_s)))
    c = ContextDescriptor(
        algorithm_id=slot.algorithm_id,
        curve_id=slot.curve_id,
        purpose=purpose,
        index=index,
        extensions=tuple(extensions),
        version=version,
    )
    encode_context(c, reg)  # validates tag order and field ranges
    return c


class DerivedMaterial:
    """Raw per-context secret plus the coordinates it came from.

    The secret is pre-finalization output of the expand step. Finalizers may
    need to re-expand with a retry counter (rejection sampling); they do so
    through :meth:`reexpand`, which keeps the PRK out of this object.
    """

    def __init__(
        self,
        context: ContextDescriptor,
        slot: "SlotSpec",
        secret: bytes,
        reexpand: Callable[[int], bytes],
    ) -> None:
        self.context = context
        self.slot = slot
        self._secret = bytearray(secret)
        self._reexpand = reexpand
        self._wiped = False

    @property
    def secret(self) -> bytes:
        if self._wiped:
            raise DerivationError("derived material has been wiped")
        return bytes(self._secret)

    @property
    def slot_kind(self) -> str:
        return self.slot.kind

    def reexpand(self, counter: int) -> bytes:
        """Re-run the expand with a one-byte retry counter appended to info."""
        if not 1 <= counter <= 255:
            raise DerivationError(f"retry counter {counter} outside 1..255")
        return self._reexpand(counter)

    def wipe(self) -> None:
        """Best-effort zeroization of the secret buffer."""
        for i in range(len(self._secret)):
            self._secret[i] = 0
        self._wiped = True

    def __repr__(self) -> str:  # never show the secret
        return (
            f"DerivedMaterial(slot={self.slot.name}, "
            f"purpose={self.context.purpose!r}, index={self.context.index})"
        )


def _resolve_registry(registry: "SlotRegistry | None") -> "SlotRegistry":
    if registry is not None:
        return registry
    from .slots import BUILTIN_REGISTRY

    return BUILTIN_REGISTRY


def derive(
    state: "UsageState",
    context: ContextDescriptor,
    registry: "SlotRegistry | None" = None,
) -> DerivedMaterial:
    """F(state, context): one raw secret of the slot's expand length.

    Refuses unregistered (algorithm_id, curve_id) pairs; nothing is derived
    for a context the registry cannot name.
    """
    reg = _resolve_registry(registry)
    slot = reg.lookup(context.algorithm_id, context.curve_id)
    info = CTX_INFO_PREFIX + encode_context(context, reg)
    prk = state.prk

    def reexpand(counter: int, _info: bytes = info, _prk: bytes = prk) -> bytes:
        return hkdf_expand(_prk, _info + bytes([counter]), slot.expand_length)

    raw = hkdf_expand(prk, info, slot.expand_length)
    return DerivedMaterial(context=context, slot=slot, secret=raw, reexpand=reexpand)


def derive_batch(
    state: "UsageState",
    contexts: Sequence[ContextDescriptor],
    registry: "SlotRegistry | None" = None,
) -> list[DerivedMaterial]:
    """Derive many contexts at once; validates every context before deriving
    any, so a bad entry aborts the whole batch with its position."""
    reg = _resolve_registry(registry)
    for i, c in enumerate(contexts):
        try:
            reg.lookup(c.algorithm_id, c.curve_id)
            encode_context(c, reg)
        except MscikdfError as exc:
            raise BatchDerivationError(i, exc) from exc
    return [derive(state, c, reg) for c in contexts]
