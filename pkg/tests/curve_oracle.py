"""Independent pure-Python curve arithmetic, used only as test oracles.

Three tiny reference implementations, each structurally different from the
code paths the package uses, so agreement is meaningful:

  * ed25519_public_key: affine twisted-Edwards addition (the package uses
    the OpenSSL Ed25519 via `cryptography`)
  * x25519: the RFC 7748 Montgomery ladder (the package uses OpenSSL X25519)
  * secp256k1_public_key: Jacobian-coordinate double-and-add (the package
    uses affine arithmetic with modular inversions)

Each is pinned to published RFC / SEC test values in the test suite before
anything else relies on it.
"""

from __future__ import annotations

import hashlib

# ---------------------------------------------------------------- ed25519
# Curve: -x^2 + y^2 = 1 + d x^2 y^2 over GF(2^255 - 19), RFC 8032.
_ED_P = 2**255 - 19
_ED_D = (-121665 * pow(121666, -1, _ED_P)) % _ED_P
_ED_BASE = (
    15112221349535400772501151409588531511454012693041857206046113283949847762202,
    46316835694926478169428394003475163141307993866256225615783033603165251855960,
)


def _ed_add(a: tuple[int, int], b: tuple[int, int]) -> tuple[int, int]:
    # Complete affine addition law; also doubles.
    x1, y1 = a
    x2, y2 = b
    prod = _ED_D * x1 * x2 * y1 * y2 % _ED_P
    x3 = (x1 * y2 + x2 * y1) * pow(1 + prod, -1, _ED_P) % _ED_P
    y3 = (y1 * y2 + x1 * x2) * pow(1 - prod, -1, _ED_P) % _ED_P
    return x3, y3


def _ed_mul(scalar: int, point: tuple[int, int]) -> tuple[int, int]:
    result = (0, 1)  # neutral element
    addend = point
    while scalar:
        if scalar & 1:
            result = _ed_add(result, addend)
        addend = _ed_add(addend, addend)
        scalar >>= 1
    return result


def ed25519_public_key(seed: bytes) -> bytes:
    """RFC 8032 section 5.1.5 public key generation."""
    assert len(seed) == 32
    h = hashlib.sha512(seed).digest()
    a = bytearray(h[:32])
    a[0] &= 248
    a[31] &= 63
    a[31] |= 64
    scalar = int.from_bytes(a, "little")
    x, y = _ed_mul(scalar, _ED_BASE)
    return (y | ((x & 1) << 255)).to_bytes(32, "little")


# ----------------------------------------------------------------- x25519
_MT_P = 2**255 - 19
_MT_A24 = 121665


def x25519(scalar: bytes, u: bytes) -> bytes:
    """RFC 7748 section 5 Montgomery ladder."""
    assert len(scalar) == 32 and len(u) == 32
    k_bytes = bytearray(scalar)
    k_bytes[0] &= 248
    k_bytes[31] &= 127
    k_bytes[31] |= 64
    k = int.from_bytes(k_bytes, "little")
    x1 = int.from_bytes(u, "little") & ((1 << 255) - 1)
    x2, z2, x3, z3 = 1, 0, x1, 1
    swap = 0
    for t in range(254, -1, -1):
        k_t = (k >> t) & 1
        swap ^= k_t
        if swap:
            x2, x3 = x3, x2
            z2, z3 = z3, z2
        swap = k_t
        a = (x2 + z2) % _MT_P
        aa = a * a % _MT_P
        b = (x2 - z2) % _MT_P
        bb = b * b % _MT_P
        e = (aa - bb) % _MT_P
        c = (x3 + z3) % _MT_P
        d = (x3 - z3) % _MT_P
        da = d * a % _MT_P
        cb = c * b % _MT_P
        x3 = (da + cb) % _MT_P
        x3 = x3 * x3 % _MT_P
        z3 = (da - cb) % _MT_P
        z3 = x1 * z3 * z3 % _MT_P
        x2 = aa * bb % _MT_P
        z2 = e * (aa + _MT_A24 * e) % _MT_P
    if swap:
        x2, x3 = x3, x2
        z2, z3 = z3, z2
    return (x2 * pow(z2, _MT_P - 2, _MT_P) % _MT_P).to_bytes(32, "little")


def x25519_base(scalar: bytes) -> bytes:
    return x25519(scalar, (9).to_bytes(32, "little"))


# -------------------------------------------------------------- secp256k1
_K_P = 0xFFFFFFFFFFFFFFFFFFFFFFFFFFFFFFFFFFFFFFFFFFFFFFFFFFFFFFFEFFFFFC2F
_K_N = 0xFFFFFFFFFFFFFFFFFFFFFFFFFFFFFFFEBAAEDCE6AF48A03BBFD25E8CD0364141
_K_G = (
    0x79BE667EF9DCBBAC55A06295CE870B07029BFCDB2DCE28D959F2815B16F81798,
    0x483ADA7726A3C4655DA4FBFC0E1108A8FD17B448A68554199C47D08FFB10D4B8,
)


def _jac_double(p):
    x, y, z = p
    if y == 0:
        return (0, 0, 0)
    s = 4 * x * y * y % _K_P
    m = 3 * x * x % _K_P  # a = 0 for secp256k1
    x2 = (m * m - 2 * s) % _K_P
    y2 = (m * (s - x2) - 8 * pow(y, 4, _K_P)) % _K_P
    z2 = 2 * y * z % _K_P
    return (x2, y2, z2)


def _jac_add(p, q):
    if p[2] == 0:
        return q
    if q[2] == 0:
        return p
    x1, y1, z1 = p
    x2, y2, z2 = q
    u1 = x1 * z2 * z2 % _K_P
    u2 = x2 * z1 * z1 % _K_P
    s1 = y1 * pow(z2, 3, _K_P) % _K_P
    s2 = y2 * pow(z1, 3, _K_P) % _K_P
    if u1 == u2:
        if s1 != s2:
            return (0, 0, 0)
        return _jac_double(p)
    h = (u2 - u1) % _K_P
    r = (s2 - s1) % _K_P
    h2 = h * h % _K_P
    h3 = h * h2 % _K_P
    x3 = (r * r - h3 - 2 * u1 * h2) % _K_P
    y3 = (r * (u1 * h2 - x3) - s1 * h3) % _K_P
    z3 = h * z1 * z2 % _K_P
    return (x3, y3, z3)


def secp256k1_public_key(scalar: int) -> bytes:
    """Compressed SEC 1 public key via Jacobian double-and-add."""
    assert 1 <= scalar < _K_N
    result = (0, 0, 0)
    addend = (_K_G[0], _K_G[1], 1)
    k = scalar
    while k:
        if k & 1:
            result = _jac_add(result, addend)
        addend = _jac_double(addend)
        k >>= 1
    x, y, z = result
    zinv = pow(z, -1, _K_P)
    ax = x * zinv * zinv % _K_P
    ay = y * pow(zinv, 3, _K_P) % _K_P
    return (b"\x03" if ay & 1 else b"\x02") + ax.to_bytes(32, "big")
