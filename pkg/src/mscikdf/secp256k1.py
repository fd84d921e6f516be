"""Minimal secp256k1 arithmetic: enough to turn a scalar into a public key.

Pure Python double-and-add over the short Weierstrass curve
y^2 = x^3 + 7 (mod p). Not constant-time, which is acceptable here: the
only use is computing public keys for display and test vectors, and the
scalar is already the caller's secret output, not a long-term signing path.
"""

from __future__ import annotations

# Curve order and field prime (SEC 2, "Recommended Elliptic Curve Domain
# Parameters", curve secp256k1).
N = 0xFFFFFFFFFFFFFFFFFFFFFFFFFFFFFFFEBAAEDCE6AF48A03BBFD25E8CD0364141
P = 0xFFFFFFFFFFFFFFFFFFFFFFFFFFFFFFFFFFFFFFFFFFFFFFFFFFFFFFFEFFFFFC2F
GX = 0x79BE667EF9DCBBAC55A06295CE870B07029BFCDB2DCE28D959F2815B16F81798
GY = 0x483ADA7726A3C4655DA4FBFC0E1108A8FD17B448A68554199C47D08FFB10D4B8

Point = tuple[int, int] | None  # None is the point at infinity


def point_add(p1: Point, p2: Point) -> Point:
    if p1 is None:
        return p2
    if p2 is None:
        return p1
    x1, y1 = p1
    x2, y2 = p2
    if x1 == x2 and (y1 + y2) % P == 0:
        return None
    if p1 == p2:
        lam = (3 * x1 * x1) * pow(2 * y1, -1, P) % P
    else:
        lam = (y2 - y1) * pow(x2 - x1, -1, P) % P
    x3 = (lam * lam - x1 - x2) % P
    y3 = (lam * (x1 - x3) - y1) % P
    return (x3, y3)


def point_mul(k: int, point: Point = (GX, GY)) -> Point:
    if not 1 <= k < N:
        raise ValueError("scalar outside 1..n-1")
    result: Point = None
    addend = point
    while k:
        if k & 1:
            result = point_add(result, addend)
        addend = point_add(addend, addend)
        k >>= 1
    return result


def compressed_public_key(scalar: int) -> bytes:
    """SEC 1 compressed encoding (33 bytes) of scalar * G."""
    point = point_mul(scalar)
    assert point is not None  # k in 1..n-1 never lands on infinity
    x, y = point
    prefix = b"\x03" if y & 1 else b"\x02"
    return prefix + x.to_bytes(32, "big")
