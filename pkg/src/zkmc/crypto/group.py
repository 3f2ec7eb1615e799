"""Pairing groups over BLS12-381, backed by the mcl library (pymcl).

Scalars are Python ints; they are reduced mod R and converted at the
boundary. Multi-scalar multiplication is a Pippenger bucket method written
in Python on top of the library's fast point addition.
"""
from __future__ import annotations

import hashlib
from typing import Sequence

import pymcl

from . import opcount
from .field import R

G1 = pymcl.G1
G2 = pymcl.G2
GT = pymcl.GT

CURVE_ID = b"BLS12-381/mcl"

assert pymcl.r == R


def fr(x: int) -> pymcl.Fr:
    return pymcl.Fr.deserialize((x % R).to_bytes(32, "little"))


def g1() -> G1:
    return pymcl.g1


def g2() -> G2:
    return pymcl.g2


def identity(kind: type):
    return kind()


def smul(p, k: int):
    """Scalar multiplication p^k (written additively by the library)."""
    k %= R
    opcount.add("smul")
    if k == 0:
        return type(p)()
    if k == 1:
        return p
    return p * fr(k)


def pairing(p: G1, q: G2) -> GT:
    opcount.add("pairing")
    return pymcl.pairing(p, q)


def gt_pow(x: GT, k: int) -> GT:
    opcount.add("gt_pow")
    k %= R
    if k == 0:
        return GT()
    return x ** fr(k)


def gt_eq(a: GT, b: GT) -> bool:
    return a == b


def hash_to_g1(label: bytes) -> G1:
    """Nothing-up-my-sleeve generator derived from a public label."""
    return G1.hash(CURVE_ID + b"/" + label)


def hash_to_g2(label: bytes) -> G2:
    return G2.hash(CURVE_ID + b"/" + label)


def _window(n: int) -> int:
    if n < 4:
        return 2
    if n < 32:
        return 3
    c = max(4, (n.bit_length() * 7) // 10)
    return min(c, 16)


def msm(points: Sequence, scalars: Sequence[int]):
    """Compute sum_i scalars[i] * points[i]."""
    if len(points) != len(scalars):
        raise ValueError("msm length mismatch")
    if not points:
        raise ValueError("msm over empty input needs a group; use msm_or")
    zero = type(points[0])()
    pts = []
    ks = []
    for p, k in zip(points, scalars):
        k %= R
        if k:
            pts.append(p)
            ks.append(k)
    opcount.add("msm_term", len(pts))
    if not pts:
        return zero
    if len(pts) < 200:
        acc = zero
        for p, k in zip(pts, ks):
            acc = acc + (p if k == 1 else p * fr(k))
        return acc
    bits = max(k.bit_length() for k in ks)
    c = _window(len(pts))
    mask = (1 << c) - 1
    nwin = (bits + c - 1) // c
    total = zero
    for w in range(nwin - 1, -1, -1):
        for _ in range(c):
            total = total + total
        buckets = [None] * (mask + 1)
        sh = w * c
        for p, k in zip(pts, ks):
            d = (k >> sh) & mask
            if d:
                b = buckets[d]
                buckets[d] = p if b is None else b + p
        run = zero
        acc = zero
        for d in range(mask, 0, -1):
            b = buckets[d]
            if b is not None:
                run = run + b
            acc = acc + run
        total = total + acc
    return total


def msm_or(points: Sequence, scalars: Sequence[int], zero):
    return msm(points, scalars) if points else zero


def ser(p) -> bytes:
    return p.serialize()


def de_g1(b: bytes) -> G1:
    if len(b) != 48:
        raise ValueError("bad G1 encoding length")
    return G1.deserialize(b)


def de_g2(b: bytes) -> G2:
    if len(b) != 96:
        raise ValueError("bad G2 encoding length")
    return G2.deserialize(b)


def de_gt(b: bytes) -> GT:
    if len(b) != 576:
        raise ValueError("bad GT encoding length")
    return GT.deserialize(b)


def digest(*parts: bytes) -> bytes:
    h = hashlib.sha256()
    for p in parts:
        h.update(len(p).to_bytes(8, "little"))
        h.update(p)
    return h.digest()
