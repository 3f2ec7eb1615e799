"""Scalar field of BLS12-381 and the polynomial helpers built on it.

Field elements are plain Python ints in [0, R). Polynomials are lists of
coefficients, lowest degree first.
"""
from __future__ import annotations

from typing import Iterable, Sequence

from . import opcount

R = 0x73EDA753299D7D483339D80809A1D80553BDA402FFFE5BFEFFFFFFFF00000001
TWO_ADICITY = 32
GENERATOR = 7  # generates the full multiplicative group


def inv(a: int) -> int:
    a %= R
    if a == 0:
        raise ZeroDivisionError("inverse of zero")
    return pow(a, -1, R)


def batch_inv(xs: Sequence[int]) -> list[int]:
    """Montgomery's trick. All inputs must be nonzero."""
    n = len(xs)
    if n == 0:
        return []
    pref = [0] * n
    acc = 1
    for i, x in enumerate(xs):
        pref[i] = acc
        acc = acc * x % R
    acc = inv(acc)
    out = [0] * n
    for i in range(n - 1, -1, -1):
        out[i] = acc * pref[i] % R
        acc = acc * xs[i] % R
    return out


def root_of_unity(n: int) -> int:
    """Primitive n-th root of unity, n a power of two."""
    if n & (n - 1) or n > 1 << TWO_ADICITY:
        raise ValueError(f"no root of unity of order {n}")
    return pow(GENERATOR, (R - 1) // n, R)


def _bitrev(a: list[int]) -> None:
    n = len(a)
    j = 0
    for i in range(1, n):
        bit = n >> 1
        while j & bit:
            j ^= bit
            bit >>= 1
        j |= bit
        if i < j:
            a[i], a[j] = a[j], a[i]


def ntt(coeffs: Sequence[int], n: int, shift: int = 1, inverse: bool = False) -> list[int]:
    """Evaluate on the coset shift*<w_n> (or interpolate from it if inverse)."""
    a = [c % R for c in coeffs] + [0] * (n - len(coeffs))
    if len(a) != n:
        raise ValueError("too many coefficients for transform size")
    if not inverse and shift != 1:
        s = 1
        for i in range(n):
            a[i] = a[i] * s % R
            s = s * shift % R
    w = root_of_unity(n)
    if inverse:
        w = inv(w)
    _bitrev(a)
    m = 1
    while m < n:
        wm = pow(w, n // (2 * m), R)
        tw = [1] * m
        for k in range(1, m):
            tw[k] = tw[k - 1] * wm % R
        for start in range(0, n, 2 * m):
            for k in range(m):
                u = a[start + k]
                v = a[start + k + m] * tw[k] % R
                a[start + k] = (u + v) % R
                a[start + k + m] = (u - v) % R
        m *= 2
    opcount.add("field_mul", n * max(1, n.bit_length() - 1) // 2)
    if inverse:
        ninv = inv(n)
        a = [x * ninv % R for x in a]
        if shift != 1:
            si = inv(shift)
            s = 1
            for i in range(n):
                a[i] = a[i] * s % R
                s = s * si % R
    return a


def trim(p: list[int]) -> list[int]:
    while p and p[-1] == 0:
        p.pop()
    return p


def degree(p: Sequence[int]) -> int:
    for i in range(len(p) - 1, -1, -1):
        if p[i] % R:
            return i
    return -1


def evaluate(p: Sequence[int], x: int) -> int:
    acc = 0
    for c in reversed(p):
        acc = (acc * x + c) % R
    return acc


def add(p: Sequence[int], q: Sequence[int]) -> list[int]:
    n = max(len(p), len(q))
    return [((p[i] if i < len(p) else 0) + (q[i] if i < len(q) else 0)) % R for i in range(n)]


def scale(p: Sequence[int], k: int) -> list[int]:
    return [c * k % R for c in p]


def mul(p: Sequence[int], q: Sequence[int]) -> list[int]:
    if not p or not q:
        return []
    if min(len(p), len(q)) <= 32:
        out = [0] * (len(p) + len(q) - 1)
        for i, a in enumerate(p):
            if a:
                for j, b in enumerate(q):
                    out[i + j] += a * b
        opcount.add("field_mul", len(p) * len(q))
        return [c % R for c in out]
    n = 1
    while n < len(p) + len(q) - 1:
        n *= 2
    fp = ntt(p, n)
    fq = ntt(q, n)
    prod = [a * b % R for a, b in zip(fp, fq)]
    return ntt(prod, n, inverse=True)[: len(p) + len(q) - 1]


def from_roots(roots: Iterable[int]) -> list[int]:
    """Monic polynomial with the given roots, by a product tree."""
    layer = [[(-r) % R, 1] for r in roots]
    if not layer:
        return [1]
    while len(layer) > 1:
        nxt = [mul(layer[i], layer[i + 1]) for i in range(0, len(layer) - 1, 2)]
        if len(layer) % 2:
            nxt.append(layer[-1])
        layer = nxt
    return layer[0]


def divmod_poly(p: Sequence[int], d: Sequence[int]) -> tuple[list[int], list[int]]:
    """Schoolbook long division; fine for the small divisors used here."""
    p = trim([c % R for c in p])
    d = trim([c % R for c in d])
    if not d:
        raise ZeroDivisionError("division by zero polynomial")
    if len(p) < len(d):
        return [], p
    lead = inv(d[-1])
    q = [0] * (len(p) - len(d) + 1)
    rem = list(p)
    for i in range(len(q) - 1, -1, -1):
        c = rem[i + len(d) - 1] * lead % R
        q[i] = c
        if c:
            for j, dj in enumerate(d):
                rem[i + j] = (rem[i + j] - c * dj) % R
    return q, trim(rem[: len(d) - 1])


def interpolate(xs: Sequence[int], ys: Sequence[int]) -> list[int]:
    """Lagrange interpolation through arbitrary distinct points (quadratic)."""
    n = len(xs)
    out = [0] * n
    full = from_roots(xs)
    for i in range(n):
        if ys[i] % R == 0:
            continue
        basis, rem = divmod_poly(full, [(-xs[i]) % R, 1])
        assert not rem
        denom = evaluate(basis, xs[i])
        k = ys[i] * inv(denom) % R
        for j, c in enumerate(basis):
            out[j] = (out[j] + k * c) % R
    return trim(out)
