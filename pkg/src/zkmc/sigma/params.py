"""Structured parameters shared by the commitment scheme and the Σ-protocols.

Vector bases are powers g_i = g^(alpha^i) so that a vector commitment is a
hiding polynomial commitment g^(f(alpha)) h^r with h = g^beta. A matrix with
row stride m_bar is flattened column-major: entry (i, j) sits at position
i + m_bar * j, and column j is aggregated in GT with g'^(alpha^(m_bar * j)).
"""
from __future__ import annotations

import random
import secrets
from dataclasses import dataclass
from typing import Optional

from ..crypto import group as grp
from ..crypto.encoding import DEFAULT_M
from ..crypto.field import R
from ..crypto.pedersen import PedersenBases
from ..crypto.wire import Reader, Writer

MAGIC = b"ZKSP"


def sample(rng) -> int:
    """Uniform nonzero field element from a random.Random-like source."""
    while True:
        x = rng.randrange(R)
        if x:
            return x


def default_rng(seed: Optional[int] = None):
    return random.Random(seed) if seed is not None else secrets.SystemRandom()


@dataclass(frozen=True)
class SymParams:
    M: int
    m_bar: int           # row stride of flattened matrices
    n_bar: int           # maximum column count
    g: object
    gs: tuple            # g^(alpha^i), i < m_bar * n_bar
    h: object
    g2: object
    g2_alpha: object
    h2: object
    cols: tuple          # g'^(alpha^(m_bar * j))
    hhat: object
    insecure: bool = False
    trapdoor: Optional[tuple] = None  # (alpha, beta), insecure mode only

    @property
    def L(self) -> int:
        return len(self.gs)

    @property
    def g_alpha(self):
        return self.gs[1]

    def pedersen(self) -> PedersenBases:
        return PedersenBases(self.g, self.h, self.gs, self.cols, self.g2)

    def check_vector(self, n: int) -> None:
        from ..crypto.pedersen import DimensionError
        if n > self.L:
            raise DimensionError(f"vector of length {n} exceeds {self.L} bases")

    def check_matrix(self, m: int, n: int) -> None:
        from ..crypto.pedersen import DimensionError
        if m > self.m_bar or n > self.n_bar:
            raise DimensionError(f"matrix {m}x{n} exceeds parameters {self.m_bar}x{self.n_bar}")

    def digest(self) -> bytes:
        return grp.digest(b"sym-params", str(self.M).encode(), str(self.m_bar).encode(),
                          str(self.n_bar).encode(), self.g.serialize(), self.h.serialize(),
                          self.gs[-1].serialize(), self.g2_alpha.serialize(), self.h2.serialize(),
                          self.cols[-1].serialize())

    def to_bytes(self) -> bytes:
        w = Writer(MAGIC).bigint(self.M).u32(self.m_bar).u32(self.n_bar)
        w.u8(1 if self.insecure else 0)
        w.g1s(self.gs).g1(self.h).g2(self.g2_alpha).g2(self.h2)
        w.u32(len(self.cols))
        for c in self.cols:
            w.g2(c)
        if self.insecure:
            a, b = self.trapdoor
            w.scalar(a).scalar(b)
        return w.done()

    @classmethod
    def from_bytes(cls, data: bytes, allow_insecure: bool = False) -> "SymParams":
        r = Reader(data, MAGIC)
        M = r.bigint()
        m_bar, n_bar = r.u32(), r.u32()
        insecure = bool(r.u8())
        if insecure and not allow_insecure:
            raise ValueError("refusing parameters produced by an insecure setup")
        gs = tuple(r.g1s())
        h = r.g1()
        g2a, h2 = r.g2(), r.g2()
        cols = tuple(r.g2() for _ in range(r.u32()))
        trap = (r.scalar(), r.scalar()) if insecure else None
        r.end()
        g2 = grp.g2()
        return cls(M, m_bar, n_bar, gs[0], gs, h, g2, g2a, h2, cols, grp.pairing(h, g2), insecure, trap)


def setup(m_bar: int, n_bar: int, M: int = DEFAULT_M, rng=None, insecure: bool = False) -> SymParams:
    """Trusted setup. alpha and beta are dropped unless insecure is set."""
    rng = rng or default_rng()
    alpha, beta = sample(rng), sample(rng)
    g, g2 = grp.g1(), grp.g2()
    L = max(m_bar * n_bar, 2)
    gs = []
    a = 1
    for _ in range(L):
        gs.append(grp.smul(g, a))
        a = a * alpha % R
    h = grp.smul(g, beta)
    cols = tuple(grp.smul(g2, pow(alpha, m_bar * j, R)) for j in range(n_bar))
    return SymParams(M, m_bar, n_bar, g, tuple(gs), h, g2, grp.smul(g2, alpha), grp.smul(g2, beta),
                     cols, grp.pairing(h, g2), insecure, (alpha, beta) if insecure else None)
