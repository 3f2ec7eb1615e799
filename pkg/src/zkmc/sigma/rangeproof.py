"""Range proofs for Pedersen commitments g^v h^r by bit decomposition.

Each bit commitment C = g^b h^rb carries a two-branch OR proof that C or C/g
is a power of h. The bit randomness is chosen so that the weighted product
of bit commitments equals the value commitment exactly. When M + 1 is not a
power of two, M - v is decomposed as well, which pins v to [0, M].
"""
from __future__ import annotations

import hashlib
from dataclasses import dataclass

from ..crypto import group as grp
from ..crypto.field import R, inv
from ..crypto.wire import Reader, Writer
from .params import SymParams, sample


class RangeError(ValueError):
    """A committed value lies outside [0, M]; no proof can be built."""


@dataclass(frozen=True)
class BitProof:
    C: object
    A0: object
    A1: object
    e0: int
    z0: int
    z1: int


@dataclass(frozen=True)
class RangeProof:
    k: int
    dual: bool
    decs: tuple  # tuple of tuples of BitProof; one or two decompositions per value

    def write(self, w: Writer) -> None:
        w.u8(self.k).u8(1 if self.dual else 0).u32(len(self.decs))
        for dec in self.decs:
            for b in dec:
                w.g1(b.C).g1(b.A0).g1(b.A1).scalar(b.e0).scalar(b.z0).scalar(b.z1)

    @classmethod
    def read(cls, r: Reader) -> "RangeProof":
        k, dual, n = r.u8(), bool(r.u8()), r.u32()
        decs = tuple(tuple(BitProof(r.g1(), r.g1(), r.g1(), r.scalar(), r.scalar(), r.scalar())
                           for _ in range(k)) for _ in range(n))
        return cls(k, dual, decs)


def bit_length(M: int) -> tuple[int, bool]:
    """k = ceil(log2(M + 1)) and whether the complementary decomposition is needed."""
    if M < 1:
        raise ValueError("range bound must be positive")
    k = M.bit_length()
    return k, (M + 1) != (1 << k)


def _weights(tr, n: int, responses=()) -> list[int]:
    """Verifier-side batching weights, bound to every response.

    Drawn from a copy so the shared transcript is unchanged; the responses are
    absorbed first so a prover cannot pick them after seeing the weights.
    """
    t = tr.clone()
    for x in responses:
        t.append_scalar("resp", x)
    seed = t.challenge("batch-weights").to_bytes(32, "little")
    raw = hashlib.shake_256(seed).digest(16 * n)
    return [int.from_bytes(raw[16 * i: 16 * i + 16], "little") | 1 for i in range(n)]


def _targets(sp: SymParams, coms, M: int, dual: bool):
    """Commitments each decomposition must sum to."""
    out = []
    Mg = grp.smul(sp.g, M) if dual else None
    for c in coms:
        out.append(c)
        if dual:
            out.append(Mg - c)
    return out


def range_prove(sp: SymParams, values, rands, coms, M: int, tr, rng) -> RangeProof:
    k, dual = bit_length(M)
    g, h = sp.g, sp.h
    openings = []
    for v, r in zip(values, rands):
        if not 0 <= v <= M:
            raise RangeError(f"value {v} outside [0, {M}]")
        openings.append((v, r % R))
        if dual:
            openings.append((M - v, (-r) % R))
    tr.append_int("range-M", M)
    tr.append_points("range-coms", list(coms))
    top = inv(1 << (k - 1))
    pending = []
    for v, r in openings:
        rb = [sample(rng) for _ in range(k - 1)]
        rb.append((r - sum(x << i for i, x in enumerate(rb))) * top % R)
        row = []
        for i in range(k):
            b = (v >> i) & 1
            C = grp.smul(h, rb[i])
            if b:
                C = C + g
            kk = sample(rng)
            A_real = grp.smul(h, kk)
            e_sim, z_sim = sample(rng), sample(rng)
            Y_sim = C if b else C - g          # the branch we cannot open
            A_sim = grp.smul(h, z_sim) - grp.smul(Y_sim, e_sim)
            A0, A1 = (A_sim, A_real) if b else (A_real, A_sim)
            row.append((b, C, A0, A1, kk, e_sim, z_sim, rb[i]))
        pending.append(row)
    for row in pending:
        for _, C, A0, A1, *_ in row:
            tr.append_points("bit", [C, A0, A1])
    c = tr.challenge("range-c")
    decs = []
    for row in pending:
        out = []
        for b, C, A0, A1, kk, e_sim, z_sim, r_b in row:
            e_real = (c - e_sim) % R
            z_real = (kk + e_real * r_b) % R
            if b:
                out.append(BitProof(C, A0, A1, e_sim, z_sim, z_real))
            else:
                out.append(BitProof(C, A0, A1, e_real, z_real, z_sim))
        decs.append(tuple(out))
    return RangeProof(k, dual, tuple(decs))


def range_verify(sp: SymParams, coms, M: int, proof: RangeProof, tr) -> bool:
    k, dual = bit_length(M)
    coms = list(coms)
    if proof.k != k or proof.dual != dual or len(proof.decs) != len(coms) * (2 if dual else 1):
        return False
    if any(len(d) != k for d in proof.decs):
        return False
    tr.append_int("range-M", M)
    tr.append_points("range-coms", coms)
    for dec in proof.decs:
        for b in dec:
            tr.append_points("bit", [b.C, b.A0, b.A1])
    c = tr.challenge("range-c")
    nbits = len(proof.decs) * k
    resp = [x for dec in proof.decs for b in dec for x in (b.e0, b.z0, b.z1)]
    ws = _weights(tr, 2 * nbits + len(proof.decs), resp)
    # sum of weighted equations, all of which must vanish:
    #   z0 h - A0 - e0 C,   z1 h - A1 - e1 (C - g),   sum 2^i C_i - target
    pts, sc = [], []
    hc = gc = 0
    wi = 0
    targets = _targets(sp, coms, M, dual)
    for d, dec in enumerate(proof.decs):
        om = ws[2 * nbits + d]
        for i, b in enumerate(dec):
            r0, r1 = ws[wi], ws[wi + 1]
            wi += 2
            e1 = (c - b.e0) % R
            hc += r0 * b.z0 + r1 * b.z1
            gc += r1 * e1
            pts += [b.A0, b.A1, b.C]
            sc += [-r0, -r1, -r0 * b.e0 - r1 * e1 + om * (1 << i)]
        pts.append(targets[d])
        sc.append(-om)
    pts += [sp.h, sp.g]
    sc += [hc, gc]
    return grp.msm(pts, [s % R for s in sc]).is_zero()
