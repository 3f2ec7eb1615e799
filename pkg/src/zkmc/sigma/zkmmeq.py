"""Linkage of one committed vector x to commitments of public images A^(j) x.

All vectors are committed over the structured bases g_0, g_1, ... with
blinding base h. The verifier's derived bases ghat_i^(j) = prod_s g_s^A_si
are never materialised: prod_i (ghat_i^(j))^z_i equals the commitment of
A^(j) z, which is what the check computes.
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

from ..crypto import group as grp
from ..crypto.field import R, inv
from ..crypto.wire import Reader, Writer
from .params import SymParams, sample
from .zkmm import product


@dataclass(frozen=True)
class ZkmmeqProof:
    t_x: object
    ts: tuple
    z: tuple
    w_x: int
    ws: tuple

    def write(self, w: Writer) -> None:
        w.u8(0x45).g1(self.t_x).g1s(self.ts).scalars(self.z).scalar(self.w_x).scalars(self.ws)

    @classmethod
    def read(cls, r: Reader) -> "ZkmmeqProof":
        if r.u8() != 0x45:
            raise ValueError("expected a zkmmeq proof")
        return cls(r.g1(), tuple(r.g1s()), tuple(r.scalars()), r.scalar(), tuple(r.scalars()))


def _com(sp: SymParams, v: Sequence[int], r: int):
    sp.check_vector(len(v))
    return grp.msm(list(sp.gs[: len(v)]) + [sp.h], [x % R for x in v] + [r % R])


def _absorb(tr, c_x, cs, mats):
    tr.append_point("eq-cx", c_x)
    tr.append_points("eq-c", list(cs))
    for A in mats:
        tr.append("eq-A", repr([list(r) for r in A]).encode())


class ZkmmeqProver:
    """Interactive prover; the Fiat-Shamir wrapper and the extractor both drive it."""

    def __init__(self, sp: SymParams, stmts, x, r_x, rng):
        self.sp, self.x, self.r_x = sp, list(x), r_x
        self.stmts = list(stmts)  # (c_j, r_j, A_j)
        n = len(self.x)
        self.sigma = [sample(rng) for _ in range(n)]
        self.rho_x = sample(rng)
        self.rhos = [sample(rng) for _ in self.stmts]

    def first(self):
        sp = self.sp
        t_x = _com(sp, self.sigma, self.rho_x)
        ts = tuple(_com(sp, product(A, self.sigma), rho) for (_, _, A), rho in zip(self.stmts, self.rhos))
        return t_x, ts

    def respond(self, e: int):
        z = tuple((s + e * v) % R for s, v in zip(self.sigma, self.x))
        w_x = (self.rho_x + e * self.r_x) % R
        ws = tuple((rho + e * r) % R for rho, (_, r, _) in zip(self.rhos, self.stmts))
        return z, w_x, ws


def zkmmeq_prove(sp: SymParams, stmts, x, c_x, r_x: int, tr, rng) -> ZkmmeqProof:
    """stmts: list of (c_j, r_j, A_j) with c_j committing to A_j x under r_j."""
    for _, _, A in stmts:
        if any(len(row) != len(x) for row in A):
            from ..crypto.pedersen import DimensionError
            raise DimensionError("statement matrix width differs from the witness length")
    p = ZkmmeqProver(sp, stmts, x, r_x, rng)
    t_x, ts = p.first()
    _absorb(tr, c_x, [c for c, _, _ in stmts], [A for _, _, A in stmts])
    tr.append_points("eq-t", [t_x, *ts])
    e = tr.challenge("eq-e")
    z, w_x, ws = p.respond(e)
    return ZkmmeqProof(t_x, ts, z, w_x, ws)


def check(sp: SymParams, stmts, c_x, t_x, ts, e, z, w_x, ws) -> bool:
    """The verification equations for one (first message, challenge, response)."""
    n = len(z)
    if len(ts) != len(stmts) or len(ws) != len(stmts) or n > sp.L:
        return False
    if _com(sp, z, w_x) != t_x + grp.smul(c_x, e):
        return False
    for (c, A), t, w in zip(stmts, ts, ws):
        if any(len(row) != n for row in A):
            return False
        if _com(sp, product(A, z), w) != t + grp.smul(c, e):
            return False
    return True


def zkmmeq_verify(sp: SymParams, stmts, c_x, proof: ZkmmeqProof, tr) -> bool:
    """stmts: list of (c_j, A_j)."""
    _absorb(tr, c_x, [c for c, _ in stmts], [A for _, A in stmts])
    tr.append_points("eq-t", [proof.t_x, *proof.ts])
    e = tr.challenge("eq-e")
    return check(sp, stmts, c_x, proof.t_x, proof.ts, e, proof.z, proof.w_x, proof.ws)


def extract(t1, t2):
    """Witness from two accepting transcripts sharing a first message.

    Each transcript is (e, z, w_x, ws); returns (x, r_x, [r_j]).
    """
    (e1, z1, wx1, ws1), (e2, z2, wx2, ws2) = t1, t2
    if e1 == e2:
        raise ValueError("extraction needs distinct challenges")
    d = inv((e1 - e2) % R)
    x = [(a - b) * d % R for a, b in zip(z1, z2)]
    return x, (wx1 - wx2) * d % R, [(a - b) * d % R for a, b in zip(ws1, ws2)]
