"""Range proofs for every entry of a committed vector or matrix.

The committed object is viewed as a polynomial f whose coefficients are the
entries at their flattened positions, so the GT commitment is
e(g, g')^f(alpha) * hhat^r. Fresh per-entry commitments c_k are linked to it
by one KZG-style opening at a hashed point z, and the range backend then runs
on the c_k.
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

from ..crypto import group as grp
from ..crypto.field import R, inv
from ..crypto.wire import Reader, Writer
from .params import SymParams, sample
from .rangeproof import RangeProof, range_prove, range_verify


@dataclass(frozen=True)
class ZkrpProof:
    coms: tuple      # per-entry commitments c_k = g^v_k h^r_k
    pi_eq: object
    theta: object
    rng_proof: RangeProof

    def write(self, w: Writer) -> None:
        w.u8(0x52).g1s(self.coms).g1(self.pi_eq).g1(self.theta)
        self.rng_proof.write(w)

    @classmethod
    def read(cls, r: Reader) -> "ZkrpProof":
        if r.u8() != 0x52:
            raise ValueError("expected a zkrp proof")
        return cls(tuple(r.g1s()), r.g1(), r.g1(), RangeProof.read(r))


def matrix_positions(sp: SymParams, m: int, n: int) -> list[int]:
    """Flattened positions of an m x n matrix, column-major with stride m_bar."""
    sp.check_matrix(m, n)
    return [i + sp.m_bar * j for j in range(n) for i in range(m)]


def flatten(A: Sequence[Sequence[int]]) -> list[int]:
    """Column-major entries, matching matrix_positions."""
    m = len(A)
    n = len(A[0]) if m else 0
    return [A[i][j] for j in range(n) for i in range(m)]


def vector_positions(sp: SymParams, n: int) -> list[int]:
    sp.check_vector(n)
    return list(range(n))


def lift(sp: SymParams, c) -> object:
    """GT image of a G1 vector commitment."""
    return grp.pairing(c, sp.g2)


def shift_commitment(sp: SymParams, positions: Sequence[int], M: int):
    """Commitment to the all-M object at the given positions, zero randomness."""
    return grp.smul(grp.msm([sp.gs[p] for p in positions], [1] * len(positions)), M) if positions else grp.G1()


def _quotient(coeffs: dict, z: int) -> list[int]:
    """(f(X) - f(z)) / (X - z) by synthetic division."""
    top = max(coeffs) if coeffs else 0
    f = [0] * (top + 1)
    for p, v in coeffs.items():
        f[p] = v % R
    q = [0] * max(top, 1)
    acc = 0
    for i in range(top, 0, -1):
        acc = (acc * z + f[i]) % R
        q[i - 1] = acc
    return q


def _start(tr, chat, coms, M):
    tr.append("zkrp-chat", chat.serialize())
    tr.append_int("zkrp-M", M)
    tr.append_points("zkrp-coms", list(coms))
    return tr.challenge("zkrp-z")


def _aggregate(coms, positions, z):
    pw = [pow(z, p, R) for p in positions]
    return grp.msm_or(list(coms), pw, grp.G1()), pw


def zkrp_prove(sp: SymParams, entries: Sequence[int], positions: Sequence[int], chat, r_A: int, M: int,
               tr, rng) -> tuple[ZkrpProof, list[int]]:
    """Prove every entry lies in [0, M]. Returns the proof and the per-entry randomness."""
    if len(entries) != len(positions):
        raise ValueError("entries and positions differ in length")
    from .rangeproof import RangeError
    for v in entries:
        if not 0 <= v <= M:
            raise RangeError(f"entry {v} outside [0, {M}]")
    rs = [sample(rng) for _ in entries]
    coms = [grp.msm([sp.g, sp.h], [v, r]) for v, r in zip(entries, rs)]
    z = _start(tr, chat, coms, M)
    q = _quotient(dict(zip(positions, entries)), z)
    mu = sample(rng)
    pi_eq = grp.msm(list(sp.gs[: len(q)]) + [sp.h], q + [mu])
    r_z = sum(r * pow(z, p, R) for r, p in zip(rs, positions)) % R
    theta = grp.msm([sp.g, sp.g_alpha], [(r_A - r_z + mu * z) % R, (-mu) % R])
    rp = range_prove(sp, list(entries), rs, coms, M, tr, rng)
    return ZkrpProof(tuple(coms), pi_eq, theta, rp), rs


def zkrp_verify(sp: SymParams, chat, positions: Sequence[int], M: int, proof: ZkrpProof, tr) -> bool:
    if len(proof.coms) != len(positions):
        return False
    z = _start(tr, chat, proof.coms, M)
    c_agg, _ = _aggregate(proof.coms, positions, z)
    lhs = chat / grp.pairing(c_agg, sp.g2)
    rhs = grp.pairing(proof.pi_eq, sp.g2_alpha - grp.smul(sp.g2, z)) * grp.pairing(proof.theta, sp.h2)
    if lhs != rhs:
        return False
    return range_verify(sp, proof.coms, M, proof.rng_proof, tr)


def zkrp_simulate(sp: SymParams, preimage, positions: Sequence[int], M: int, tr, rng) -> ZkrpProof:
    """Transcript simulator using the setup trapdoor.

    preimage is a G1 element C with chat = e(C, g'); for a matrix this is the
    alpha-weighted sum of its column commitments. Per-entry commitments are
    uniform and are opened to 0 through beta; theta is solved for.
    """
    if sp.trapdoor is None:
        raise ValueError("simulation needs the setup trapdoor")
    alpha, beta = sp.trapdoor
    binv = inv(beta)
    ss = [sample(rng) for _ in positions]
    coms = [grp.smul(sp.g, s) for s in ss]
    chat = grp.pairing(preimage, sp.g2)
    z = _start(tr, chat, coms, M)
    c_agg, _ = _aggregate(coms, positions, z)
    pi_eq = grp.smul(sp.g, sample(rng))
    theta = grp.smul(preimage - c_agg - grp.smul(pi_eq, (alpha - z) % R), binv)
    rp = range_prove(sp, [0] * len(positions), [s * binv % R for s in ss], coms, M, tr, rng)
    return ZkrpProof(tuple(coms), pi_eq, theta, rp)
