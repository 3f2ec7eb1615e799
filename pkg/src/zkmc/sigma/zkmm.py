"""Matrix-vector products on committed data.

The matrix side is given by per-entry commitments C_ij = g^a_ij h^rho_ij
(published by the matrix range proof). A hashed z folds the rows:
a'_j = sum_i z^i a_ij, whose commitment the verifier derives homomorphically,
and the product claim becomes the single inner product <a', x> = y(z). The
value y(z) is committed as S and tied to the product commitment by a
KZG-style opening; a masked Schnorr argument then proves the inner product.
For a one-row matrix the product commitment is a scalar commitment and
serves as S directly.
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import Optional, Sequence

from ..crypto import group as grp
from ..crypto.field import R
from ..crypto.wire import Reader, Writer
from .params import SymParams, sample
from .rangeproof import _weights
from .zkrp import _quotient


@dataclass(frozen=True)
class ZkmmProof:
    S: Optional[object]        # commitment to y(z); None for one-row matrices
    pi_s: Optional[object]
    theta_s: Optional[object]
    T_a: tuple
    T_x: object
    T_1: object
    T_2: object
    f_a: tuple
    z_a: tuple
    f_x: tuple
    z_x: int
    z_s: int

    def write(self, w: Writer) -> None:
        w.u8(0x4D)
        if self.S is None:
            w.u8(0)
        else:
            w.u8(1).g1(self.S).g1(self.pi_s).g1(self.theta_s)
        w.g1s(self.T_a).g1(self.T_x).g1(self.T_1).g1(self.T_2)
        w.scalars(self.f_a).scalars(self.z_a).scalars(self.f_x).scalar(self.z_x).scalar(self.z_s)

    @classmethod
    def read(cls, r: Reader) -> "ZkmmProof":
        if r.u8() != 0x4D:
            raise ValueError("expected a zkmm proof")
        S = pi = th = None
        if r.u8():
            S, pi, th = r.g1(), r.g1(), r.g1()
        return cls(S, pi, th, tuple(r.g1s()), r.g1(), r.g1(), r.g1(),
                   tuple(r.scalars()), tuple(r.scalars()), tuple(r.scalars()), r.scalar(), r.scalar())


def product(A: Sequence[Sequence[int]], x: Sequence[int]) -> list[int]:
    return [sum(a * v for a, v in zip(row, x)) for row in A]


def commit_out(sp: SymParams, y: Sequence[int], r: int):
    """Vector commitment over g_0.. (for one entry this is the scalar commitment)."""
    sp.check_vector(len(y))
    return grp.msm(list(sp.gs[: len(y)]) + [sp.h], [v % R for v in y] + [r])


def _start(tr, entry_coms, c_x, c_out):
    tr.append_points("zkmm-A", [c for row in entry_coms for c in row])
    tr.append_point("zkmm-x", c_x)
    tr.append_point("zkmm-out", c_out)
    return tr.challenge("zkmm-z")


def _fold(entry_coms, z):
    m = len(entry_coms)
    n = len(entry_coms[0]) if m else 0
    pw = [pow(z, i, R) for i in range(m)]
    return [grp.msm([entry_coms[i][j] for i in range(m)], pw) for j in range(n)], pw


def zkmm_prove(sp: SymParams, A, entry_coms, entry_rands, x, c_x, r_x: int, r_out: int, tr, rng):
    """Returns (proof, c_out) with c_out committing to A x under randomness r_out."""
    m, n = len(A), len(x)
    if any(len(row) != n for row in A) or len(entry_coms) != m:
        from ..crypto.pedersen import DimensionError
        raise DimensionError("matrix and vector dimensions disagree")
    y = product(A, x)
    c_out = commit_out(sp, y, r_out)
    z = _start(tr, entry_coms, c_x, c_out)
    pw = [pow(z, i, R) for i in range(m)]
    a_f = [sum(pw[i] * A[i][j] for i in range(m)) % R for j in range(n)]
    rho_f = [sum(pw[i] * entry_rands[i][j] for i in range(m)) % R for j in range(n)]
    s = sum(p * v for p, v in zip(pw, y)) % R
    if m == 1:
        S, rho_s, pi_s, theta_s = c_out, r_out, None, None
    else:
        rho_s = sample(rng)
        S = grp.msm([sp.g, sp.h], [s, rho_s])
        q = _quotient(dict(enumerate(y)), z)
        mu = sample(rng)
        pi_s = grp.msm(list(sp.gs[: len(q)]) + [sp.h], q + [mu])
        theta_s = grp.msm([sp.g, sp.g_alpha], [(r_out - rho_s + mu * z) % R, (-mu) % R])
        tr.append_points("zkmm-open", [S, pi_s, theta_s])
    # masked inner-product argument for <a_f, x> = s
    d_a = [sample(rng) for _ in range(n)]
    rho_a = [sample(rng) for _ in range(n)]
    d_x = [sample(rng) for _ in range(n)]
    rho_x, tau1, tau2 = sample(rng), sample(rng), sample(rng)
    t1 = (sum(a * d for a, d in zip(a_f, d_x)) + sum(d * v for d, v in zip(d_a, x))) % R
    t2 = sum(a * b for a, b in zip(d_a, d_x)) % R
    T_a = tuple(grp.msm([sp.g, sp.h], [d, r]) for d, r in zip(d_a, rho_a))
    T_x = grp.msm(list(sp.gs[:n]) + [sp.h], d_x + [rho_x])
    T_1 = grp.msm([sp.g, sp.h], [t1, tau1])
    T_2 = grp.msm([sp.g, sp.h], [t2, tau2])
    tr.append_points("zkmm-T", list(T_a) + [T_x, T_1, T_2])
    e = tr.challenge("zkmm-e")
    f_a = tuple((e * a + d) % R for a, d in zip(a_f, d_a))
    z_a = tuple((e * r + ra) % R for r, ra in zip(rho_f, rho_a))
    f_x = tuple((e * v + d) % R for v, d in zip(x, d_x))
    z_x = (e * r_x + rho_x) % R
    z_s = (e * e * rho_s + e * tau1 + tau2) % R
    return ZkmmProof(None if m == 1 else S, pi_s, theta_s, T_a, T_x, T_1, T_2, f_a, z_a, f_x, z_x, z_s), c_out


def zkmm_verify(sp: SymParams, entry_coms, c_x, c_out, proof: ZkmmProof, tr) -> bool:
    m = len(entry_coms)
    n = len(entry_coms[0]) if m else 0
    if m == 0 or any(len(row) != n for row in entry_coms):
        return False
    if not (len(proof.T_a) == len(proof.f_a) == len(proof.z_a) == len(proof.f_x) == n):
        return False
    z = _start(tr, entry_coms, c_x, c_out)
    folded, _ = _fold(entry_coms, z)
    if m == 1:
        if proof.S is not None:
            return False
        S = c_out
    else:
        if proof.S is None:
            return False
        S = proof.S
        lhs = grp.pairing(c_out - S, sp.g2)
        rhs = grp.pairing(proof.pi_s, sp.g2_alpha - grp.smul(sp.g2, z)) * grp.pairing(proof.theta_s, sp.h2)
        if lhs != rhs:
            return False
        tr.append_points("zkmm-open", [S, proof.pi_s, proof.theta_s])
    tr.append_points("zkmm-T", list(proof.T_a) + [proof.T_x, proof.T_1, proof.T_2])
    e = tr.challenge("zkmm-e")
    ws = _weights(tr, n + 2, [*proof.f_a, *proof.z_a, *proof.f_x, proof.z_x, proof.z_s])
    # sum_j w_j (f_a_j g + z_a_j h - e A'_j - T_a_j)
    #   + w_n (sum f_x_j g_j + z_x h - e c_x - T_x)
    #   + w_n+1 (<f_a, f_x> g + z_s h - e^2 S - e T_1 - T_2) = 0
    wx, ws_ = ws[n], ws[n + 1]
    ip = sum(a * b for a, b in zip(proof.f_a, proof.f_x)) % R
    gc = sum(w * f for w, f in zip(ws, proof.f_a)) + ws_ * ip
    hc = sum(w * za for w, za in zip(ws, proof.z_a)) + wx * proof.z_x + ws_ * proof.z_s
    pts = [sp.g, sp.h] + list(folded) + list(proof.T_a) + list(sp.gs[:n]) + [c_x, proof.T_x, S, proof.T_1, proof.T_2]
    sc = [gc, hc] + [-w * e for w in ws[:n]] + [-w for w in ws[:n]] + [wx * f for f in proof.f_x]
    sc += [-wx * e, -wx, -ws_ * e * e, -ws_ * e, -ws_]
    return grp.msm(pts, [v % R for v in sc]).is_zero()
