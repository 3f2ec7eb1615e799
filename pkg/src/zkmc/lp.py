"""Exact rational feasibility for systems A x <= b with free x.

A phase-one simplex (Bland's rule) runs on an integer tableau with a common
positive denominator (fraction-free pivoting). When the system is
infeasible, the phase-one duals give a Farkas ray y >= 0 with
A^T y = 0 and b.y < 0. Every answer is re-verified by substitution.
"""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from math import gcd, lcm
from typing import Sequence, Union

from .crypto.encoding import DEFAULT_M

Number = Union[int, Fraction]


@dataclass(frozen=True)
class RationalLP:
    A: tuple  # rows of Fractions/ints
    b: tuple

    @classmethod
    def of(cls, A: Sequence[Sequence[Number]], b: Sequence[Number]) -> "RationalLP":
        if len(A) != len(b):
            raise ValueError("row count mismatch")
        width = len(A[0]) if A else 0
        if any(len(r) != width for r in A):
            raise ValueError("ragged matrix")
        return cls(tuple(tuple(Fraction(x) for x in r) for r in A), tuple(Fraction(x) for x in b))

    @property
    def nvars(self) -> int:
        return len(self.A[0]) if self.A else 0


@dataclass(frozen=True)
class Sat:
    point: tuple


@dataclass(frozen=True)
class Unsat:
    ray: tuple  # y >= 0, one entry per row


def _integerize(A, b):
    """Scale each row by the lcm of its denominators."""
    rows, rhs = [], []
    for r, bi in zip(A, b):
        d = 1
        for x in list(r) + [bi]:
            d = lcm(d, Fraction(x).denominator)
        rows.append([int(Fraction(x) * d) for x in r])
        rhs.append(int(Fraction(bi) * d))
    return rows, rhs


def _phase1(M: list[list[int]], rhs: list[int]):
    """Feasibility of M z = rhs, z >= 0 (integers). Returns (z or None, pi, sgn)."""
    m = len(M)
    nz = len(M[0]) if m else 0
    sgn = [1 if v >= 0 else -1 for v in rhs]
    width = nz + m + 1  # structural, artificial, rhs
    T = []
    for i in range(m):
        row = [sgn[i] * v for v in M[i]] + [0] * m + [sgn[i] * rhs[i]]
        row[nz + i] = 1
        T.append(row)
    # reduced-cost row for min sum(art): c - 1^T T
    obj = [0] * width
    for j in range(nz):
        obj[j] = -sum(T[i][j] for i in range(m))
    obj[-1] = -sum(T[i][-1] for i in range(m))
    T.append(obj)
    basis = [nz + i for i in range(m)]
    D = 1
    while True:
        ob = T[m]
        enter = next((j for j in range(nz + m) if ob[j] < 0), None)
        if enter is None:
            break
        best = None
        for i in range(m):
            a = T[i][enter]
            if a > 0:
                # ratio T[i][rhs]/a; compare by cross-multiplication
                if best is None:
                    best = i
                else:
                    lhs = T[i][-1] * T[best][enter]
                    rhs_ = T[best][-1] * a
                    if lhs < rhs_ or (lhs == rhs_ and basis[i] < basis[best]):
                        best = i
        if best is None:  # cannot happen for phase one (bounded below by 0)
            raise AssertionError("unbounded phase-one problem")
        r = best
        p = T[r][enter]
        prow = T[r]
        for i in range(m + 1):
            if i == r:
                continue
            row = T[i]
            f = row[enter]
            new = []
            for x, y in zip(row, prow):
                q, rem = divmod(x * p - f * y, D)
                if rem:
                    raise AssertionError("inexact pivot")
                new.append(q)
            T[i] = new
        D = p
        if D < 0:
            T = [[-x for x in row] for row in T]
            D = -D
        basis[r] = enter
    opt_num = -T[m][-1]  # objective value * D
    # duals: pi_i = c_art - reduced cost of art_i
    pi = [Fraction(D - T[m][nz + i], D) for i in range(m)]
    if opt_num == 0:
        z = [Fraction(0)] * (nz + m)
        for i, bv in enumerate(basis):
            z[bv] = Fraction(T[i][-1], D)
        return z[:nz], pi, sgn
    return None, pi, sgn


def feasible(lp: RationalLP | tuple) -> Sat | Unsat:
    if isinstance(lp, tuple):
        lp = RationalLP.of(*lp)
    A, b = lp.A, lp.b
    m, n = len(A), lp.nvars
    if m == 0:
        return Sat(tuple(Fraction(0) for _ in range(n)))
    rows, rhs = _integerize(A, b)
    M = [r + [-x for x in r] + [1 if k == i else 0 for k in range(m)] for i, r in enumerate(rows)]
    z, pi, sgn = _phase1(M, rhs)
    if z is not None:
        x = tuple(z[j] - z[n + j] for j in range(n))
        for r, bi in zip(A, b):
            assert sum(a * xi for a, xi in zip(r, x)) <= bi, "point fails substitution"
        return Sat(x)
    # ray on the integerized rows, then mapped back to the original rows
    y_int = [-pi[i] * sgn[i] for i in range(m)]
    scale = []
    for r, bi in zip(A, b):
        d = 1
        for v in list(r) + [bi]:
            d = lcm(d, Fraction(v).denominator)
        scale.append(d)
    y = tuple(y_int[i] * scale[i] for i in range(m))
    _check_ray(A, b, y)
    return Unsat(y)


def _check_ray(A, b, y) -> None:
    assert all(v >= 0 for v in y), "ray has a negative entry"
    n = len(A[0]) if A else 0
    for j in range(n):
        assert sum(y[i] * A[i][j] for i in range(len(A))) == 0, "ray is not in the left kernel"
    assert sum(yi * bi for yi, bi in zip(y, b)) < 0, "ray does not certify infeasibility"


def scale_ray(ray: Sequence[Number]) -> list[int]:
    """Smallest positive integer multiple of a rational ray."""
    fr = [Fraction(v) for v in ray]
    d = 1
    for v in fr:
        d = lcm(d, v.denominator)
    ints = [int(v * d) for v in fr]
    g = 0
    for v in ints:
        g = gcd(g, v)
    return [v // g for v in ints] if g > 1 else ints


class NoWitness(Exception):
    """The primal system is satisfiable: the certificate does not discharge this obligation."""

    def __init__(self, point):
        super().__init__("obligation primal system is satisfiable")
        self.point = point


class BoundExceeded(Exception):
    pass


@dataclass(frozen=True)
class FarkasWitness:
    lam: tuple
    mu: tuple
    slack: int

    def check(self, A_s, b_s, G_p, h_p, M: int = DEFAULT_M) -> bool:
        """Exact integer re-substitution of the witness obligation."""
        if any(v < 0 or v > M for v in self.lam + self.mu):
            return False
        if not 0 <= self.slack <= M:
            return False
        width = len(A_s[0]) if A_s else (len(G_p[0]) if G_p else 0)
        for j in range(width):
            s = sum(self.lam[i] * A_s[i][j] for i in range(len(A_s)))
            s += sum(self.mu[i] * G_p[i][j] for i in range(len(G_p)))
            if s != 0:
                return False
        sl = -sum(l * b for l, b in zip(self.lam, b_s)) - sum(u * h for u, h in zip(self.mu, h_p)) - 1
        return sl == self.slack


def farkas_witness_raw(A_s, b_s, G_p, h_p, M: int = DEFAULT_M) -> FarkasWitness:
    res = feasible(RationalLP.of(list(A_s) + list(G_p), list(b_s) + list(h_p)))
    if isinstance(res, Sat):
        raise NoWitness(res.point)
    y = scale_ray(res.ray)
    lam, mu = tuple(y[: len(A_s)]), tuple(y[len(A_s):])
    slack = -sum(l * b for l, b in zip(lam, b_s)) - sum(u * h for u, h in zip(mu, h_p)) - 1
    w = FarkasWitness(lam, mu, slack)
    if max(y, default=0) > M or slack > M:
        raise BoundExceeded(f"witness entries exceed M = {M}")
    assert w.check(A_s, b_s, G_p, h_p, M)
    return w


def farkas_witness(ob, M: int = DEFAULT_M) -> FarkasWitness:
    return farkas_witness_raw(ob.A_s, ob.b_s, ob.G_p, ob.h_p, M)
