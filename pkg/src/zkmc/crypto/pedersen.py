"""Pedersen commitments at three tiers: scalar and vector in G1, matrix in GT.

A matrix is committed column by column in G1 and the column commitments are
aggregated by pairing with per-column G2 elements. The blinding factor sits
in the first column, whose aggregator is the G2 generator, so the GT
blinding base is e(h, g').
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

from . import group as grp
from .field import R


class DimensionError(ValueError):
    pass


@dataclass(frozen=True)
class PedersenBases:
    g: grp.G1
    h: grp.G1
    gs: tuple            # vector bases g_1..g_n in G1
    cols: tuple          # per-column G2 aggregators g'_1..g'_n (cols[0] must be g')
    gprime: grp.G2

    @classmethod
    def nums(cls, n: int, ncols: int = 1, label: bytes = b"pedersen") -> "PedersenBases":
        """Bases from hash-to-curve on public labels; nobody knows their relations."""
        g = grp.hash_to_g1(label + b"/g")
        h = grp.hash_to_g1(label + b"/h")
        gs = tuple(grp.hash_to_g1(label + b"/g/%d" % i) for i in range(n))
        gp = grp.g2()
        cols = (gp,) + tuple(grp.hash_to_g2(label + b"/col/%d" % j) for j in range(1, ncols))
        return cls(g, h, gs, cols, gp)

    @property
    def hhat(self) -> grp.GT:
        return grp.pairing(self.h, self.gprime)


@dataclass(frozen=True)
class Commitment:
    point: object
    tier: str  # "scalar" | "vector" | "matrix"

    def __mul__(self, other: "Commitment") -> "Commitment":
        if self.tier == "matrix" or other.tier == "matrix":
            if self.tier != other.tier:
                raise TypeError("cannot combine matrix with G1 commitment")
            return Commitment(self.point * other.point, "matrix")
        tier = self.tier if self.tier == other.tier else "vector"
        return Commitment(self.point + other.point, tier)

    def to_bytes(self) -> bytes:
        return self.point.serialize()


def commit_scalar(pb: PedersenBases, v: int, r: int) -> Commitment:
    return Commitment(grp.msm_or([pb.g, pb.h], [v, r], grp.G1()), "scalar")


def commit_vector(pb: PedersenBases, v: Sequence[int], r: int) -> Commitment:
    if len(v) > len(pb.gs):
        raise DimensionError(f"vector length {len(v)} exceeds {len(pb.gs)} bases")
    return Commitment(grp.msm(list(pb.gs[: len(v)]) + [pb.h], [x % R for x in v] + [r]), "vector")


def column_commitments(pb: PedersenBases, A: Sequence[Sequence[int]], r: int) -> list:
    """Per-column G1 commitments; the randomness is folded into column 0."""
    m = len(A)
    n = len(A[0]) if m else 0
    if m > len(pb.gs) or n > len(pb.cols):
        raise DimensionError(f"matrix {m}x{n} exceeds bases")
    out = []
    for j in range(n):
        col = [A[i][j] % R for i in range(m)]
        pts = list(pb.gs[:m])
        if j == 0:
            col.append(r)
            pts.append(pb.h)
        out.append(grp.msm(pts, col))
    return out


def commit_matrix(pb: PedersenBases, A: Sequence[Sequence[int]], r: int) -> Commitment:
    cols = column_commitments(pb, A, r)
    acc = grp.GT()
    for j, c in enumerate(cols):
        acc = acc * grp.pairing(c, pb.cols[j])
    if not cols:
        acc = grp.pairing(grp.smul(pb.h, r), pb.gprime)
    return Commitment(acc, "matrix")


def verify_opening(pb: PedersenBases, c: Commitment, payload, r: int) -> bool:
    if c.tier == "scalar":
        return commit_scalar(pb, payload, r).point == c.point
    if c.tier == "vector":
        return commit_vector(pb, payload, r).point == c.point
    return commit_matrix(pb, payload, r).point == c.point
