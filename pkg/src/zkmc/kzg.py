"""KZG commitments with full-domain hiding, specialised to vanishing proofs.

A committed polynomial is p~ = p + r * Z_D. Since every evaluation set E lies
inside D, Z_E divides Z_D and p~ vanishes on E exactly when p does, so one
G1 element (the quotient commitment) proves vanishing on all of E.
"""
from __future__ import annotations

import random
from dataclasses import dataclass
from typing import Optional, Sequence

from .crypto import field as F
from .crypto import group as grp
from .crypto.field import R
from .crypto.wire import Reader, Writer

MAGIC = b"ZKRS"
QUOTIENT_SHIFT = 49  # 7^2: outside every power-of-two subgroup and off the 7-coset


class SetupError(ValueError):
    pass


class DegreeOverflow(ValueError):
    pass


class NonZeroRemainder(ValueError):
    """The committed polynomial does not vanish on the evaluation set."""


@dataclass(frozen=True)
class SRS:
    g1s: tuple        # g^(tau^i), i = 0..t
    g2s: tuple        # g'^(tau^i), i = 0..t2
    insecure: bool = False
    tau: Optional[int] = None

    @property
    def t(self) -> int:
        return len(self.g1s) - 1

    @property
    def t2(self) -> int:
        return len(self.g2s) - 1

    def check(self, samples: int = 4, rng=None) -> bool:
        """Pairing spot-check of the power structure at a few random indices."""
        rng = rng or random.Random(0)
        g2, g2tau = self.g2s[0], self.g2s[1]
        for _ in range(samples):
            i = rng.randrange(1, self.t + 1)
            if grp.pairing(self.g1s[i], g2) != grp.pairing(self.g1s[i - 1], g2tau):
                return False
        if self.t2 >= 2:
            for _ in range(samples):
                i = rng.randrange(1, self.t2 + 1)
                if grp.pairing(self.g1s[0], self.g2s[i]) != grp.pairing(self.g1s[1], self.g2s[i - 1]):
                    return False
        return self.g1s[0] == grp.g1() and g2 == grp.g2()

    def digest(self) -> bytes:
        return grp.digest(b"kzg-srs", str(self.t).encode(), str(self.t2).encode(),
                          self.g1s[1].serialize(), self.g1s[-1].serialize(), self.g2s[-1].serialize())

    def to_bytes(self) -> bytes:
        w = Writer(MAGIC).u8(1 if self.insecure else 0).g1s(self.g1s).u32(len(self.g2s))
        for p in self.g2s:
            w.g2(p)
        if self.insecure:
            w.scalar(self.tau)
        return w.done()

    @classmethod
    def from_bytes(cls, data: bytes, allow_insecure: bool = False) -> "SRS":
        r = Reader(data, MAGIC)
        insecure = bool(r.u8())
        if insecure and not allow_insecure:
            raise SetupError("refusing an SRS produced by an insecure setup")
        g1s = tuple(r.g1s())
        g2s = tuple(r.g2() for _ in range(r.u32()))
        tau = r.scalar() if insecure else None
        r.end()
        if len(g1s) < 2 or len(g2s) < 2:
            raise SetupError("SRS too short")
        return cls(g1s, g2s, insecure, tau)


def _powers(base, tau: int, n: int) -> tuple:
    out, a = [], 1
    for _ in range(n + 1):
        out.append(grp.smul(base, a))
        a = a * tau % R
    return tuple(out)


def setup(t: int, t2: Optional[int] = None, rng=None, insecure: bool = False) -> SRS:
    """Powers of a fresh tau; tau is forgotten unless insecure is set."""
    import secrets
    rng = rng or secrets.SystemRandom()
    t2 = max(1, t if t2 is None else t2)
    tau = rng.randrange(2, R)
    return SRS(_powers(grp.g1(), tau, max(t, 1)), _powers(grp.g2(), tau, t2), insecure, tau if insecure else None)


def hide(p: Sequence[int], domain, r: int) -> list[int]:
    """p + r * Z_D for the domain D (any object with size and shift)."""
    if F.degree(p) >= domain.size:
        raise DegreeOverflow(f"degree {F.degree(p)} not below domain size {domain.size}")
    out = [c % R for c in p] + [0] * (domain.size + 1 - len(p))
    out[0] = (out[0] - r * pow(domain.shift, domain.size, R)) % R
    out[domain.size] = (out[domain.size] + r) % R
    return out


def commit(srs: SRS, coeffs: Sequence[int]):
    coeffs = F.trim([c % R for c in coeffs])
    if len(coeffs) > len(srs.g1s):
        raise DegreeOverflow(f"degree {len(coeffs) - 1} exceeds SRS degree {srs.t}")
    if not coeffs:
        return grp.G1()
    return grp.msm(list(srs.g1s[: len(coeffs)]), coeffs)


def commit_hiding(srs: SRS, p: Sequence[int], domain, r: int):
    return commit(srs, hide(p, domain, r))


def vanishing_poly(E: Sequence[int]) -> list[int]:
    return F.from_roots(sorted(set(E)))


def quotient(pt: Sequence[int], E: Sequence[int]) -> list[int]:
    """(p~) / Z_E, raising NonZeroRemainder unless the division is exact."""
    pt = F.trim([c % R for c in pt])
    E = sorted(set(E))
    if not E:
        return pt
    if not pt:
        return []
    n = 1
    while n < len(pt) + 1:
        n *= 2
    z = vanishing_poly(E)
    if len(z) > n:
        raise NonZeroRemainder("evaluation set larger than the polynomial degree")
    fp = F.ntt(pt, n, shift=QUOTIENT_SHIFT)
    fz = F.ntt(z, n, shift=QUOTIENT_SHIFT)
    q = F.ntt([a * b % R for a, b in zip(fp, F.batch_inv(fz))], n, shift=QUOTIENT_SHIFT, inverse=True)
    # an exact quotient has degree deg(p~) - |E|; anything else means a remainder
    if F.degree(q) > len(pt) - 1 - len(E):
        raise NonZeroRemainder("committed polynomial does not vanish on the evaluation set")
    return F.trim(q)


def prove_vanishing(srs: SRS, p: Sequence[int], r: int, domain, E: Sequence[int]):
    return commit(srs, quotient(hide(p, domain, r), E))


def verify_vanishing(srs: SRS, c, E: Sequence[int], proof) -> bool:
    E = sorted(set(E))
    z = vanishing_poly(E)
    if len(z) > len(srs.g2s):
        return False
    gz = grp.msm(list(srs.g2s[: len(z)]), z)
    return grp.pairing(c, srs.g2s[0]) == grp.pairing(proof, gz)
