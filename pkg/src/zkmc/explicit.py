"""Public batch sets, field embeddings and secret membership polynomials.

States embed into the coset D1 = 7*H_{N1} and state pairs into the subgroup
D2 = H_{N2}. 7 generates the multiplicative group, so it lies in no
power-of-two subgroup and the two domains never meet.
"""
from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache

from .crypto import field as F
from .crypto.field import GENERATOR, R
from .model import INF, BuchiSpec, ExplicitRanking, ExplicitSystem, v_le, v_lt

MAX_LOG_DOMAIN = F.TWO_ADICITY


class DomainOverflow(ValueError):
    pass


def _pow2(n: int) -> int:
    return 1 << max(0, (n - 1).bit_length())


@dataclass(frozen=True)
class Domain:
    size: int
    shift: int
    omega: int

    def point(self, i: int) -> int:
        return self.shift * pow(self.omega, i, R) % R

    def points(self) -> list[int]:
        out, x = [], self.shift
        for _ in range(self.size):
            out.append(x)
            x = x * self.omega % R
        return out

    def vanishing(self) -> list[int]:
        """Z_D(X) = X^N - shift^N."""
        return [(-pow(self.shift, self.size, R)) % R] + [0] * (self.size - 1) + [1]


@dataclass(frozen=True)
class Embedding:
    nstates: int
    D1: Domain
    D2: Domain

    def e1(self, s: int) -> int:
        return self.D1.point(s)

    def e2(self, s: int, t: int) -> int:
        return self.D2.point(s * self.nstates + t)

    def params(self) -> bytes:
        return f"emb:{self.nstates}:{self.D1.size}:{self.D1.shift}:{self.D2.size}:{self.D2.shift}".encode()


@lru_cache(maxsize=32)
def build_embedding(nstates: int) -> Embedding:
    if nstates < 1:
        raise ValueError("empty state space")
    n1, n2 = _pow2(nstates), _pow2(nstates * nstates)
    if n2.bit_length() - 1 > MAX_LOG_DOMAIN:
        raise DomainOverflow(f"{nstates} states need a pair domain of size {n2}")
    return Embedding(nstates, Domain(n1, GENERATOR, F.root_of_unity(n1)), Domain(n2, 1, F.root_of_unity(n2)))


@dataclass(frozen=True)
class BatchSets:
    B_init: tuple
    B_step: tuple
    B_fair: tuple
    E_init: tuple
    E_step: tuple
    E_fair: tuple

    @property
    def total(self) -> int:
        return len(self.E_init) + len(self.E_step) + len(self.E_fair)

    def trans_points(self) -> list[int]:
        """E_step union E_fair, deduplicated, in a fixed order."""
        return sorted(set(self.E_step) | set(self.E_fair))

    def to_json(self) -> dict:
        hx = lambda xs: [format(x, "064x") for x in sorted(xs)]
        return {"E_init": hx(self.E_init), "E_step": hx(self.E_step), "E_fair": hx(self.E_fair)}


def enumerate_batches(nstates: int, labels, spec: BuchiSpec, V: ExplicitRanking,
                      emb: Embedding | None = None) -> BatchSets:
    """The hypothetical initial states and transitions that would break the ranking.

    Uses only public data: the state count, the labeling, the automaton and V.
    """
    emb = emb or build_embedding(nstates)
    qs = list(spec.states)
    b_init = sorted(s for s in range(nstates) if any(V.at(s, q) is INF for q in spec.init))
    # values per automaton state as sortable keys so each (s,q) needs one pass
    col = {q: [V.at(t, q) for t in range(nstates)] for q in qs}
    step, fair = set(), set()
    moves_cache: dict = {}
    for s in range(nstates):
        letter = labels[s]
        for q in qs:
            v = V.at(s, q)
            if v is INF:
                continue
            key = (q, letter)
            if key not in moves_cache:
                moves_cache[key] = spec.moves(q, letter)
            for q2, is_fair in moves_cache[key]:
                c = col[q2]
                for t in range(nstates):
                    w = c[t]
                    if v_lt(v, w):
                        step.add((s, t))
                    if is_fair and v_le(v, w):
                        fair.add((s, t))
    b_step, b_fair = sorted(step), sorted(fair)
    return BatchSets(tuple(b_init), tuple(b_step), tuple(b_fair),
                     tuple(emb.e1(s) for s in b_init),
                     tuple(emb.e2(s, t) for s, t in b_step),
                     tuple(emb.e2(s, t) for s, t in b_fair))


def batches_for(sys: ExplicitSystem, spec: BuchiSpec, V: ExplicitRanking) -> BatchSets:
    return enumerate_batches(sys.size, sys.labels, spec, V)


@dataclass(frozen=True)
class MembershipPolys:
    p_S0: tuple
    p_T: tuple
    r_S0: int
    r_T: int


def indicator_poly(domain: Domain, ones) -> list[int]:
    vals = [0] * domain.size
    for i in ones:
        vals[i] = 1
    return F.ntt(vals, domain.size, shift=domain.shift, inverse=True)


def build_membership_polys(sys: ExplicitSystem, emb: Embedding, rng) -> MembershipPolys:
    if sys.size != emb.nstates:
        raise ValueError("embedding does not cover the system")
    n = emb.nstates
    p0 = indicator_poly(emb.D1, sorted(sys.init))
    pt = indicator_poly(emb.D2, sorted(s * n + t for s, t in sys.transitions))
    return MembershipPolys(tuple(p0), tuple(pt), rng.randrange(R), rng.randrange(R))


def plaintext_disjointness(sys: ExplicitSystem, batches: BatchSets) -> bool:
    """Prover pre-flight: the secret system avoids every batch."""
    if set(sys.init) & set(batches.B_init):
        return False
    T = sys.transitions
    return not any(p in T for p in batches.B_step) and not any(p in T for p in batches.B_fair)
