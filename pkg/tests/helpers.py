"""Random instance generators shared by the test modules."""
from __future__ import annotations

import random
from fractions import Fraction

from zkmc.model import INF, BuchiSpec, BuchiTrans, ExplicitRanking, ExplicitSystem, Letter
from zkmc.oracle import canonical_ranking

P = Letter({"p"})
NP = Letter()


def spec_pool() -> list[BuchiSpec]:
    """Small automata over one proposition p."""
    return [
        # eventually always p
        BuchiSpec(("q0", "q1"), frozenset({"q0"}), ("p",),
                  (BuchiTrans("q0", None, "q0"), BuchiTrans("q0", P, "q1"), BuchiTrans("q1", P, "q1", True))),
        # infinitely often p
        BuchiSpec(("q0",), frozenset({"q0"}), ("p",),
                  (BuchiTrans("q0", P, "q0", True), BuchiTrans("q0", NP, "q0"))),
        # p then infinitely often not p
        BuchiSpec(("a", "b", "c"), frozenset({"a"}), ("p",),
                  (BuchiTrans("a", P, "b"), BuchiTrans("b", None, "b"), BuchiTrans("b", NP, "c", True),
                   BuchiTrans("c", None, "b"))),
    ]


def random_explicit(rng: random.Random, max_states: int = 64):
    n = rng.choice([rng.randint(1, 8), rng.randint(1, 16), rng.randint(1, max_states)])
    labels = tuple(P if rng.random() < 0.5 else NP for _ in range(n))
    density = rng.choice([0.05, 0.15, 0.3])
    T = {(a, b) for a in range(n) for b in range(n) if rng.random() < density / max(1, n / 8)}
    # keep it total-ish so runs exist
    for a in range(n):
        if rng.random() < 0.8 and not any(t[0] == a for t in T):
            T.add((a, rng.randrange(n)))
    init = frozenset(rng.sample(range(n), rng.randint(1, min(3, n))))
    sys_ = ExplicitSystem(tuple(f"s{i}" for i in range(n)), init, frozenset(T), labels)
    return sys_, rng.choice(spec_pool())


def random_ranking(rng: random.Random, sys_: ExplicitSystem, spec: BuchiSpec) -> ExplicitRanking:
    """A canonical certificate, a perturbed one, or noise, in roughly equal parts."""
    base = canonical_ranking(sys_, spec)
    mode = rng.randrange(3)
    if mode == 0 and base is not None:
        return base
    qn = tuple(spec.states)
    if mode == 1 and base is not None:
        rows = [list(r) for r in base.values]
        for _ in range(rng.randint(1, 3)):
            s, k = rng.randrange(sys_.size), rng.randrange(len(qn))
            rows[s][k] = rng.choice([INF, 0, rng.randint(0, 6)])
        return ExplicitRanking(qn, tuple(tuple(r) for r in rows))
    top = rng.randint(0, 6)
    return ExplicitRanking(qn, tuple(tuple(INF if rng.random() < 0.2 else rng.randint(0, top) for _ in qn)
                                     for _ in range(sys_.size)))


# ---------------------------------------------------------------- symbolic

def random_symbolic_text(rng: random.Random) -> str:
    """A one- or two-variable program and an automaton for 'eventually always p'; ranking comes separately."""
    nv = rng.choice([1, 1, 2])
    names = ["x", "y"][:nv]
    K = [rng.randint(2, 6) for _ in names]
    lines = ["system {"]
    lines += [f"  var {v} : 0..{k};" for v, k in zip(names, K)]
    lines.append("  init: " + ", ".join(f"{v} = {rng.randint(0, k)}" for v, k in zip(names, K)) + ";")
    for i in range(rng.randint(1, 2)):
        v = rng.randrange(nv)
        x, k = names[v], K[v]
        kind = rng.randrange(3)
        if kind == 0:
            d = rng.choice([-2, -1, 1])
            g = f"{x} >= {-d}" if d < 0 else f"{x} <= {k - d}"
            upd = f"{x}' = {x} {'-' if d < 0 else '+'} {abs(d)}"
        elif kind == 1:
            c = rng.randint(0, k)
            g, upd = f"{x} >= {rng.randint(0, k)}", f"{x}' = {c}"
        else:
            lo = rng.randint(0, k)
            g, upd = f"{x} <= {rng.randint(0, k)}", f"{x}' >= {lo}, {x}' <= {rng.randint(lo, k)}"
        if nv == 2 and rng.random() < 0.5:
            o = names[1 - v]
            upd += f", {o}' = {o}"
        lines.append(f"  command c{i}: guard {g} update {upd};")
    lines.append("}")
    t = rng.randint(0, K[0])
    lines += ["automaton {", "  states: q0, q1;", "  initial: q0;", "  aps:", f"    p := x >= {t};",
              "  trans:", "    q0 -- true --> q0;", "    q0 -- {p} --> q1;", "    q1 -- {p} --> q1 fair;", "}"]
    return "\n".join(lines) + "\n", K[0], t


def ranking_text(a: int, u: int, low: str, K: int, t: int, c0: int = 0) -> str:
    """q0 is c0*x + big; q1 is a*x + u on the p region and `low` elsewhere.

    Obligations range over all integers, not the declared ranges, so the
    q0 slope matters when updates can grow x.
    """
    big = abs(a) * K + u + 1
    q0 = f"{c0}*x + {big}" if c0 else str(big)
    out = ["ranking {", "  at q0:", f"    case x >= 0 -> {q0};", f"    case x <= -1 -> {big};", "  at q1:"]
    if a < 0:
        out.append(f"    case x >= {t}, x <= {K} -> {a}*x + {u};")
        out.append(f"    case x >= {K + 1} -> 0;")
    else:
        out.append(f"    case x >= {t} -> {a}*x + {u};")
    out.append(f"    case x <= {t - 1} -> {big if low == 'big' else low};")
    out.append("}")
    return "\n".join(out) + "\n"


def ranking_candidates(rng: random.Random, K: int, t: int) -> list[str]:
    cands = []
    for a in rng.sample([-1, 0, 1, 2], 4):
        u = rng.randint(0, 2) + max(0, -a) * K
        cands.append(ranking_text(a, u, rng.choice(["0", "big", "inf"]), K, t, rng.choice([0, 1, 2])))
    return cands


def random_symbolic_unit(rng: random.Random, M: int):
    """(text, unit, obligations, witnesses or None); the first candidate that discharges wins."""
    from zkmc.lang import parse
    from zkmc.lp import BoundExceeded, NoWitness, farkas_witness
    from zkmc.model import check_wellformedness
    from zkmc.obligations import generate
    body, K, t = random_symbolic_text(rng)
    last = None
    for rk_text in ranking_candidates(rng, K, t):
        text = body + rk_text
        u = parse(text, M)
        s, sp, rk = u.triple()
        obs = generate(s, sp, rk)
        last = (text, u, obs, None)
        if not check_wellformedness(rk, sp).ok:
            continue
        try:
            wits = [farkas_witness(o, M) for o in obs]
        except (NoWitness, BoundExceeded):
            continue
        return text, u, obs, wits
    return last


# ---------------------------------------------------------------- Fourier-Motzkin

def fm_feasible(A, b) -> bool:
    """Rational feasibility of A x <= b by Fourier-Motzkin elimination."""
    rows = [([Fraction(v) for v in r], Fraction(c)) for r, c in zip(A, b)]
    n = len(A[0]) if A else 0
    for k in range(n):
        pos = [r for r in rows if r[0][k] > 0]
        neg = [r for r in rows if r[0][k] < 0]
        rest = [r for r in rows if r[0][k] == 0]
        for (pa, pb), (na, nb) in ((p, q) for p in pos for q in neg):
            s, t = -na[k], pa[k]
            rest.append(([s * x + t * y for x, y in zip(pa, na)], s * pb + t * nb))
        rows = _dedup(rest)
    return all(c >= 0 for _, c in rows)


def _dedup(rows):
    seen, out = set(), []
    for r, c in rows:
        scale = max([abs(v) for v in r] + [abs(c), Fraction(1)])
        key = (tuple(v / scale for v in r), c / scale)
        if key not in seen:
            seen.add(key)
            out.append((r, c))
    return out


__all__ = ["spec_pool", "random_explicit", "random_ranking", "random_symbolic_text", "fm_feasible"]
