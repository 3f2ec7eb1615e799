"""Bundled models: the explicit handshake family and the symbolic handshake.

exb(d, a) is the handshake with a retries and a base delay of d ticks. Wait
states carry (done, delay) with done < a and delay < d * 2^a; the other three
locations carry the same two counters but never change them.
"""
from __future__ import annotations

from importlib import resources
from itertools import product

from .model import INF, BuchiSpec, BuchiTrans, ExplicitRanking, ExplicitSystem, Letter

EXHAUSTED, ESTABLISHED, CLOSED, WAIT = range(4)
LOC_NAMES = ("Exhausted", "Established", "Closed", "Wait")


def never_wait_forever() -> BuchiSpec:
    """Automaton for the negation of "never wait forever": eventually always wait."""
    w = Letter({"wait"})
    return BuchiSpec(("q0", "q1"), frozenset({"q0"}), ("wait",),
                     (BuchiTrans("q0", None, "q0"), BuchiTrans("q0", w, "q1"),
                      BuchiTrans("q1", w, "q1", True)))


def _space(ndone: int, ndelay: int):
    states = list(product(range(4), range(ndone), range(ndelay)))
    index = {s: i for i, s in enumerate(states)}
    names = tuple(f"{LOC_NAMES[l]}({k},{y})" for l, k, y in states)
    labels = tuple(Letter({"wait"}) if l == WAIT else Letter() for l, _, _ in states)
    return states, index, names, labels


def exb(d: int, a: int) -> tuple[ExplicitSystem, BuchiSpec, ExplicitRanking]:
    """|S| = 4 * a * d * 2^a states with a ranking certificate for never-wait-forever."""
    if d < 1 or a < 2:
        raise ValueError("exb needs d >= 1 and a >= 2")
    D = d << a
    states, index, names, labels = _space(a, D)
    T = set()
    for (l, k, y), i in index.items():
        if l in (EXHAUSTED, ESTABLISHED, CLOSED):
            T.add((i, i))
        if l == CLOSED:
            T.update((i, index[(WAIT, 0, y2)]) for y2 in range(2 * d))
        if l == WAIT:
            T.add((i, index[(ESTABLISHED, k, y)]))
            if y > 0:
                T.add((i, index[(WAIT, k, y - 1)]))
            elif k < a - 1:
                T.update((i, index[(WAIT, k + 1, y2)]) for y2 in range(d << (k + 2)))
            else:
                T.add((i, index[(EXHAUSTED, k, 0)]))
    sys_ = ExplicitSystem(names, frozenset({index[(CLOSED, 0, 0)]}), frozenset(T), labels)
    W = a * D
    kappa = a * d * (1 << (a - 2)) + 1
    vals = []
    for l, k, y in states:
        if l == WAIT:
            v1 = D * (a - 1 - k) + y + 1
        elif l == CLOSED:
            v1 = kappa
        else:
            v1 = 0
        vals.append((W, v1))
    return sys_, never_wait_forever(), ExplicitRanking(("q0", "q1"), tuple(vals))


def exb_name(d: int, a: int) -> str:
    return f"exb_i{d}a{a}"


def handshake_explicit() -> tuple[ExplicitSystem, BuchiSpec, ExplicitRanking]:
    """The 4 x 4 x 256 handshake with its hand-written ranking table."""
    states, index, names, labels = _space(4, 256)
    T = set()
    for (l, k, y), i in index.items():
        if l in (EXHAUSTED, ESTABLISHED, CLOSED):
            T.add((i, i))
        if l == CLOSED:
            T.update((i, index[(WAIT, 0, y2)]) for y2 in range(64))
        if l == WAIT:
            T.add((i, index[(ESTABLISHED, k, y)]))
            if k == 3:
                T.add((i, i))   # retries exhausted but still waiting: never taken from init
            elif y > 0:
                T.add((i, index[(WAIT, k, y - 1)]))
            elif k < 2:
                T.update((i, index[(WAIT, k + 1, y2)]) for y2 in range(128 + 128 * k))
            else:
                T.add((i, index[(EXHAUSTED, 3, 0)]))
    sys_ = ExplicitSystem(names, frozenset({index[(CLOSED, 0, 0)]}), frozenset(T), labels)
    vals = []
    for l, k, y in states:
        if l == WAIT and k == 3:
            vals.append((INF, INF))
        elif l == WAIT:
            vals.append((768, 513 - 256 * k + y))
        elif l == CLOSED:
            vals.append((768, 768))
        else:
            vals.append((768, 0))
    return sys_, never_wait_forever(), ExplicitRanking(("q0", "q1"), tuple(vals))


def handshake_small():
    """The bundled 32-state explicit handshake (exb with d = 1, a = 2) as shipped on disk."""
    from .lang import parse_explicit
    text = resources.files("zkmc.models").joinpath("handshake_small.zkx.json").read_text()
    return parse_explicit(text).triple()


def handshake_symbolic_text() -> str:
    return resources.files("zkmc.models").joinpath("handshake.zkgc").read_text()


def handshake_symbolic(M: int | None = None):
    from .lang import parse
    unit = parse(handshake_symbolic_text()) if M is None else parse(handshake_symbolic_text(), M)
    return unit.triple()


def scaled_handshake_text(delay_bits: int) -> str:
    """The symbolic handshake with the delay range set to [0, 2^delay_bits].

    Only the declared range changes; commands and ranking are untouched, so the
    obligation set is identical.
    """
    text = handshake_symbolic_text()
    return text.replace("var delay : 0..255;", f"var delay : 0..{1 << delay_bits};")
