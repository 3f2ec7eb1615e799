"""Proof obligations of a piecewise-linear ranking certificate.

Each obligation is an implication "secret system and public premise imply the
public consequent", stored as the primal system (A_s, b_s | G_p, h_p) whose
infeasibility is the obligation. Columns always span [x, x'].
"""
from __future__ import annotations

import json
from dataclasses import dataclass
from typing import Optional

from .model import BuchiSpec, LinSys, PiecewiseRanking, SymbolicSystem, sigma_to_polyhedron

KINDS = ("init", "finiteness", "rank")


@dataclass(frozen=True)
class Obligation:
    kind: str
    secret: LinSys       # (A_s, b_s)
    premise: LinSys      # (C_p, d_p)
    consequent: LinSys   # (E_p, f_p): the negated consequent rows
    command: int         # -1 for init
    trans: Optional[tuple]  # (q, letter, q', fair) or None for init
    cases: tuple         # (j, k) or (k,) for init; ("q", k) style provenance
    q0: Optional[str] = None

    @property
    def A_s(self):
        return self.secret.A

    @property
    def b_s(self):
        return self.secret.b

    @property
    def public(self) -> LinSys:
        return self.premise.stack(self.consequent)

    @property
    def G_p(self):
        return self.premise.A + self.consequent.A

    @property
    def h_p(self):
        return self.premise.b + self.consequent.b

    @property
    def width(self) -> int:
        return self.secret.width

    def public_json(self) -> dict:
        t = None
        if self.trans is not None:
            q, s, q2, f = self.trans
            t = [q, sorted(s), q2, f]
        return {"kind": self.kind, "command": self.command, "trans": t, "cases": list(self.cases),
                "q0": self.q0, "G_p": [list(r) for r in self.G_p], "h_p": list(self.h_p),
                "premise_rows": len(self.premise), "width": self.width}

    def public_key(self) -> bytes:
        return json.dumps(self.public_json(), sort_keys=True).encode()


def _trans_list(spec: BuchiSpec):
    return spec.expanded()


def gen_init(sys: SymbolicSystem, spec: BuchiSpec, rk: PiecewiseRanking) -> list[Obligation]:
    n = sys.nvars
    secret = sys.init.pad(0, n)
    out = []
    for q in spec.states:
        if q not in spec.init:
            continue
        for k, inf in enumerate(rk.at(q).infinite):
            out.append(Obligation("init", secret, LinSys.empty(2 * n), inf.E.pad(0, n), -1, None, (k,), q))
    return out


def _premise(spec, sigma, C, n) -> LinSys:
    return sigma_to_polyhedron(spec, sigma, n).stack(C).pad(0, n)


def gen_finiteness(sys: SymbolicSystem, spec: BuchiSpec, rk: PiecewiseRanking) -> list[Obligation]:
    n = sys.nvars
    out = []
    for i, cmd in enumerate(sys.commands):
        for (q, sigma, q2, fair) in _trans_list(spec):
            for j, fc in enumerate(rk.at(q).finite):
                prem = _premise(spec, sigma, fc.C, n)
                for k, inf in enumerate(rk.at(q2).infinite):
                    out.append(Obligation("finiteness", cmd.rel, prem, inf.E.pad(n, 0), i,
                                          (q, sigma, q2, fair), (j, k)))
    return out


def gen_rank(sys: SymbolicSystem, spec: BuchiSpec, rk: PiecewiseRanking) -> list[Obligation]:
    n = sys.nvars
    out = []
    for i, cmd in enumerate(sys.commands):
        for (q, sigma, q2, fair) in _trans_list(spec):
            for j, cj in enumerate(rk.at(q).finite):
                base = _premise(spec, sigma, cj.C, n)
                for k, ck in enumerate(rk.at(q2).finite):
                    prem = base.stack(ck.C.pad(n, 0))
                    row = tuple(cj.w) + tuple(-v for v in ck.w)
                    bound = ck.u - cj.u + (1 if fair else 0) - 1
                    cons = LinSys.of([row], [bound], 2 * n)
                    out.append(Obligation("rank", cmd.rel, prem, cons, i, (q, sigma, q2, fair), (j, k)))
    return out


def generate(sys: SymbolicSystem, spec: BuchiSpec, rk: PiecewiseRanking) -> list[Obligation]:
    """All obligations, ordered by (kind, command, transition, j, k)."""
    return gen_init(sys, spec, rk) + gen_finiteness(sys, spec, rk) + gen_rank(sys, spec, rk)


def count(spec: BuchiSpec, rk: PiecewiseRanking, sys_or_n) -> tuple[int, dict]:
    n = sys_or_n if isinstance(sys_or_n, int) else len(sys_or_n.commands)
    m = {q: len(rk.at(q).finite) for q in spec.states}
    l = {q: len(rk.at(q).infinite) for q in spec.states}
    init = sum(l[q] for q in spec.init)
    delta = _trans_list(spec)
    fin = n * sum(m[q] * l[q2] for q, _, q2, _ in delta)
    rank = n * sum(m[q] * m[q2] for q, _, q2, _ in delta)
    return init + fin + rank, {"init": init, "finiteness": fin, "rank": rank}


def count_uniform(l: int, q0: int, n: int, m: int, delta: int) -> int:
    """The closed form with one m and l shared by all automaton states."""
    return l * q0 + n * m * l * delta + n * m * m * delta
