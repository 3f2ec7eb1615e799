"""Certifier input language (.zkgc) and explicit-graph interchange (.zkx.json).

A unit has three blocks::

    system {
      var x : 0..7;
      init: x = 0;
      command inc: guard x <= 6 update x' = x + 1;
    }
    automaton {
      states: q0, q1;
      initial: q0;
      aps: low := x <= 3;
      trans:
        q0 -- true --> q0;
        q0 -- {low} --> q1;
        q1 -- {low} --> q1 fair;
    }
    ranking {
      at q0: case true -> 0;
      at q1: case x <= 3 -> 3 - x; case x >= 4 -> inf;
    }

Constraints are affine (in)equalities; `=` becomes two rows and strict
comparisons are rejected. In an update, a variable whose primed copy never
appears keeps its value unless it is listed after `havoc`.
"""
from __future__ import annotations

import json
import re
from dataclasses import dataclass, field
from typing import Optional

from .crypto.encoding import DEFAULT_M
from .model import (INF, BuchiSpec, BuchiTrans, Case, Command, ExplicitRanking, ExplicitSystem,
                    InfCase, Letter, LinSys, PiecewiseRanking, StateRanking, SymbolicSystem, Var)


@dataclass(frozen=True)
class Diagnostic:
    line: int
    col: int
    message: str
    expected: tuple = ()

    def __str__(self):
        s = f"{self.line}:{self.col}: {self.message}"
        if self.expected:
            s += " (expected " + " or ".join(self.expected) + ")"
        return s


class ParseError(ValueError):
    def __init__(self, diags: list):
        self.diagnostics = list(diags)
        super().__init__("; ".join(str(d) for d in diags))


@dataclass
class Unit:
    system: object
    spec: BuchiSpec
    ranking: object
    spans: dict = field(default_factory=dict, compare=False)

    def triple(self):
        return self.system, self.spec, self.ranking


# ---------------------------------------------------------------- lexer

_TOKEN = re.compile(r"""
    (?P<ws>[ \t\r]+) | (?P<nl>\n) | (?P<comment>\#[^\n]*)
  | (?P<int>\d+)
  | (?P<ident>[A-Za-z_][A-Za-z0-9_]*)
  | (?P<sym>-->|--|->|\.\.|:=|<=|>=|!=|[{}:;,'+\-*=<>])
""", re.VERBOSE)


@dataclass(frozen=True)
class Tok:
    kind: str
    text: str
    line: int
    col: int


def tokenize(text: str) -> list[Tok]:
    toks = []
    line, col0, i = 1, 0, 0
    while i < len(text):
        m = _TOKEN.match(text, i)
        if not m:
            raise ParseError([Diagnostic(line, i - col0 + 1, f"unexpected character {text[i]!r}")])
        kind = m.lastgroup
        if kind == "nl":
            line += 1
            col0 = m.end()
        elif kind not in ("ws", "comment"):
            toks.append(Tok(kind, m.group(), line, m.start() - col0 + 1))
        i = m.end()
    toks.append(Tok("eof", "", line, i - col0 + 1))
    return toks


# ---------------------------------------------------------------- parser

class _Parser:
    def __init__(self, text: str, M: int):
        self.toks = tokenize(text)
        self.i = 0
        self.M = M
        self.spans: dict = {}
        self.vars: list[str] = []

    @property
    def tok(self) -> Tok:
        return self.toks[self.i]

    def peek(self, k: int = 1) -> Tok:
        return self.toks[min(self.i + k, len(self.toks) - 1)]

    def fail(self, msg: str, expected=(), tok: Optional[Tok] = None):
        t = tok or self.tok
        raise ParseError([Diagnostic(t.line, t.col, msg, tuple(expected))])

    def at(self, *texts) -> bool:
        return self.tok.kind in ("sym", "ident") and self.tok.text in texts

    def expect(self, text: str) -> Tok:
        if not self.at(text):
            self.fail(f"unexpected {self.tok.text or 'end of input'!r}", (repr(text),))
        t = self.tok
        self.i += 1
        return t

    def ident(self) -> Tok:
        if self.tok.kind != "ident":
            self.fail(f"unexpected {self.tok.text or 'end of input'!r}", ("identifier",))
        t = self.tok
        self.i += 1
        return t

    def integer(self) -> int:
        neg = False
        if self.at("-"):
            self.i += 1
            neg = True
        if self.tok.kind != "int":
            self.fail(f"unexpected {self.tok.text or 'end of input'!r}", ("integer",))
        v = int(self.tok.text)
        self.i += 1
        return -v if neg else v

    # affine terms: dict var-index -> coeff, constant; primed vars offset by n
    def affine(self, allow_primed: bool):
        coeffs: dict = {}
        const = 0
        sign = 1
        if self.at("-"):
            self.i += 1
            sign = -1
        elif self.at("+"):
            self.i += 1
        while True:
            t = self.tok
            if t.kind == "int":
                k = int(t.text)
                self.i += 1
                if self.at("*"):
                    self.i += 1
                    idx = self.varref(allow_primed)
                    coeffs[idx] = coeffs.get(idx, 0) + sign * k
                else:
                    const += sign * k
            elif t.kind == "ident":
                idx = self.varref(allow_primed)
                coeffs[idx] = coeffs.get(idx, 0) + sign
            else:
                self.fail(f"unexpected {t.text or 'end of input'!r}", ("integer", "variable"))
            if self.at("+"):
                sign = 1
            elif self.at("-"):
                sign = -1
            else:
                return coeffs, const
            self.i += 1

    def varref(self, allow_primed: bool) -> int:
        t = self.ident()
        if t.text not in self.vars:
            self.fail(f"unknown variable {t.text!r}", tok=t)
        idx = self.vars.index(t.text)
        if self.at("'"):
            if not allow_primed:
                self.fail("primed variable not allowed here")
            self.i += 1
            idx += len(self.vars)
        return idx

    def constraint(self, allow_primed: bool, width: int):
        """One relation; returns a list of (row, rhs)."""
        start = self.tok
        lc, lk = self.affine(allow_primed)
        if self.at("<", ">"):
            self.fail("strict inequalities unsupported")
        if self.at("!="):
            self.fail("disequalities unsupported")
        if not self.at("<=", ">=", "="):
            self.fail(f"unexpected {self.tok.text or 'end of input'!r}", ("'<='", "'>='", "'='"))
        op = self.tok.text
        self.i += 1
        rc, rk = self.affine(allow_primed)
        if self.at("<", ">"):
            self.fail("strict inequalities unsupported")
        row = [0] * width
        for k, v in lc.items():
            row[k] += v
        for k, v in rc.items():
            row[k] -= v
        rhs = rk - lk
        out = []
        if op in ("<=", "="):
            out.append((row, rhs))
        if op in (">=", "="):
            out.append(([-v for v in row], -rhs))
        for r, b in out:
            if max([abs(v) for v in r] + [abs(b)]) > self.M:
                self.fail(f"coefficient overflow beyond M = {self.M}", tok=start)
        return out

    def linsys(self, allow_primed: bool, width: int, terminators=(";",)) -> LinSys:
        if self.at("true"):
            self.i += 1
            return LinSys.empty(width)
        rows, rhs = [], []
        while True:
            for r, b in self.constraint(allow_primed, width):
                rows.append(r)
                rhs.append(b)
            if self.at(","):
                self.i += 1
                continue
            return LinSys.of(rows, rhs, width)

    # blocks
    def system(self):
        self.expect("system")
        self.expect("{")
        vars_ = []
        while self.at("var"):
            t = self.tok
            self.i += 1
            name = self.ident()
            if name.text in self.vars:
                self.fail(f"duplicate variable {name.text!r}", tok=name)
            self.expect(":")
            lo = self.integer()
            self.expect("..")
            hi = self.integer()
            self.expect(";")
            if lo > hi:
                self.fail(f"empty range for {name.text!r}", tok=name)
            self.vars.append(name.text)
            vars_.append(Var(name.text, lo, hi))
            self.spans[("var", name.text)] = (t.line, t.col)
        n = len(vars_)
        commands = []
        init = None
        if self.at("init"):
            t = self.tok
            self.i += 1
            self.expect(":")
            init = self.linsys(False, n)
            self.expect(";")
            self.spans[("init",)] = (t.line, t.col)
        names = set()
        while self.at("command"):
            t = self.tok
            self.i += 1
            name = self.ident()
            if name.text in names:
                self.fail(f"duplicate command {name.text!r}", tok=name)
            names.add(name.text)
            self.expect(":")
            self.expect("guard")
            guard = self.linsys(False, 2 * n)
            self.expect("update")
            upd_rows, upd_rhs, havoc = [], [], set()
            while True:
                if self.at("havoc"):
                    self.i += 1
                    v = self.ident()
                    if v.text not in self.vars:
                        self.fail(f"unknown variable {v.text!r}", tok=v)
                    havoc.add(self.vars.index(v.text))
                else:
                    for r, b in self.constraint(True, 2 * n):
                        upd_rows.append(r)
                        upd_rhs.append(b)
                if self.at(","):
                    self.i += 1
                    continue
                break
            self.expect(";")
            rel = guard.stack(LinSys.of(upd_rows, upd_rhs, 2 * n))
            primed = {k - n for r in upd_rows for k, v in enumerate(r) if v and k >= n}
            frame_rows, frame_rhs = [], []
            for k in range(n):
                if k not in primed and k not in havoc:
                    r = [0] * (2 * n)
                    r[k], r[n + k] = -1, 1
                    frame_rows += [r, [-v for v in r]]
                    frame_rhs += [0, 0]
            rel = rel.stack(LinSys.of(frame_rows, frame_rhs, 2 * n))
            commands.append(Command(name.text, rel))
            self.spans[("command", name.text)] = (t.line, t.col)
        self.expect("}")
        if init is None:
            init = LinSys.empty(n)
        return SymbolicSystem(tuple(vars_), init, tuple(commands))

    def automaton(self, symbolic: bool = True) -> BuchiSpec:
        t0 = self.expect("automaton")
        self.expect("{")
        self.expect("states")
        self.expect(":")
        states = [self.ident().text]
        while self.at(","):
            self.i += 1
            states.append(self.ident().text)
        self.expect(";")
        init = []
        if self.at("initial"):
            self.i += 1
            self.expect(":")
            init = [self.ident()]
            while self.at(","):
                self.i += 1
                init.append(self.ident())
            self.expect(";")
        for t in init:
            if t.text not in states:
                self.fail(f"unknown automaton state {t.text!r}", tok=t)
        aps, preds = [], []
        self.expect("aps")
        self.expect(":")
        while self.tok.kind == "ident" and self.peek().text in (":=", ";", ","):
            name = self.ident()
            if name.text in aps:
                self.fail(f"duplicate proposition {name.text!r}", tok=name)
            aps.append(name.text)
            if self.at(":="):
                self.i += 1
                rows = self.constraint(False, len(self.vars))
                if len(rows) != 1:
                    self.fail("a proposition must be a single inequality", tok=name)
                preds.append((name.text, tuple(rows[0][0]), rows[0][1]))
            self.expect(";") if not self.at(",") else self.expect(",")
        self.expect("trans")
        self.expect(":")
        trans = []
        while self.tok.kind == "ident":
            src = self.ident()
            self.expect("--")
            if self.at("true"):
                self.i += 1
                label = None
            else:
                self.expect("{")
                names = []
                if not self.at("}"):
                    names.append(self.ident())
                    while self.at(","):
                        self.i += 1
                        names.append(self.ident())
                self.expect("}")
                for nm in names:
                    if nm.text not in aps:
                        self.fail(f"unknown proposition {nm.text!r}", tok=nm)
                label = Letter(nm.text for nm in names)
            self.expect("-->")
            dst = self.ident()
            for q in (src, dst):
                if q.text not in states:
                    self.fail(f"unknown automaton state {q.text!r}", tok=q)
            fair = False
            if self.at("fair"):
                self.i += 1
                fair = True
            self.expect(";")
            trans.append(BuchiTrans(src.text, label, dst.text, fair))
        self.expect("}")
        if symbolic and len(preds) != len(aps):
            self.fail("every proposition needs a linear predicate in a symbolic unit", tok=t0)
        self.spans[("automaton",)] = (t0.line, t0.col)
        return BuchiSpec(tuple(states), frozenset(t.text for t in init), tuple(aps), tuple(trans),
                         tuple(preds))

    def ranking(self, spec: BuchiSpec) -> PiecewiseRanking:
        self.expect("ranking")
        self.expect("{")
        n = len(self.vars)
        per = {}
        while self.at("at"):
            t = self.tok
            self.i += 1
            q = self.ident()
            if q.text not in spec.states:
                self.fail(f"unknown automaton state {q.text!r}", tok=q)
            if q.text in per:
                self.fail(f"duplicate ranking block for {q.text!r}", tok=q)
            self.expect(":")
            fin, inf = [], []
            while self.at("case"):
                self.i += 1
                C = self.linsys(False, n)
                self.expect("->")
                if self.at("inf"):
                    self.i += 1
                    inf.append(InfCase(C))
                else:
                    coeffs, const = self.affine(False)
                    w = [0] * n
                    for k, v in coeffs.items():
                        w[k] += v
                    if max([abs(v) for v in w] + [abs(const)]) > self.M:
                        self.fail(f"coefficient overflow beyond M = {self.M}")
                    fin.append(Case(tuple(w), const, C))
                self.expect(";")
            per[q.text] = StateRanking(tuple(fin), tuple(inf))
            self.spans[("ranking", q.text)] = (t.line, t.col)
        self.expect("}")
        order = tuple((q, per.get(q, StateRanking())) for q in spec.states)
        return PiecewiseRanking(n, order)

    def end(self):
        if self.tok.kind != "eof":
            self.fail(f"unexpected {self.tok.text!r}", ("end of input",))


def parse(text: str, M: int = DEFAULT_M) -> Unit:
    """Parse a .zkgc unit or a .zkx.json document (recognized by a leading '{')."""
    if text.lstrip().startswith("{"):
        return parse_explicit(text)
    p = _Parser(text, M)
    sys_ = p.system()
    spec = p.automaton()
    rk = p.ranking(spec)
    p.end()
    return Unit(sys_, spec, rk, p.spans)


def parse_public(text: str, vars_: list, M: int = DEFAULT_M) -> tuple:
    """Automaton and ranking blocks only, over a known variable list."""
    p = _Parser(text, M)
    p.vars = [v.name for v in vars_]
    spec = p.automaton()
    rk = p.ranking(spec)
    p.end()
    return spec, rk


# ---------------------------------------------------------------- printer

def _affine_text(coeffs, const, names) -> str:
    parts = []
    for k, c in enumerate(coeffs):
        if c == 0:
            continue
        mag = abs(c)
        term = names[k] if mag == 1 else f"{mag}*{names[k]}"
        parts.append(("-" if c < 0 else "+", term))
    if const or not parts:
        parts.append(("-" if const < 0 else "+", str(abs(const))))
    out = ("-" if parts[0][0] == "-" else "") + parts[0][1]
    for s, t in parts[1:]:
        out += f" {s} {t}"
    return out


def _rows_text(sys_: LinSys, names) -> str:
    if not len(sys_):
        return "true"
    return ", ".join(f"{_affine_text(r, 0, names)} <= {b}" for r, b in zip(sys_.A, sys_.b))


def print_unit(unit_or_triple) -> str:
    if isinstance(unit_or_triple, Unit):
        sys_, spec, rk = unit_or_triple.triple()
    else:
        sys_, spec, rk = unit_or_triple
    if isinstance(sys_, ExplicitSystem):
        return print_explicit(sys_, spec, rk)
    names = [v.name for v in sys_.vars]
    n = len(names)
    primed = names + [v + "'" for v in names]
    out = ["system {"]
    for v in sys_.vars:
        out.append(f"  var {v.name} : {v.lo}..{v.hi};")
    out.append(f"  init: {_rows_text(sys_.init, names)};")
    for c in sys_.commands:
        rel = c.rel
        is_upd = [any(r[n:]) for r in rel.A]
        split = next((k for k, u in enumerate(is_upd) if u), len(is_upd))
        if any(not u for u in is_upd[split:]):
            split = 0  # rows interleave; keep their order by putting all in the update
        guard = LinSys(rel.A[:split], rel.b[:split], 2 * n)
        upd = LinSys(rel.A[split:], rel.b[split:], 2 * n)
        items = [f"{_affine_text(r, 0, primed)} <= {b}" for r, b in zip(upd.A, upd.b)]
        mentioned = {k - n for r in upd.A for k, v in enumerate(r) if v and k >= n}
        items += [f"havoc {names[k]}" for k in range(n) if k not in mentioned]
        out.append(f"  command {c.name}: guard {_rows_text(guard, primed)} update {', '.join(items)};")
    out.append("}")
    out.append(print_public(spec, rk, names))
    return "\n".join(out) + "\n"


def print_public(spec: BuchiSpec, rk: PiecewiseRanking, names) -> str:
    out = ["automaton {", f"  states: {', '.join(spec.states)};"]
    if spec.init:
        out.append(f"  initial: {', '.join(q for q in spec.states if q in spec.init)};")
    out.append("  aps:")
    for ap in spec.aps:
        try:
            coeffs, bound = spec.predicate(ap)
            out.append(f"    {ap} := {_affine_text(coeffs, 0, names)} <= {bound};")
        except ValueError:
            out.append(f"    {ap};")
    out.append("  trans:")
    for t in spec.transitions:
        lab = "true" if t.label is None else "{" + ", ".join(a for a in spec.aps if a in t.label) + "}"
        out.append(f"    {t.src} -- {lab} --> {t.dst}{' fair' if t.fair else ''};")
    out.append("}")
    out.append("ranking {")
    for q, sr in rk.per_state:
        out.append(f"  at {q}:")
        for c in sr.finite:
            out.append(f"    case {_rows_text(c.C, names)} -> {_affine_text(c.w, c.u, names)};")
        for c in sr.infinite:
            out.append(f"    case {_rows_text(c.E, names)} -> inf;")
    out.append("}")
    return "\n".join(out)


# ---------------------------------------------------------------- explicit JSON

def _automaton_json(spec: BuchiSpec) -> dict:
    return {
        "states": list(spec.states),
        "init": [q for q in spec.states if q in spec.init],
        "trans": [{"src": t.src, "label": None if t.label is None else sorted(t.label),
                   "dst": t.dst, "fair": t.fair} for t in spec.transitions],
    }


def _automaton_from(d: dict, aps) -> BuchiSpec:
    trans = tuple(BuchiTrans(t["src"], None if t["label"] is None else Letter(t["label"]), t["dst"],
                             bool(t.get("fair", False))) for t in d["trans"])
    return BuchiSpec(tuple(d["states"]), frozenset(d["init"]), tuple(aps), trans)


def _ranking_json(rk: ExplicitRanking) -> dict:
    return {q: ["inf" if row[k] is INF else row[k] for row in rk.values] for k, q in enumerate(rk.qnames)}


def _ranking_from(d: dict, spec: BuchiSpec, nstates: int) -> ExplicitRanking:
    cols = []
    for q in spec.states:
        col = d.get(q)
        if col is None or len(col) != nstates:
            raise ParseError([Diagnostic(0, 0, f"ranking column for {q!r} must have {nstates} entries")])
        cols.append([INF if v == "inf" else v for v in col])
    vals = tuple(tuple(cols[k][s] for k in range(len(spec.states))) for s in range(nstates))
    return ExplicitRanking(tuple(spec.states), vals)


def explicit_json(sys_: ExplicitSystem, spec: BuchiSpec, rk: ExplicitRanking, public_only=False) -> dict:
    d = {"format": "zkx", "version": 1, "aps": list(spec.aps), "names": list(sys_.states),
         "labels": [sorted(l) for l in sys_.labels]}
    if not public_only:
        d["init"] = sorted(sys_.init)
        d["transitions"] = [list(p) for p in sorted(sys_.transitions)]
    d["automaton"] = _automaton_json(spec)
    d["ranking"] = _ranking_json(rk)
    return d


def print_explicit(sys_, spec, rk, public_only=False) -> str:
    return json.dumps(explicit_json(sys_, spec, rk, public_only), indent=1, sort_keys=True) + "\n"


def parse_explicit(text: str, public_only: bool = False) -> Unit:
    try:
        d = json.loads(text)
        if not isinstance(d, dict) or d.get("format") != "zkx":
            raise ValueError("not a zkx document")
        if d.get("version") != 1:
            raise ValueError(f"unsupported zkx version {d.get('version')}")
        labels = tuple(Letter(l) for l in d["labels"])
        names = tuple(d.get("names") or [f"s{i}" for i in range(len(labels))])
        init = frozenset(d.get("init", []))
        trans = frozenset(tuple(p) for p in d.get("transitions", []))
        if any(len(p) != 2 for p in trans):
            raise ValueError("transitions must be index pairs")
        sys_ = ExplicitSystem(names, init, trans, labels)
        spec = _automaton_from(d["automaton"], d["aps"])
        for l in labels:
            if not l <= set(spec.aps):
                raise ValueError("state label uses an unknown proposition")
        rk = _ranking_from(d["ranking"], spec, len(labels))
    except ParseError:
        raise
    except (ValueError, KeyError, TypeError) as e:
        raise ParseError([Diagnostic(0, 0, f"invalid explicit document: {e}")]) from None
    return Unit(sys_, spec, rk, {})
