"""Systems, automata and ranking certificates, with their plaintext semantics."""
from __future__ import annotations

from dataclasses import dataclass, field
from itertools import combinations
from typing import Iterable, Iterator, Optional, Sequence

Letter = frozenset  # a set of atomic proposition names


class ConfigError(ValueError):
    pass


class _Inf:
    """The value +infinity of a ranking function. Not a number: no arithmetic."""

    _inst = None

    def __new__(cls):
        if cls._inst is None:
            cls._inst = super().__new__(cls)
        return cls._inst

    def __repr__(self):
        return "INF"

    def __reduce__(self):
        return (_Inf, ())


INF = _Inf()


def v_lt(a, b) -> bool:
    """a < b on N extended by INF."""
    if a is INF:
        return False
    return b is INF or a < b


def v_le(a, b) -> bool:
    if b is INF:
        return True
    return a is not INF and a <= b


@dataclass(frozen=True)
class LinSys:
    """Rows a.x <= b over integer coefficients."""

    A: tuple = ()
    b: tuple = ()
    width: int = 0

    @classmethod
    def of(cls, A: Sequence[Sequence[int]], b: Sequence[int], width: Optional[int] = None) -> "LinSys":
        A = tuple(tuple(int(x) for x in r) for r in A)
        b = tuple(int(x) for x in b)
        if width is None:
            width = len(A[0]) if A else 0
        if len(A) != len(b) or any(len(r) != width for r in A):
            raise ValueError("malformed linear system")
        return cls(A, b, width)

    @classmethod
    def empty(cls, width: int) -> "LinSys":
        return cls((), (), width)

    def __len__(self) -> int:
        return len(self.A)

    def stack(self, other: "LinSys") -> "LinSys":
        if self.width != other.width:
            raise ValueError("width mismatch")
        return LinSys(self.A + other.A, self.b + other.b, self.width)

    def pad(self, left: int, right: int) -> "LinSys":
        """Zero-pad columns: left zeros before, right zeros after."""
        z1, z2 = (0,) * left, (0,) * right
        return LinSys(tuple(z1 + r + z2 for r in self.A), self.b, self.width + left + right)

    def holds(self, x: Sequence[int]) -> bool:
        return all(sum(a * v for a, v in zip(r, x)) <= bi for r, bi in zip(self.A, self.b))

    def max_abs(self) -> int:
        return max([abs(v) for r in self.A for v in r] + [abs(v) for v in self.b] + [0])


# ---------------------------------------------------------------- systems

@dataclass(frozen=True)
class ExplicitSystem:
    states: tuple          # state names
    init: frozenset        # indices
    transitions: frozenset  # index pairs
    labels: tuple          # Letter per state

    def __post_init__(self):
        n = len(self.states)
        if n == 0:
            raise ValueError("state space must be nonempty")
        if any(not 0 <= i < n for i in self.init):
            raise ValueError("initial state out of range")
        if any(not (0 <= a < n and 0 <= b < n) for a, b in self.transitions):
            raise ValueError("transition endpoint out of range")
        if len(self.labels) != n:
            raise ValueError("labeling must be total")

    @property
    def size(self) -> int:
        return len(self.states)

    def successors(self) -> list[list[int]]:
        out = [[] for _ in self.states]
        for a, b in sorted(self.transitions):
            out[a].append(b)
        return out


@dataclass(frozen=True)
class Var:
    name: str
    lo: int
    hi: int


@dataclass(frozen=True)
class Command:
    name: str
    rel: LinSys  # over [x, x']


@dataclass(frozen=True)
class SymbolicSystem:
    vars: tuple
    init: LinSys
    commands: tuple

    def __post_init__(self):
        n = len(self.vars)
        if self.init.width != n:
            raise ValueError("init width must equal the variable count")
        for c in self.commands:
            if c.rel.width != 2 * n:
                raise ValueError(f"command {c.name}: width must be twice the variable count")
        for v in self.vars:
            if v.lo > v.hi:
                raise ValueError(f"empty range for {v.name}")

    @property
    def nvars(self) -> int:
        return len(self.vars)

    def max_coeff(self) -> int:
        return max([self.init.max_abs()] + [c.rel.max_abs() for c in self.commands])


# ---------------------------------------------------------------- automata

@dataclass(frozen=True)
class BuchiTrans:
    src: str
    label: Optional[Letter]  # None means "true"
    dst: str
    fair: bool = False


@dataclass(frozen=True)
class BuchiSpec:
    states: tuple
    init: frozenset
    aps: tuple
    transitions: tuple
    predicates: tuple = ()  # ((ap, coeffs, bound), ...) symbolic mode only

    def __post_init__(self):
        qs = set(self.states)
        if not self.init <= qs:
            raise ValueError("initial automaton states must be states")
        for t in self.transitions:
            if t.src not in qs or t.dst not in qs:
                raise ValueError(f"transition {t} mentions an unknown state")
            if t.label is not None and not t.label <= set(self.aps):
                raise ValueError(f"transition {t} uses an unknown proposition")

    @property
    def alphabet(self) -> list:
        out = []
        aps = list(self.aps)
        for mask in range(1 << len(aps)):
            out.append(Letter(a for i, a in enumerate(aps) if mask >> i & 1))
        return out

    @property
    def fair(self) -> tuple:
        return tuple(t for t in self.transitions if t.fair)

    def expanded(self) -> list[tuple]:
        """delta with "true" expanded per letter: (src, letter, dst, fair), deduplicated."""
        seen: dict = {}
        for t in self.transitions:
            letters = self.alphabet if t.label is None else [t.label]
            for s in letters:
                key = (t.src, s, t.dst)
                seen[key] = seen.get(key, False) or t.fair
        return [(a, s, b, f) for (a, s, b), f in seen.items()]

    def moves(self, q: str, letter: Letter) -> list[tuple[str, bool]]:
        """Successor automaton states on a letter, with fairness flags."""
        out: dict = {}
        for t in self.transitions:
            if t.src == q and (t.label is None or t.label == letter):
                out[t.dst] = out.get(t.dst, False) or t.fair
        return sorted(out.items())

    def predicate(self, ap: str):
        for name, coeffs, bound in self.predicates:
            if name == ap:
                return tuple(coeffs), bound
        raise ConfigError(f"no linear predicate for proposition {ap!r}")


def sigma_to_polyhedron(spec: BuchiSpec, sigma: Letter, width: Optional[int] = None) -> LinSys:
    """Rows that hold at x exactly when the propositions true at x are sigma."""
    A, b = [], []
    for ap in spec.aps:
        coeffs, bound = spec.predicate(ap)
        if ap in sigma:
            A.append(coeffs)
            b.append(bound)
        else:
            A.append(tuple(-c for c in coeffs))
            b.append(-bound - 1)
    if width is None:
        width = len(A[0]) if A else 0
    return LinSys.of(A, b, width)


def letter_at(spec: BuchiSpec, x: Sequence[int]) -> Letter:
    out = []
    for ap in spec.aps:
        coeffs, bound = spec.predicate(ap)
        if sum(c * v for c, v in zip(coeffs, x)) <= bound:
            out.append(ap)
    return Letter(out)


# ---------------------------------------------------------------- rankings

@dataclass(frozen=True)
class ExplicitRanking:
    """values[s][k] is V(states[s], spec.states[k]); each entry an int >= 0 or INF."""

    qnames: tuple
    values: tuple

    def __post_init__(self):
        for row in self.values:
            if len(row) != len(self.qnames):
                raise ValueError("ranking table must be total on S x Q")
            for v in row:
                if v is not INF and (not isinstance(v, int) or v < 0):
                    raise ValueError(f"illegal ranking value {v!r}")

    def at(self, s: int, q: str):
        return self.values[s][self.qnames.index(q)]

    @classmethod
    def constant(cls, nstates: int, qnames: Sequence[str], value=0) -> "ExplicitRanking":
        return cls(tuple(qnames), tuple(tuple(value for _ in qnames) for _ in range(nstates)))


@dataclass(frozen=True)
class Case:
    w: tuple
    u: int
    C: LinSys

    def value(self, x: Sequence[int]) -> int:
        return sum(a * v for a, v in zip(self.w, x)) + self.u


@dataclass(frozen=True)
class InfCase:
    E: LinSys


@dataclass(frozen=True)
class StateRanking:
    finite: tuple = ()
    infinite: tuple = ()


@dataclass(frozen=True)
class PiecewiseRanking:
    nvars: int
    per_state: tuple  # ((qname, StateRanking), ...)

    def at(self, q: str) -> StateRanking:
        for name, sr in self.per_state:
            if name == q:
                return sr
        return StateRanking()

    def value(self, q: str, x: Sequence[int]):
        sr = self.at(q)
        hits = [c for c in sr.finite if c.C.holds(x)]
        infs = [c for c in sr.infinite if c.E.holds(x)]
        if len(hits) + len(infs) != 1:
            raise ValueError(f"{len(hits) + len(infs)} cases apply at {tuple(x)} in {q}")
        return hits[0].value(x) if hits else INF


# ---------------------------------------------------------------- checks

@dataclass
class Report:
    ok: bool = True
    violations: list = field(default_factory=list)

    def add(self, cond: str, witness) -> None:
        self.ok = False
        self.violations.append((cond, witness))

    def __bool__(self) -> bool:
        return self.ok

    def lines(self) -> list[str]:
        return ["OK"] if self.ok else [f"{c}: {w}" for c, w in self.violations]


def check_ranking_explicit(sys: ExplicitSystem, spec: BuchiSpec, V: ExplicitRanking) -> Report:
    """The three ranking conditions; reports the first violation of each kind."""
    rep = Report()
    seen = set()

    def flag(cond, wit):
        if cond not in seen:
            seen.add(cond)
            rep.add(cond, wit)

    for s in sorted(sys.init):
        for q in sorted(spec.init):
            if V.at(s, q) is INF:
                flag("init", (sys.states[s], q))
                break
    for s, t in sorted(sys.transitions):
        letter = sys.labels[s]
        for q in spec.states:
            v = V.at(s, q)
            if v is INF:
                continue
            for q2, fair in spec.moves(q, letter):
                v2 = V.at(t, q2)
                if v_lt(v, v2):
                    flag("step", (sys.states[s], sys.states[t], q, q2))
                if fair and v_le(v, v2):
                    flag("fair", (sys.states[s], sys.states[t], q, q2))
    return rep


def _negations(sys: LinSys) -> Iterator[tuple]:
    """Each way of leaving the polyhedron: a.x >= b+1 written as -a.x <= -b-1."""
    for r, bi in zip(sys.A, sys.b):
        yield tuple(-a for a in r), -bi - 1


def check_wellformedness(rk: PiecewiseRanking, spec: BuchiSpec) -> Report:
    from .lp import Sat, feasible

    rep = Report()
    n = rk.nvars

    def sat(rows: list, rhs: list):
        if not rows:
            return Sat(tuple(0 for _ in range(n)))
        return feasible((rows, rhs))

    for q in spec.states:
        sr = rk.at(q)
        polys = [("finite", i, c.C) for i, c in enumerate(sr.finite)] + [
            ("infinite", i, c.E) for i, c in enumerate(sr.infinite)]
        for (k1, i1, p1), (k2, i2, p2) in combinations(polys, 2):
            res = sat(list(p1.A + p2.A), list(p1.b + p2.b))
            if isinstance(res, Sat):
                rep.add("disjoint", (q, f"{k1}[{i1}]", f"{k2}[{i2}]", res.point))
        # coverage: depth-first case split over which row of each case fails
        gap = _coverage_gap(n, [p for _, _, p in polys], sat)
        if gap is not None:
            rep.add("cover", (q, gap))
        for i, c in enumerate(sr.finite):
            res = sat(list(c.C.A) + [c.w], list(c.C.b) + [-c.u - 1])
            if isinstance(res, Sat):
                rep.add("nonneg", (q, f"finite[{i}]", res.point))
    return rep


def _coverage_gap(n: int, polys: list, sat) -> Optional[tuple]:
    from .lp import Sat

    def go(k: int, rows: list, rhs: list):
        if rows and not isinstance(sat(rows, rhs), Sat):
            return None
        if k == len(polys):
            return sat(rows, rhs).point if rows else tuple(0 for _ in range(n))
        for row, b in _negations(polys[k]):
            found = go(k + 1, rows + [row], rhs + [b])
            if found is not None:
                return found
        return None

    return go(0, [], [])
