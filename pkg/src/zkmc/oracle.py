"""Plaintext model checker used as a test oracle.

Deliberately simple: builds the reachable product of system and automaton and
looks for a fair edge inside a nontrivial strongly connected component.
"""
from __future__ import annotations

from itertools import product
from typing import Optional

from .model import INF, BuchiSpec, ExplicitRanking, ExplicitSystem, Letter, SymbolicSystem, letter_at


class RangeOverflow(ValueError):
    pass


def product_graph(sys: ExplicitSystem, spec: BuchiSpec):
    """Reachable product nodes and edges ((s,q), (s',q'), fair)."""
    succ = sys.successors()
    start = [(s, q) for s in sorted(sys.init) for q in spec.states if q in spec.init]
    index = {n: i for i, n in enumerate(start)}
    nodes = list(start)
    edges = []
    stack = list(start)
    while stack:
        s, q = stack.pop()
        for q2, fair in spec.moves(q, sys.labels[s]):
            for t in succ[s]:
                n2 = (t, q2)
                if n2 not in index:
                    index[n2] = len(nodes)
                    nodes.append(n2)
                    stack.append(n2)
                edges.append((index[(s, q)], index[n2], fair))
    return nodes, edges


def _scc(n: int, adj: list) -> list[int]:
    """Iterative Tarjan; returns a component id per node."""
    idx = [-1] * n
    low = [0] * n
    comp = [-1] * n
    onstack = [False] * n
    st: list = []
    counter = 0
    ncomp = 0
    for root in range(n):
        if idx[root] != -1:
            continue
        work = [(root, 0)]
        idx[root] = low[root] = counter
        counter += 1
        st.append(root)
        onstack[root] = True
        while work:
            v, i = work[-1]
            if i < len(adj[v]):
                work[-1] = (v, i + 1)
                w = adj[v][i]
                if idx[w] == -1:
                    idx[w] = low[w] = counter
                    counter += 1
                    st.append(w)
                    onstack[w] = True
                    work.append((w, 0))
                elif onstack[w]:
                    low[v] = min(low[v], idx[w])
            else:
                work.pop()
                if work:
                    u = work[-1][0]
                    low[u] = min(low[u], low[v])
                if low[v] == idx[v]:
                    while True:
                        w = st.pop()
                        onstack[w] = False
                        comp[w] = ncomp
                        if w == v:
                            break
                    ncomp += 1
    return comp


def fair_cycle_exists(sys: ExplicitSystem, spec: BuchiSpec) -> bool:
    nodes, edges = product_graph(sys, spec)
    adj = [[] for _ in nodes]
    for a, b, _ in edges:
        adj[a].append(b)
    comp = _scc(len(nodes), adj)
    # an edge inside one SCC always lies on a cycle (self-loops included)
    return any(f and comp[a] == comp[b] for a, b, f in edges)


def canonical_ranking(sys: ExplicitSystem, spec: BuchiSpec) -> Optional[ExplicitRanking]:
    """Least-effort valid ranking, or None when a fair cycle exists.

    V(s, q) is the largest number of fair edges on any path from a reachable
    product node; unreachable nodes get INF.
    """
    nodes, edges = product_graph(sys, spec)
    adj = [[] for _ in nodes]
    for a, b, _ in edges:
        adj[a].append(b)
    comp = _scc(len(nodes), adj)
    if any(f and comp[a] == comp[b] for a, b, f in edges):
        return None
    out = [[] for _ in range(max(comp, default=-1) + 1)]
    for a, b, f in edges:
        if comp[a] != comp[b]:
            out[comp[a]].append((comp[b], f))
    val = [0] * len(out)
    for c in range(len(out)):  # Tarjan numbers sinks first
        val[c] = max((val[d] + f for d, f in out[c]), default=0)
    table = [[INF] * len(spec.states) for _ in range(sys.size)]
    for i, (s, q) in enumerate(nodes):
        table[s][spec.states.index(q)] = val[comp[i]]
    return ExplicitRanking(tuple(spec.states), tuple(tuple(r) for r in table))


def fair_lasso_bounded(sys: ExplicitSystem, spec: BuchiSpec, depth: int) -> bool:
    """Independent check: search for a path that returns to a node after a fair edge."""
    nodes, edges = product_graph(sys, spec)
    out = [[] for _ in nodes]
    for a, b, f in edges:
        out[a].append((b, f))
    for a, b, f in edges:
        if not f:
            continue
        # can we get from b back to a within depth steps?
        frontier, seen = {b}, {b}
        for _ in range(depth):
            if a in frontier:
                return True
            frontier = {y for x in frontier for y, _ in out[x]} - seen
            seen |= frontier
            if not frontier:
                break
        if a in frontier:
            return True
    return False


def _successors(rel, n: int, x: tuple, box: list) -> list[tuple]:
    """Integer x' in the box with (x, x') satisfying rel."""
    lo = [b[0] for b in box]
    hi = [b[1] for b in box]
    multi = []
    for r, b in zip(rel.A, rel.b):
        rest = b - sum(r[k] * x[k] for k in range(n))
        primed = [k for k in range(n) if r[n + k]]
        if not primed:
            if rest < 0:
                return []
        elif len(primed) == 1:
            k = primed[0]
            a = r[n + k]
            if a > 0:
                hi[k] = min(hi[k], rest // a)
            else:
                lo[k] = max(lo[k], -(rest // -a))
        else:
            multi.append((r[n:], rest))
    if any(l > h for l, h in zip(lo, hi)):
        return []
    out = []
    for y in product(*[range(l, h + 1) for l, h in zip(lo, hi)]):
        if all(sum(a * v for a, v in zip(r, y)) <= rest for r, rest in multi):
            out.append(y)
    return out


def ground(sys: SymbolicSystem, spec: BuchiSpec, limit: int = 1 << 16) -> ExplicitSystem:
    """All integer points of the declared box, labeled through the proposition map."""
    box = [(v.lo, v.hi) for v in sys.vars]
    size = 1
    for l, h in box:
        size *= h - l + 1
    if size > limit:
        raise RangeOverflow(f"grounding would create {size} states (limit {limit})")
    points = list(product(*[range(l, h + 1) for l, h in box]))
    index = {p: i for i, p in enumerate(points)}
    n = sys.nvars
    init = frozenset(i for i, p in enumerate(points) if sys.init.holds(p))
    trans = set()
    for i, p in enumerate(points):
        for c in sys.commands:
            for y in _successors(c.rel, n, p, box):
                trans.add((i, index[y]))
    labels = tuple(letter_at(spec, p) for p in points) if spec.aps else tuple(Letter() for _ in points)
    names = tuple("(" + ",".join(str(v) for v in p) + ")" for p in points)
    return ExplicitSystem(names, init, frozenset(trans), labels)


def point_of(sys: SymbolicSystem, name: str) -> Optional[tuple]:
    return tuple(int(v) for v in name.strip("()").split(","))
