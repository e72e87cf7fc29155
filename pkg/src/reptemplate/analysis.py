"""Queries over a closed chart: minimal programs, size census, round-trip check."""
from __future__ import annotations

import itertools
from collections import Counter
from dataclasses import dataclass, field

from . import core
from .core import Pure, Rep
from .engine import _FREE, COMPLETE, Chart, Edge, NoParse, to_comb
from .grammar import Grammar


class CountDivergence(RuntimeError):
    """The derivation hypergraph has a cycle, so template counts are infinite."""

    def __init__(self, witness):
        self.witness = witness
        super().__init__(f"cyclic hypergraph; cycle through items {witness}")


@dataclass
class MinimalHypergraph:
    chart: Chart
    goals: list
    weight: int
    edges: dict = field(default_factory=dict)  # item id -> list of edge indices

    def __len__(self):
        return sum(len(v) for v in self.edges.values())

    def all_edges(self) -> list:
        return [self.chart.edges[k] for ks in self.edges.values() for k in ks]

    def combinators(self) -> list:
        return [to_comb(e.comb) for e in self.all_edges() if e.rule == COMPLETE]


def _tails(e: Edge):
    """Items whose templates appear inside a template built by ``e``."""
    if e.parent < 0:
        return ()
    return (e.parent, *(c for c, s in zip(e.children, e.comb) if s == _FREE))


def extract_minimal(chart: Chart) -> MinimalHypergraph:
    """Hyperedges lying on at least one lightest derivation of a goal."""
    if chart.goal_weight is None:
        raise NoParse(" ".join(chart.seq))
    w = chart.weight
    goals = [g for g in chart.goals if w[g] == chart.goal_weight]
    sub = MinimalHypergraph(chart, goals, chart.goal_weight)
    stack = list(goals)
    while stack:
        i = stack.pop()
        if i in sub.edges:
            continue
        keep = [k for k in chart.incoming[i]
                if _ready(chart, chart.edges[k]) and chart.edge_weight(chart.edges[k]) == w[i]]
        sub.edges[i] = keep
        for k in keep:
            stack.extend(t for t in _tails(chart.edges[k]) if t not in sub.edges)
    return sub


def _ready(chart, e):
    w = chart.weight
    return e.parent < 0 or (w[e.parent] is not None and all(w[c] is not None for c in e.children))


def enumerate_minimal(sub: MinimalHypergraph, limit: int = 10) -> list:
    """Up to ``limit`` distinct minimal templates, in edge insertion order."""
    if limit <= 0:
        return []
    chart = sub.chart
    memo: dict = {}

    def exprs(i):
        if i in memo:
            return memo[i]
        # a dict keeps insertion order and drops templates reached through
        # a second typing of the same tree
        out: dict = {}
        for k in sorted(sub.edges[i]):
            e = chart.edges[k]
            if e.parent < 0:
                out[Pure(e.relation, chart.grammar.arity_of(e.relation))] = None
            else:
                m = to_comb(e.comb)
                frees = [exprs(c) for c, s in zip(e.children, e.comb) if s == _FREE]
                for head in exprs(e.parent):
                    for kids in itertools.product(*frees):
                        out[Rep(head, m, kids)] = None
                        if len(out) >= limit:
                            break
                    if len(out) >= limit:
                        break
            if len(out) >= limit:
                break
        memo[i] = list(out)
        return memo[i]

    result: list = []
    seen = set()
    for g in sorted(sub.goals):
        for e in exprs(g):
            if e not in seen:
                seen.add(e)
                result.append(e)
            if len(result) >= limit:
                return result
    return result


@dataclass(frozen=True)
class SizeDistribution:
    counts: dict

    @property
    def min_size(self):
        return min(self.counts) if self.counts else None

    @property
    def total(self) -> int:
        return sum(self.counts.values())

    def rows(self) -> list:
        return sorted(self.counts.items())

    def __getitem__(self, size):
        return self.counts.get(size, 0)


def _shift_mul(polys, shift):
    acc = {shift: 1}
    for p in polys:
        nxt: dict = {}
        for a, x in acc.items():
            for b, y in p.items():
                nxt[a + b] = nxt.get(a + b, 0) + x * y
        acc = nxt
    return acc


def _key(chart, i):
    """Item identity with the typing dropped: tree, span and hole spans."""
    return (chart.i_tree[i], chart.i_lo[i], chart.i_hi[i], chart.i_holes[i])


def _untyped_edges(chart):
    """Key -> set of hyperedges between keys.

    When a relation name has several typed instances one tree can be typed
    in more than one way, and the typed hypergraph then holds one derivation
    per typing.  Every typing of a key admits the same templates, so
    template counts are taken over keys, each distinct decomposition once.
    """
    w = chart.weight
    out: dict = {}
    for i in range(len(chart)):
        if w[i] is None:
            continue
        bucket = out.setdefault(_key(chart, i), set())
        for k in chart.incoming[i]:
            e = chart.edges[k]
            if e.parent < 0:
                bucket.add((e.relation, None, ()))
                continue
            if w[e.parent] is None or any(w[c] is None for c in e.children):
                continue
            frees = tuple(_key(chart, c) for c, s in zip(e.children, e.comb) if s == _FREE)
            bucket.add((e.comb, _key(chart, e.parent), frees))
    return out


def size_distribution(chart: Chart) -> SizeDistribution:
    """Exact number of distinct templates for the sequence, per size.

    Counts are computed bottom-up over the hypergraph: an axiom contributes
    ``{1: 1}``, a complete-rep edge the product of its parent's and free
    children's polynomials shifted by one.  Requires an exhaustive chart.
    """
    if not chart.exhaustive:
        raise ValueError("size distribution needs an exhaustively closed chart")
    if chart.goal_weight is None:
        return SizeDistribution({})
    graph = _untyped_edges(chart)
    roots = list(dict.fromkeys(_key(chart, g) for g in chart.goals))
    poly: dict = {}
    for x in _topological(graph, roots):
        acc: dict = {}
        for _, parent, frees in graph[x]:
            p = {1: 1} if parent is None else _shift_mul([poly[t] for t in (parent, *frees)], 1)
            for s, c in p.items():
                acc[s] = acc.get(s, 0) + c
        poly[x] = acc
    total: Counter = Counter()
    for g in roots:
        total.update(poly[g])
    return SizeDistribution({s: c for s, c in total.items() if c})


def _topological(graph, roots):
    """Post-order over keys reachable backwards from ``roots``; detects cycles."""
    WHITE, GREY, BLACK = 0, 1, 2
    color: dict = {}
    order = []
    for r in roots:
        if color.get(r, WHITE) != WHITE:
            continue
        color[r] = GREY
        stack = [(r, iter(_preds(graph, r)))]
        while stack:
            node, it = stack[-1]
            nxt = next(it, None)
            if nxt is None:
                stack.pop()
                color[node] = BLACK
                order.append(node)
                continue
            c = color.get(nxt, WHITE)
            if c == GREY:
                cyc = [n for n, _ in stack]
                raise CountDivergence(cyc[cyc.index(nxt):])
            if c == WHITE:
                color[nxt] = GREY
                stack.append((nxt, iter(_preds(graph, nxt))))
    return order


def _preds(graph, x):
    seen = set()
    for _, parent, frees in graph[x]:
        if parent is None:
            continue
        for t in (parent, *frees):
            if t not in seen:
                seen.add(t)
                yield t


@dataclass(frozen=True)
class CheckResult:
    accepted: bool
    reason: str | None = None

    def __bool__(self):
        return self.accepted


def check_template(grammar: Grammar, e, seq) -> CheckResult:
    """Round-trip verifier: does ``e`` evaluate to a start-rooted tree yielding ``seq``?"""
    try:
        core.check_expr(e)
    except core.TemplateError as exc:
        return CheckResult(False, f"malformed template: {exc}")
    for x in core.subexprs(e):
        if isinstance(x, Pure):
            if x.relation not in grammar.families:
                return CheckResult(False, f"unknown relation {x.relation!r}")
            if grammar.arity_of(x.relation) != x.arity:
                return CheckResult(False, f"arity mismatch for relation {x.relation!r}")
    if core.arity(e) != 0:
        return CheckResult(False, f"template has arity {core.arity(e)}, expected 0")
    tree = core.evaluate(e)
    heads = grammar.derives(tree, list(seq))
    if not heads:
        return CheckResult(False, "yield mismatch")
    if grammar.start not in heads:
        return CheckResult(False, "start-symbol mismatch")
    return CheckResult(True)
