"""Weighted deduction for minimal template programs.

Items are ``[type, tree, region]`` triples: the computation type
``x1 -> ... -> xn -> x``, a hash-consed relation tree with ``n`` holes and the
interval type (overall span plus the spans of the holes).  Weights are
minimal template sizes aggregated with ``min``.

Axioms:

* scan: a termination relation over one token (weight 1)
* prim: an internal relation over a contiguous split of a span (weight 1)

Inference (complete-rep): a parent item and one child item per hole merge
into a bigger item; every combinator compatible with the children's trees
adds its own hyperedge, weighted ``w_parent + 1 + sum(free children)``.

Two drivers share the closure code: :func:`forward_chain` closes the chart
in FIFO order and computes weights afterwards by relaxation, while
:func:`best_first` pops items in weight order (Knuth 1977) and stops at the
first goal.
"""
from __future__ import annotations

import heapq
import itertools
import logging
from collections import deque
from dataclasses import dataclass
from typing import NamedTuple

from . import core
from .core import FREE, HOLE, STAR, Node, Ref
from .grammar import Grammar, GrammarError

log = logging.getLogger(__name__)

SCAN, PRIM, COMPLETE = "ScanRel", "PrimRel", "CompleteRep"

# combinator slot codes inside the chart; Ref(j) is stored as j >= 0
_FREE, _STAR = -1, -2


class NoParse(Exception):
    """No goal item is derivable for the sequence."""


class SearchBoundError(RuntimeError):
    def __init__(self, bound, value):
        self.bound = bound
        super().__init__(f"search bound {bound}={value} exceeded")


@dataclass(frozen=True)
class EngineConfig:
    """Search bounds.

    ``max_tree_size=None`` means twice the sequence length; ``0`` disables
    the bound.  ``free_only`` restricts every combinator to free slots, which
    turns the system into a plain context-free recognizer.
    """

    max_holes: int = 3
    max_tree_size: int | None = None
    free_only: bool = False
    max_items: int = 5_000_000


class Interval(NamedTuple):
    lo: int
    hi: int


@dataclass(frozen=True)
class Item:
    args: tuple
    head: str
    tree: core.CompTree
    span: Interval
    holes: tuple

    def __repr__(self):
        ty = " -> ".join((*self.args, self.head))
        reg = " -> ".join(f"({lo},{hi})" for lo, hi in (*self.holes, self.span))
        return f"[{ty}, {self.tree!r}, {reg}]"


class Edge(NamedTuple):
    head: int
    parent: int  # -1 for axioms
    children: tuple
    comb: tuple  # slot codes
    rule: str
    relation: str | None = None  # axioms only


def to_comb(codes) -> tuple:
    return tuple(FREE if c == _FREE else STAR if c == _STAR else Ref(c) for c in codes)


def from_comb(m) -> tuple:
    return tuple(_FREE if s is FREE else _STAR if s is STAR else s.index for s in m)


def merge_weight(m, w_parent: int, w_children) -> int:
    """Size of ``Rep e m es`` from the sizes of ``e`` and of each slot's child."""
    codes = m if all(isinstance(c, int) for c in m) else from_comb(m)
    if len(codes) != len(w_children):
        raise ValueError("one child weight per slot expected")
    return w_parent + 1 + sum(w for c, w in zip(codes, w_children) if c == _FREE)


def combinators_for(tp: int, tcs: tuple, free_only: bool = False) -> list:
    """All combinators valid for a parent tree id ``tp`` and child tree ids ``tcs``.

    Slot ``i`` may be free, a reference to an earlier *free* slot holding the
    same tree, or a star when its tree is the parent's.
    """
    if free_only:
        return [(_FREE,) * len(tcs)]
    out = []

    def go(i, acc):
        if i == len(tcs):
            out.append(tuple(acc))
            return
        acc.append(_FREE)
        go(i + 1, acc)
        acc.pop()
        for j in range(i):
            if acc[j] == _FREE and tcs[j] == tcs[i]:
                acc.append(j)
                go(i + 1, acc)
                acc.pop()
        if tcs[i] == tp:
            acc.append(_STAR)
            go(i + 1, acc)
            acc.pop()

    go(0, [])
    return out


class Chart:
    """Closed (or best-first truncated) deduction chart and its hypergraph."""

    def __init__(self, grammar: Grammar, seq, config: EngineConfig | None = None):
        violations = grammar.validate()
        if violations:
            raise GrammarError(violations)
        self.grammar = grammar
        self.seq = tuple(seq)
        if not self.seq:
            raise ValueError("empty sequence")
        self.config = config or EngineConfig()
        n = len(self.seq)
        mts = self.config.max_tree_size
        self.max_tree_size = 2 * n if mts is None else (mts or 10 ** 9)
        self.exhaustive = False

        # hash-consed trees: id 0 is the hole
        self._tree_ids = {None: 0}
        self.tree_label = [None]
        self.tree_kids = [()]
        self.tree_size = [0]
        self.tree_arity = [1]
        self._plug_cache: dict = {}

        # items, column-wise
        self._item_ids: dict = {}
        self.i_head: list = []
        self.i_args: list = []
        self.i_tree: list = []
        self.i_lo: list = []
        self.i_hi: list = []
        self.i_holes: list = []  # flat tuple lo1, hi1, lo2, hi2, ...
        self.weight: list = []
        self.incoming: list = []
        self.edges: list = []
        self.pop_weights: list = []

        self.goals: list = []
        self.goal_weight: int | None = None

    # -- trees -------------------------------------------------------------

    def intern(self, label: str, kids: tuple) -> int:
        key = (label, kids)
        t = self._tree_ids.get(key)
        if t is None:
            t = len(self.tree_label)
            self._tree_ids[key] = t
            self.tree_label.append(label)
            self.tree_kids.append(kids)
            self.tree_size.append(1 + sum(self.tree_size[k] for k in kids))
            self.tree_arity.append(sum(self.tree_arity[k] for k in kids))
        return t

    def intern_tree(self, t: core.CompTree) -> int:
        if t is HOLE:
            return 0
        return self.intern(t.relation, tuple(self.intern_tree(c) for c in t.children))

    def tree(self, t: int) -> core.CompTree:
        if t == 0:
            return HOLE
        return Node(self.tree_label[t], tuple(self.tree(k) for k in self.tree_kids[t]))

    def plug(self, tp: int, fillers: tuple) -> int:
        key = (tp, fillers)
        r = self._plug_cache.get(key)
        if r is not None:
            return r
        it = iter(fillers)
        kids_of, label, arity = self.tree_kids, self.tree_label, self.tree_arity

        def go(t):
            if t == 0:
                return next(it)
            if arity[t] == 0:
                return t
            return self.intern(label[t], tuple(go(k) for k in kids_of[t]))

        r = go(tp)
        self._plug_cache[key] = r
        return r

    # -- items -------------------------------------------------------------

    def _item(self, head, args, tree, lo, hi, holes):
        """Id of an item, creating it (with infinite weight) when new."""
        key = (head, args, tree, lo, hi, holes)
        i = self._item_ids.get(key)
        if i is None:
            i = len(self.i_head)
            if i >= self.config.max_items:
                raise SearchBoundError("max_items", self.config.max_items)
            self._item_ids[key] = i
            self.i_head.append(head)
            self.i_args.append(args)
            self.i_tree.append(tree)
            self.i_lo.append(lo)
            self.i_hi.append(hi)
            self.i_holes.append(holes)
            self.weight.append(None)
            self.incoming.append([])
            return i, True
        return i, False

    def item(self, i: int) -> Item:
        h = self.i_holes[i]
        return Item(self.i_args[i], self.i_head[i], self.tree(self.i_tree[i]),
                    Interval(self.i_lo[i], self.i_hi[i]),
                    tuple(Interval(h[k], h[k + 1]) for k in range(0, len(h), 2)))

    def find(self, it: Item) -> int | None:
        key = (it.head, tuple(it.args), self.intern_tree(it.tree), it.span[0], it.span[1],
               tuple(x for iv in it.holes for x in iv))
        return self._item_ids.get(key)

    def __len__(self):
        return len(self.i_head)

    def is_goal(self, i: int) -> bool:
        return (self.i_head[i] == self.grammar.start and not self.i_args[i]
                and self.i_lo[i] == 0 and self.i_hi[i] == len(self.seq))

    def edge_weight(self, e: Edge) -> int:
        if e.parent < 0:
            return 1
        w = self.weight
        return w[e.parent] + 1 + sum(w[c] for c, s in zip(e.children, e.comb) if s == _FREE)

    def goal_items(self) -> list:
        return [self.item(i) for i in self.goals]

    def best(self) -> tuple:
        if self.goal_weight is None:
            raise NoParse(" ".join(self.seq))
        i = min(self.goals, key=lambda g: (self.weight[g], g))
        return self.item(i), self.weight[i]

    # -- axioms ------------------------------------------------------------

    def axioms(self):
        """(item id, edge) for every scan and prim axiom instance."""
        out = []
        n = len(self.seq)
        for pos, tok in enumerate(self.seq):
            for r in self.grammar.scan(tok):
                t = self.intern(r.name, ())
                i, _ = self._item(r.head, (), t, pos, pos + 1, ())
                out.append((i, Edge(i, -1, (), (), SCAN, r.name)))
        for r in self.grammar.internal:
            k = r.arity
            if k > self.config.max_holes:
                continue
            t = self.intern(r.name, (0,) * k)
            for lo in range(n):
                for hi in range(lo + k, n + 1):
                    for cuts in itertools.combinations(range(lo + 1, hi), k - 1):
                        bounds = (lo, *cuts, hi)
                        holes = tuple(x for a, b in zip(bounds, bounds[1:]) for x in (a, b))
                        i, _ = self._item(r.head, r.children, t, lo, hi, holes)
                        out.append((i, Edge(i, -1, (), (), PRIM, r.name)))
        return out

    # -- complete-rep ------------------------------------------------------

    def _register(self, x):
        self._done[x] = True
        self._by_head.setdefault((self.i_head[x], self.i_lo[x], self.i_hi[x]), []).append(x)
        h = self.i_holes[x]
        for s, a in enumerate(self.i_args[x]):
            self._by_arg.setdefault((a, h[2 * s], h[2 * s + 1]), []).append((x, s))

    def _candidates(self, p, s):
        h = self.i_holes[p]
        return self._by_head.get((self.i_args[p][s], h[2 * s], h[2 * s + 1]), ())

    def _combos(self, x):
        """Premise tuples (parent, children) with ``x`` in them and all done.

        Each tuple is produced once: at the first role ``x`` occupies.
        """
        n_max, size_max = self.config.max_holes, self.max_tree_size
        ar, sz, tr = self.tree_arity, self.tree_size, self.i_tree

        def product(p, fixed_slot, fixed):
            k = len(self.i_args[p])
            budget_h = n_max
            budget_s = size_max - sz[tr[p]]
            pools = []
            for s in range(k):
                if s == fixed_slot:
                    pools.append((fixed,))
                elif fixed_slot is not None and s < fixed_slot:
                    pools.append([c for c in self._candidates(p, s) if c != fixed])
                else:
                    pools.append(self._candidates(p, s))
                if not pools[-1]:
                    return
            # prune by remaining hole and size budgets
            yield from _bounded_product(pools, lambda c: ar[tr[c]], budget_h,
                                        lambda c: sz[tr[c]], budget_s)

        if self.i_args[x]:
            for kids in product(x, None, None):
                yield x, kids
        key = (self.i_head[x], self.i_lo[x], self.i_hi[x])
        for p, s in self._by_arg.get(key, ()):
            if p == x:
                continue
            for kids in product(p, s, x):
                yield p, kids

    def _fire(self, p, kids):
        """Apply complete-rep; returns (merged item id, new?, [(comb, weight)])."""
        tr = self.i_tree
        tcs = tuple(tr[c] for c in kids)
        args = tuple(a for c in kids for a in self.i_args[c])
        holes = tuple(x for c in kids for x in self.i_holes[c])
        for s, c in enumerate(kids):
            assert self.i_head[c] == self.i_args[p][s]
        t = self.plug(tr[p], tcs)
        m, new = self._item(self.i_head[p], args, t, self.i_lo[p], self.i_hi[p], holes)
        return m, new, tcs

    # -- drivers -----------------------------------------------------------

    def _close(self, best_first: bool):
        self._done = []
        self._by_head, self._by_arg = {}, {}
        free_only = self.config.free_only
        w = self.weight
        done = self._done

        def grow():
            while len(done) < len(self.i_head):
                done.append(False)

        agenda_heap: list = []
        agenda_fifo: deque = deque()
        counter = itertools.count()

        def push(i):
            if best_first:
                heapq.heappush(agenda_heap, (w[i], next(counter), i))
            else:
                agenda_fifo.append(i)

        for i, e in self.axioms():
            self.edges.append(e)
            self.incoming[i].append(len(self.edges) - 1)
            if w[i] is None:
                w[i] = 1
                push(i)
        grow()

        last = 0
        while agenda_heap or agenda_fifo:
            if best_first:
                wx, _, x = heapq.heappop(agenda_heap)
                if done[x] or wx != w[x]:
                    continue
                if wx < last:
                    raise AssertionError(f"pop order not monotone: {wx} after {last}")
                last = wx
                self.pop_weights.append(wx)
            else:
                x = agenda_fifo.popleft()
            self._register(x)
            if best_first and self.is_goal(x):
                break
            for p, kids in self._combos(x):
                m, new, tcs = self._fire(p, kids)
                if new:
                    grow()
                    if not best_first:
                        push(m)
                for codes in combinators_for(self.i_tree[p], tcs, free_only):
                    e = Edge(m, p, kids, codes, COMPLETE)
                    self.edges.append(e)
                    self.incoming[m].append(len(self.edges) - 1)
                    if best_first:
                        we = w[p] + 1 + sum(w[c] for c, s in zip(kids, codes) if s == _FREE)
                        if w[m] is None or we < w[m]:
                            if done[m]:
                                raise AssertionError("finalized item improved")
                            w[m] = we
                            push(m)
        if not best_first:
            self.relax()
        self.goals = [i for i in range(len(self)) if self.is_goal(i) and w[i] is not None]
        if self.goals:
            self.goal_weight = min(w[i] for i in self.goals)
            if best_first:
                self.goals = [i for i in self.goals if w[i] == self.goal_weight]
        log.debug("closed chart: %d items, %d edges, goal weight %s",
                  len(self), len(self.edges), self.goal_weight)

    def relax(self):
        """Recompute every weight as the min over incoming edges.

        Premises of an edge always have strictly smaller trees than its
        conclusion, so a single pass in tree-size order is exact.
        """
        w = self.weight
        order = sorted(range(len(self)), key=lambda i: self.tree_size[self.i_tree[i]])
        for i in order:
            best = None
            for k in self.incoming[i]:
                e = self.edges[k]
                if e.parent >= 0 and (w[e.parent] is None
                                      or any(w[c] is None for c in e.children)):
                    continue
                we = self.edge_weight(e)
                if best is None or we < best:
                    best = we
            w[i] = best


def _bounded_product(pools, hole_of, hole_budget, size_of, size_budget):
    """Cartesian product of ``pools`` whose hole and size sums stay in budget."""
    k = len(pools)
    acc: list = []

    def go(s, hb, sb):
        if s == k:
            yield tuple(acc)
            return
        for c in pools[s]:
            h, z = hole_of(c), size_of(c)
            if h <= hb and z <= sb:
                acc.append(c)
                yield from go(s + 1, hb - h, sb - z)
                acc.pop()

    yield from go(0, hole_budget, size_budget)


def forward_chain(grammar: Grammar, seq, config: EngineConfig | None = None) -> Chart:
    """Exhaustive closure under scan, prim and complete-rep."""
    chart = Chart(grammar, seq, config)
    chart.exhaustive = True
    chart._close(best_first=False)
    return chart


def best_first_chart(grammar: Grammar, seq, config: EngineConfig | None = None) -> Chart:
    """Agenda-ordered search that stops once the lightest goal is popped."""
    chart = Chart(grammar, seq, config)
    chart._close(best_first=True)
    return chart


def best_first(grammar: Grammar, seq, config: EngineConfig | None = None) -> tuple:
    """Lightest goal item and its weight; raises :class:`NoParse`."""
    return best_first_chart(grammar, seq, config).best()


def scan_rel(grammar: Grammar, seq) -> list:
    chart = Chart(grammar, seq)
    return [(chart.item(i), 1) for i, e in chart.axioms() if e.rule == SCAN]


def prim_rel(grammar: Grammar, n: int, max_holes: int = 3) -> list:
    # the sequence content is irrelevant to prim axioms, only its length
    chart = Chart(grammar, [None] * n, EngineConfig(max_holes=max_holes))
    return [(chart.item(i), 1) for i, e in chart.axioms() if e.rule == PRIM]


def complete_rep(parent: Item, children, m) -> Item | None:
    """Merge ``parent`` with one child per hole under combinator ``m``.

    Returns ``None`` when any side condition fails.
    """
    m = tuple(m)
    children = list(children)
    if len(m) != len(parent.holes) or len(children) != len(m):
        return None
    if len(m) != core.tree_arity(parent.tree):
        return None
    try:
        core.check_comb(m)
    except core.TemplateError:
        return None
    for s, (slot, c) in enumerate(zip(m, children)):
        if isinstance(slot, Ref) and c.tree != children[slot.index].tree:
            return None
        if slot is STAR and c.tree != parent.tree:
            return None
        if c.head != parent.args[s] or tuple(c.span) != tuple(parent.holes[s]):
            return None
        if c.tree is HOLE:
            return None
    tree = core.plug(parent.tree, [c.tree for c in children])
    return Item(tuple(a for c in children for a in c.args), parent.head, tree,
                parent.span, tuple(h for c in children for h in c.holes))
