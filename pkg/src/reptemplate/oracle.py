"""Brute-force template enumeration for small instances.

Independent of the chart: every relation tree of the sequence is produced
by exhaustive splitting, then every template evaluating to that tree is
generated by decomposition.  A ``Rep e m es`` evaluating to ``T`` cuts ``T``
at an antichain of nodes: the part above the cuts is ``e``'s tree, the cut
subtrees are the slot children, and the combinator picks, per slot, free /
a reference to an equal earlier free sibling / a star when the subtree
equals the head tree.
"""
from __future__ import annotations

import itertools
from collections import Counter
from functools import lru_cache

from . import core
from .analysis import check_template
from .core import FREE, HOLE, STAR, Node, Pure, Ref, Rep
from .grammar import Grammar

MAX_LENGTH = 6


class OracleBoundError(ValueError):
    pass


def derivation_trees(grammar: Grammar, seq, max_nodes: int | None = None) -> set:
    """Relation trees (by name) rooted at the start symbol yielding ``seq``."""
    seq = tuple(seq)
    n = len(seq)
    if max_nodes is None:
        max_nodes = 4 * n
    by_head: dict = {}
    for r in grammar.relations:
        by_head.setdefault(r.head, []).append(r)

    @lru_cache(maxsize=None)
    def trees(x, lo, hi, budget):
        if budget <= 0:
            return frozenset()
        out = set()
        for r in by_head.get(x, ()):
            if r.is_termination:
                if hi == lo + 1 and seq[lo] == r.terminal:
                    out.add(Node(r.name, ()))
                continue
            k = r.arity
            if hi - lo < k:
                continue
            for cuts in itertools.combinations(range(lo + 1, hi), k - 1):
                bounds = (lo, *cuts, hi)
                out.update(_assemble(r, bounds, budget - 1, trees))
        return frozenset(out)

    return set(trees(grammar.start, 0, n, max_nodes))


def _assemble(r, bounds, budget, trees):
    # distribute the node budget greedily: each child may use all of it,
    # then filter by the real total
    parts = [trees(c, a, b, budget) for c, a, b in zip(r.children, bounds, bounds[1:])]
    for combo in itertools.product(*parts):
        if sum(core.tree_size(t) for t in combo) <= budget:
            yield Node(r.name, combo)


def _cuts(t):
    """Antichains of non-root relation nodes covering every hole of ``t``.

    Yields ``(head_tree, subtrees)`` with subtrees in left-to-right order.
    """

    def go(x, is_root):
        # returns list of (replacement, [cut subtrees])
        if x is HOLE:
            return []  # a hole not under a cut cannot be filled by non-Id children
        options = []
        if not is_root:
            options.append((HOLE, [x]))
        if not x.children:
            options.append((x, []))
            return options
        per_child = [go(c, False) for c in x.children]
        if any(not p for p in per_child):
            return options
        for pick in itertools.product(*per_child):
            options.append((Node(x.relation, tuple(p[0] for p in pick)),
                            [s for p in pick for s in p[1]]))
        return options

    for head, subs in go(t, True):
        if subs:
            yield head, tuple(subs)


def _slot_choices(head, subs):
    """Combinators valid for these subtrees (same rules as the chart)."""
    out = []

    def go(i, acc):
        if i == len(subs):
            out.append(tuple(acc))
            return
        acc.append(FREE)
        go(i + 1, acc)
        acc.pop()
        for j in range(i):
            if acc[j] is FREE and subs[j] == subs[i]:
                acc.append(Ref(j))
                go(i + 1, acc)
                acc.pop()
        if subs[i] == head:
            acc.append(STAR)
            go(i + 1, acc)
            acc.pop()

    go(0, [])
    return out


def templates_of(grammar: Grammar, tree) -> list:
    """Every Id-free template whose evaluation is exactly ``tree``."""
    memo: dict = {}

    def go(t):
        if t in memo:
            return memo[t]
        out = []
        if t is not HOLE and all(c is HOLE for c in t.children):
            out.append(Pure(t.relation, grammar.arity_of(t.relation)))
        for head, subs in _cuts(t):
            heads = go(head)
            if not heads:
                continue
            for m in _slot_choices(head, subs):
                frees = [go(s) for s, slot in zip(subs, m) if slot is FREE]
                for e in heads:
                    for kids in itertools.product(*frees):
                        out.append(Rep(e, m, kids))
        memo[t] = out
        return out

    return go(tree)


def enumerate_all(grammar: Grammar, seq, max_size: int) -> list:
    """All accepted templates of size <= ``max_size``, sorted by (size, text)."""
    seq = tuple(seq)
    if not 1 <= len(seq) <= MAX_LENGTH:
        raise OracleBoundError(f"oracle handles sequences of length 1..{MAX_LENGTH}")
    if max_size < 1:
        raise OracleBoundError("max_size must be positive")
    found = set()
    for t in derivation_trees(grammar, seq):
        for e in templates_of(grammar, t):
            if core.size(e) <= max_size and check_template(grammar, e, seq):
                found.add(e)
    return sorted(found, key=lambda e: (core.size(e), repr(e)))


def census(grammar: Grammar, seq, max_size: int) -> Counter:
    return Counter(core.size(e) for e in enumerate_all(grammar, seq, max_size))


def min_size(grammar: Grammar, seq, max_size: int) -> int | None:
    found = enumerate_all(grammar, seq, max_size)
    return core.size(found[0]) if found else None
