"""Graphviz (DOT) and text rendering of a template and its relation tree.

Subtrees produced by a repetition are tagged with the Rep node they come
from: ``r<k>.<j>`` marks the free slot ``j`` of Rep number ``k`` and every
slot that references it, ``r<k>.★`` marks a head and its star copies.
"""
from __future__ import annotations

import itertools

from .core import FREE, STAR, Id, Pure, Rep, format_comb

PALETTE = ("#f6d55c", "#8fd3fe", "#b5e48c", "#f4a6a6", "#cdb4db", "#ffd6a5", "#a0c4ff")


class _TNode:
    __slots__ = ("relation", "children", "tags")

    def __init__(self, relation, children=(), tags=()):
        self.relation = relation
        self.children = list(children)
        self.tags = list(tags)

    def copy(self):
        return _TNode(self.relation, [c.copy() if c is not None else None for c in self.children],
                      self.tags)

    def nodes(self):
        yield self
        for c in self.children:
            if c is not None:
                yield from c.nodes()


def _fill(t, fillers):
    it = iter(fillers)

    def go(x):
        if x is None:
            return next(it)
        x.children = [go(c) for c in x.children]
        return x

    return go(t)


def trace(e):
    """Evaluate ``e`` keeping, per relation node, the repetition tags it carries."""
    counter = itertools.count(1)

    def go(x):
        if isinstance(x, Id):
            return None
        if isinstance(x, Pure):
            return _TNode(x.relation, [None] * x.arity)
        k = next(counter)
        head = go(x.head)
        kids = iter(x.children)
        subs = []
        for s in x.comb:
            if s is FREE:
                subs.append(go(next(kids)))
            elif s is STAR:
                subs.append(head.copy() if head is not None else None)
            else:
                subs.append(subs[s.index].copy() if subs[s.index] is not None else None)
        for i, s in enumerate(x.comb):
            if s is FREE or subs[i] is None:
                continue
            if s is STAR:
                tag = f"r{k}.★"
                _tag(head, tag)
            else:
                tag = f"r{k}.{s.index}"
                _tag(subs[s.index], tag)
            _tag(subs[i], tag)
        base = head.copy() if head is not None else None
        if base is None:
            return subs[0]
        return _fill(base, subs)

    return go(e)


def _tag(t, tag):
    if t is None:
        return
    for n in t.nodes():
        if tag not in n.tags:
            n.tags.append(tag)


def _esc(s):
    return str(s).replace("\\", "\\\\").replace('"', '\\"')


def to_dot(e, seq=None, name="template") -> str:
    """DOT document with the template syntax tree and its relation tree."""
    lines = [f'digraph "{_esc(name)}" {{', "  node [shape=box, fontname=Helvetica];"]
    ids = itertools.count()

    lines.append('  subgraph cluster_template { label="template program";')

    def expr(x):
        i = next(ids)
        if isinstance(x, Rep):
            lines.append(f'    n{i} [label="Rep {_esc(format_comb(x.comb))}", shape=ellipse];')
            h = expr(x.head)
            lines.append(f'    n{i} -> n{h} [label="head"];')
            for c in x.children:
                lines.append(f"    n{i} -> n{expr(c)};")
        else:
            lines.append(f'    n{i} [label="{_esc(repr(x))}"];')
        return i

    expr(e)
    lines.append("  }")

    root = trace(e)
    groups = sorted({t for n in (root.nodes() if root else ()) for t in n.tags})
    color = {g: PALETTE[i % len(PALETTE)] for i, g in enumerate(groups)}
    tokens = iter(seq or ())
    lines.append('  subgraph cluster_tree { label="relation tree";')

    def node(x):
        i = next(ids)
        if x is None:
            lines.append(f'    n{i} [label="□", shape=plaintext];')
            return i
        label = x.relation
        if not x.children:
            tok = next(tokens, None)
            if tok is not None:
                label += f"\\n{tok}"
        attrs = [f'label="{_esc(label)}"']
        if x.tags:
            attrs.append(f'style=filled, fillcolor="{color[x.tags[-1]]}"')
            attrs.append(f'xlabel="{_esc(" ".join(x.tags))}"')
        lines.append(f"    n{i} [{', '.join(attrs)}];")
        for c in x.children:
            lines.append(f"    n{i} -> n{node(c)};")
        return i

    node(root)
    lines.append("  }")
    lines.append("}")
    return "\n".join(lines) + "\n"


def to_text(e, seq=None) -> str:
    """Indented relation tree, one node per line, with repetition tags."""
    out = []
    tokens = iter(seq or ())

    def go(x, depth):
        pad = "  " * depth
        if x is None:
            out.append(pad + "□")
            return
        label = x.relation
        if not x.children:
            tok = next(tokens, None)
            if tok is not None:
                label += f" {tok!r}"
        if x.tags:
            label += "  [" + " ".join(x.tags) + "]"
        out.append(pad + label)
        for c in x.children:
            go(c, depth + 1)

    go(trace(e), 0)
    return "\n".join(out) + "\n"
