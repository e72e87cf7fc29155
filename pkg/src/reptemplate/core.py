"""Template expressions, repetition combinators and relation trees.

A template is built from three constructors:

    Id                identity (a single hole)
    Pure r            one primitive relation
    Rep e m [e1..ek]  the head ``e`` composed with the children chosen by
                      the combinator ``m``

Relation trees (``CompTree``) are labelled by relation *name* only, so a
relation that has several typed instances (e.g. one ``Prol`` per chord) is a
single polymorphic label.  Typing lives in :mod:`reptemplate.grammar`.
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import Callable, Iterator, Sequence, Union


class TemplateError(ValueError):
    """Structurally invalid template expression."""


class CombinatorArityError(TemplateError):
    pass


class CombinatorShapeError(TemplateError):
    pass


# ---------------------------------------------------------------------------
# Relation trees


class _Hole:
    __slots__ = ()
    _instance = None

    def __new__(cls):
        if cls._instance is None:
            cls._instance = super().__new__(cls)
        return cls._instance

    def __repr__(self):
        return "HOLE"

    def __reduce__(self):
        return (_Hole, ())


HOLE = _Hole()


@dataclass(frozen=True)
class Node:
    relation: str
    children: tuple = ()

    def __repr__(self):
        if not self.children:
            return self.relation
        return f"{self.relation}({', '.join(map(repr, self.children))})"


CompTree = Union[Node, _Hole]


def tree_arity(t: CompTree) -> int:
    if t is HOLE:
        return 1
    return sum(tree_arity(c) for c in t.children)


def tree_size(t: CompTree) -> int:
    """Number of relation nodes (holes excluded)."""
    if t is HOLE:
        return 0
    return 1 + sum(tree_size(c) for c in t.children)


def frontier(t: CompTree) -> list:
    """Leaf relation names and holes, left to right."""
    out: list = []
    stack = [t]
    while stack:
        x = stack.pop()
        if x is HOLE:
            out.append(HOLE)
        elif not x.children:
            out.append(x.relation)
        else:
            stack.extend(reversed(x.children))
    return out


def tree_yield(t: CompTree, emit: Callable[[str], str] | dict | None = None) -> list:
    """Terminals emitted by the termination leaves of ``t``, with ``HOLE`` markers.

    ``emit`` maps a termination relation name to its terminal.  It may be a
    dict or a callable; by default the leaf name itself is used.
    """
    if emit is None:
        f = lambda name: name  # noqa: E731
    elif isinstance(emit, dict):
        f = emit.__getitem__
    else:
        f = emit
    return [x if x is HOLE else f(x) for x in frontier(t)]


def plug(t: CompTree, fillers: Sequence[CompTree]) -> CompTree:
    """Replace the holes of ``t`` left to right by ``fillers``."""
    if tree_arity(t) != len(fillers):
        raise TemplateError(f"tree has {tree_arity(t)} holes, got {len(fillers)} fillers")
    it = iter(fillers)

    def go(x):
        if x is HOLE:
            return next(it)
        if not x.children:
            return x
        return Node(x.relation, tuple(go(c) for c in x.children))

    return go(t)


# ---------------------------------------------------------------------------
# Combinators


class _Free:
    __slots__ = ()
    _instance = None

    def __new__(cls):
        if cls._instance is None:
            cls._instance = super().__new__(cls)
        return cls._instance

    def __repr__(self):
        return "_"

    def __reduce__(self):
        return (_Free, ())


class _Star:
    __slots__ = ()
    _instance = None

    def __new__(cls):
        if cls._instance is None:
            cls._instance = super().__new__(cls)
        return cls._instance

    def __repr__(self):
        return "★"

    def __reduce__(self):
        return (_Star, ())


FREE = _Free()
STAR = _Star()


@dataclass(frozen=True)
class Ref:
    """Sibling repeat: copy the child placed at absolute slot ``index``."""

    index: int

    def __repr__(self):
        return str(self.index)


Slot = Union[_Free, _Star, Ref]
Combinator = tuple  # tuple of Slot


def comb(*slots) -> Combinator:
    """Build a combinator from ``"_"``, ``"*"``/``"★"`` and integers."""
    out = []
    for s in slots:
        if s in ("_", FREE):
            out.append(FREE)
        elif s in ("*", "★", STAR):
            out.append(STAR)
        elif isinstance(s, Ref):
            out.append(s)
        elif isinstance(s, int):
            out.append(Ref(s))
        else:
            raise CombinatorShapeError(f"unknown slot {s!r}")
    return tuple(out)


def parse_comb(text: str) -> Combinator:
    """Inverse of :func:`format_comb`; accepts ``<_ 0 *>`` or ``⟨_ 0 ★⟩``."""
    body = text.strip().lstrip("⟨<").rstrip("⟩>")
    return comb(*[int(s) if s.isdigit() else s for s in body.split()])


def format_comb(m: Combinator) -> str:
    return "⟨" + " ".join(map(repr, m)) + "⟩"


def free_count(m: Combinator) -> int:
    return sum(1 for s in m if s is FREE)


def check_comb(m: Combinator) -> None:
    for i, s in enumerate(m):
        if isinstance(s, Ref):
            if not 0 <= s.index < i:
                raise CombinatorShapeError(f"slot {i}: reference {s.index} is not an earlier slot")
            if m[s.index] is not FREE:
                raise CombinatorShapeError(f"slot {i}: reference {s.index} is not a free slot")
        elif s is not FREE and s is not STAR:
            raise CombinatorShapeError(f"slot {i}: unknown slot {s!r}")


# ---------------------------------------------------------------------------
# Template expressions


@dataclass(frozen=True)
class Id:
    def __repr__(self):
        return "Id"


@dataclass(frozen=True)
class Pure:
    relation: str
    arity: int = 0

    def __repr__(self):
        return f"Pure {self.relation}"


@dataclass(frozen=True)
class Rep:
    head: "TemplateExpr"
    comb: Combinator
    children: tuple = ()

    def __repr__(self):
        kids = ", ".join(map(repr, self.children))
        h = repr(self.head)
        if not isinstance(self.head, Id):
            h = f"({h})"
        return f"Rep {h} {format_comb(self.comb)} [{kids}]"


TemplateExpr = Union[Id, Pure, Rep]


def use_rep(head: TemplateExpr, m: Combinator, children: Sequence[TemplateExpr]) -> list:
    """Expand a combinator: one expression per slot.

    Free slots take ``children`` in order, ``Ref(i)`` repeats whatever slot
    ``i`` received and a star slot repeats the head.
    """
    m = tuple(m)
    check_comb(m)
    if len(m) != arity(head):
        raise CombinatorArityError(f"combinator has {len(m)} slots, head has arity {arity(head)}")
    if free_count(m) != len(children):
        raise CombinatorArityError(
            f"combinator has {free_count(m)} free slots, got {len(children)} children")
    out: list = []
    it = iter(children)
    for s in m:
        if s is FREE:
            out.append(next(it))
        elif s is STAR:
            out.append(head)
        else:
            out.append(out[s.index])
    return out


def arity(e: TemplateExpr) -> int:
    if isinstance(e, Id):
        return 1
    if isinstance(e, Pure):
        return e.arity
    if isinstance(e, Rep):
        return sum(arity(x) for x in use_rep(e.head, e.comb, e.children))
    raise TemplateError(f"not a template expression: {e!r}")


def size(e: TemplateExpr) -> int:
    """Description length: 1 per Id/Pure, 1 per combinator, free children only."""
    if isinstance(e, (Id, Pure)):
        return 1
    if isinstance(e, Rep):
        if free_count(e.comb) != len(e.children):
            raise TemplateError("free slot count does not match number of children")
        return size(e.head) + 1 + sum(size(c) for c in e.children)
    raise TemplateError(f"not a template expression: {e!r}")


def check_expr(e: TemplateExpr) -> None:
    """Raise :class:`TemplateError` unless ``e`` is well formed."""
    if isinstance(e, Id):
        return
    if isinstance(e, Pure):
        if not e.relation or e.arity < 0:
            raise TemplateError(f"bad primitive {e!r}")
        return
    if isinstance(e, Rep):
        check_expr(e.head)
        for c in e.children:
            check_expr(c)
        use_rep(e.head, e.comb, e.children)
        return
    raise TemplateError(f"not a template expression: {e!r}")


def evaluate(e: TemplateExpr) -> CompTree:
    """Relation tree denoted by ``e``; holes are the remaining arguments."""
    if isinstance(e, Id):
        return HOLE
    if isinstance(e, Pure):
        return Node(e.relation, (HOLE,) * e.arity)
    if isinstance(e, Rep):
        t = evaluate(e.head)
        cache: dict = {}
        fillers = []
        for x in use_rep(e.head, e.comb, e.children):
            k = id(x)
            if k not in cache:
                cache[k] = t if x is e.head else evaluate(x)
            fillers.append(cache[k])
        return plug(t, fillers)
    raise TemplateError(f"not a template expression: {e!r}")


def subexprs(e: TemplateExpr) -> Iterator[TemplateExpr]:
    """Pre-order walk over the syntax of ``e``."""
    yield e
    if isinstance(e, Rep):
        yield from subexprs(e.head)
        for c in e.children:
            yield from subexprs(c)


def combinators(e: TemplateExpr) -> list:
    return [x.comb for x in subexprs(e) if isinstance(x, Rep)]


def embed_derivation(d: Node) -> TemplateExpr:
    """Trivial embedding of a complete derivation tree (no repetition)."""
    if d is HOLE:
        raise TemplateError("derivation trees have no holes")
    if not d.children:
        return Pure(d.relation, 0)
    k = len(d.children)
    return Rep(Pure(d.relation, k), (FREE,) * k, tuple(embed_derivation(c) for c in d.children))
