"""Relational grammars and the bundled case studies.

A :class:`Relation` is one typed instance ``head R child_1 ... child_n`` or a
termination ``head T terminal``.  Instances sharing a name form one
polymorphic relation; templates and relation trees only see the name.
"""
from __future__ import annotations

from collections import defaultdict
from dataclasses import dataclass, field
from functools import cached_property

from .core import HOLE, CompTree, Node

MAX_ARITY = 2


class GrammarError(ValueError):
    def __init__(self, violations):
        self.violations = list(violations)
        super().__init__("; ".join(self.violations))


@dataclass(frozen=True)
class Relation:
    name: str
    head: str
    children: tuple = ()
    terminal: str | None = None

    @property
    def is_termination(self) -> bool:
        return self.terminal is not None

    @property
    def arity(self) -> int:
        return len(self.children)

    def __repr__(self):
        if self.is_termination:
            return f"{self.head} {self.name} {self.terminal!r}"
        return f"{self.head} {self.name} {' '.join(self.children)}".rstrip()


@dataclass(frozen=True)
class Grammar:
    start: str
    nonterminals: frozenset
    terminals: frozenset
    relations: tuple = field(default_factory=tuple)

    @classmethod
    def build(cls, start, relations, nonterminals=None, terminals=None):
        """Grammar whose symbol sets default to the ones the relations mention."""
        relations = tuple(relations)
        if nonterminals is None:
            nonterminals = {start}
            for r in relations:
                nonterminals.add(r.head)
                nonterminals.update(r.children)
        if terminals is None:
            terminals = {r.terminal for r in relations if r.is_termination}
        return cls(start, frozenset(nonterminals), frozenset(terminals), relations)

    # -- lookups -----------------------------------------------------------

    @cached_property
    def families(self) -> dict:
        """Relation name -> list of typed instances."""
        out = defaultdict(list)
        for r in self.relations:
            out[r.name].append(r)
        return dict(out)

    @cached_property
    def internal(self) -> tuple:
        return tuple(r for r in self.relations if not r.is_termination)

    @cached_property
    def terminations(self) -> tuple:
        return tuple(r for r in self.relations if r.is_termination)

    @cached_property
    def _by_terminal(self) -> dict:
        out = defaultdict(list)
        for r in self.terminations:
            out[r.terminal].append(r)
        return dict(out)

    def scan(self, token) -> list:
        """Termination instances emitting ``token``."""
        return self._by_terminal.get(token, [])

    def arity_of(self, name: str) -> int:
        return self.families[name][0].arity

    def is_termination(self, name: str) -> bool:
        return self.families[name][0].is_termination

    # -- validation --------------------------------------------------------

    def validate(self) -> list:
        """All violated invariants; empty when the grammar is well formed."""
        out = []
        if self.start not in self.nonterminals:
            out.append(f"start symbol {self.start!r} is not a nonterminal")
        if not self.terminations:
            out.append("no termination relation")
        clash = self.nonterminals & self.terminals
        if clash:
            out.append(f"symbols are both terminal and nonterminal: {sorted(clash)}")
        for r in self.relations:
            if not r.name:
                out.append(f"relation {r!r}: empty name")
            if r.head not in self.nonterminals:
                out.append(f"relation {r.name}: undeclared head {r.head!r}")
            for c in r.children:
                if c not in self.nonterminals:
                    out.append(f"relation {r.name}: undeclared child {c!r}")
            if r.is_termination:
                if r.children:
                    out.append(f"relation {r.name}: termination with children")
                if r.terminal not in self.terminals:
                    out.append(f"relation {r.name}: undeclared terminal {r.terminal!r}")
            else:
                if r.arity > MAX_ARITY:
                    out.append(f"relation {r.name}: arity > {MAX_ARITY}")
                if r.arity == 0:
                    out.append(f"relation {r.name}: arity 0 internal relation")
        for name, fam in self.families.items():
            kinds = {(r.is_termination, r.arity) for r in fam}
            if len(kinds) > 1:
                out.append(f"relation {name}: instances disagree on kind or arity")
        if len(set(self.relations)) != len(self.relations):
            out.append("duplicate relation instances")
        return out

    def check(self) -> "Grammar":
        v = self.validate()
        if v:
            raise GrammarError(v)
        return self

    # -- typing ------------------------------------------------------------

    def spans(self, tree: CompTree, seq, lo: int, _memo=None) -> set:
        """Typed matches of ``tree`` against ``seq`` starting at ``lo``.

        Returns ``{(head, hi)}``: some typing of ``tree`` has root ``head`` and
        its yield covers ``seq[lo:hi]``.  A hole matches any nonempty span at
        any nonterminal.
        """
        memo = {} if _memo is None else _memo
        key = (id(tree), lo)
        if key in memo:
            return memo[key]
        n = len(seq)
        out = set()
        if tree is HOLE:
            out = {(x, hi) for x in self.nonterminals for hi in range(lo + 1, n + 1)}
        elif tree.relation in self.families:
            fam = self.families[tree.relation]
            if not tree.children:
                if lo < n:
                    out = {(r.head, lo + 1) for r in fam
                           if r.is_termination and r.terminal == seq[lo]}
            else:
                for r in fam:
                    if r.is_termination or r.arity != len(tree.children):
                        continue
                    frontier = {lo}
                    for want, child in zip(r.children, tree.children):
                        nxt = set()
                        for p in frontier:
                            nxt.update(hi for x, hi in self.spans(child, seq, p, memo) if x == want)
                        frontier = nxt
                        if not frontier:
                            break
                    out.update((r.head, hi) for hi in frontier)
        memo[key] = out
        return out

    def derives(self, tree: CompTree, seq) -> set:
        """Root heads under which ``tree`` yields exactly ``seq``."""
        seq = list(seq)
        return {x for x, hi in self.spans(tree, seq, 0) if hi == len(seq)}


# ---------------------------------------------------------------------------
# Bundled grammars

ROOTS = ("C", "Db", "D", "Eb", "E", "F", "Gb", "G", "Ab", "A", "Bb", "B")
QUALITIES = ("maj7", "7", "m7")
# quality of the diatonic chord a fifth above: I -> V7 -> ii7 -> vi7
_FIFTH_QUALITY = {"maj7": "7", "7": "m7", "m7": "m7"}


def chord(root: int, quality: str) -> str:
    return ROOTS[root % 12] + quality


def split_chord(name: str) -> tuple:
    for q in sorted(QUALITIES, key=len, reverse=True):
        if name.endswith(q) and name[: -len(q)] in ROOTS:
            return ROOTS.index(name[: -len(q)]), q
    raise ValueError(f"not a chord symbol: {name!r}")


def fifth_above(name: str) -> str:
    """Diatonic chord whose root lies a fifth above (the D5 preparation)."""
    r, q = split_chord(name)
    return chord(r + 7, _FIFTH_QUALITY[q])


def applied_dominant(name: str) -> str:
    """Dominant seventh chord a fifth above (secondary dominant)."""
    r, _ = split_chord(name)
    return chord(r + 7, "7")


def jazz_grammar(start: str = "Fmaj7") -> Grammar:
    """Simplified jazz harmony: prolongation, descending fifth, applied dominant.

    Every chord symbol is a nonterminal and, through ``Chord``, a terminal
    spelled the same way.  Nonterminals are ``"<chord>"`` to keep the two
    namespaces disjoint.
    """
    chords = [chord(r, q) for r in range(12) for q in QUALITIES]
    nt = {c: f"<{c}>" for c in chords}
    rels = []
    for c in chords:
        x = nt[c]
        rels.append(Relation("Prol", x, (x, x)))
        rels.append(Relation("D5", x, (nt[fifth_above(c)], x)))
        rels.append(Relation("AppD", x, (nt[applied_dominant(c)], x)))
        rels.append(Relation("Chord", x, (), c))
    return Grammar.build(nt[start], rels, set(nt.values()), set(chords))


def coffee_grammar() -> Grammar:
    """Hierarchical plan for making coffee from ground coffee and water.

    A reconstruction.  Both ingredients are prepared by the same polymorphic
    ``Prepare`` relation ("measure x, then load x into the machine"), which is
    what makes the two segments a structural repeat.
    The plan can also be read sequentially (ground coffee first, then water
    and brewing as one remaining task), so several relation trees compete.
    """
    rels = [
        Relation("Then", "MakeCoffee", ("Ingredients", "Brew")),
        Relation("Both", "Ingredients", ("PrepGround", "PrepWater")),
        Relation("Then", "MakeCoffee", ("PrepGround", "WaterAndBrew")),
        Relation("Then", "WaterAndBrew", ("PrepWater", "Brew")),
        Relation("Both", "WaterAndBrew", ("PrepWater", "Brew")),
        Relation("Prepare", "PrepGround", ("MeasureGround", "LoadGround")),
        Relation("Prepare", "PrepWater", ("MeasureWater", "LoadWater")),
        Relation("Measure", "MeasureGround", (), "scoop_ground_coffee"),
        Relation("Measure", "MeasureWater", (), "fill_cup_with_water"),
        Relation("Load", "LoadGround", (), "pour_ground_into_filter"),
        Relation("Load", "LoadWater", (), "pour_water_into_tank"),
        Relation("Press", "Brew", (), "press_start"),
    ]
    return Grammar.build("MakeCoffee", rels)


# chain of ii-V progressions, each resolving into the next ii, ending on I in F
JAZZ_SEQUENCE = ("Bm7", "E7", "Am7", "D7", "Gm7", "C7", "Fmaj7")
COFFEE_SEQUENCE = (
    "scoop_ground_coffee", "pour_ground_into_filter",
    "fill_cup_with_water", "pour_water_into_tank",
    "press_start",
)

_BUILTINS = {
    "jazz": (jazz_grammar, JAZZ_SEQUENCE),
    "coffee": (coffee_grammar, COFFEE_SEQUENCE),
}


def builtin_grammar(name: str) -> Grammar:
    try:
        return _BUILTINS[name][0]()
    except KeyError:
        raise KeyError(f"unknown grammar bundle {name!r}; known: {sorted(_BUILTINS)}") from None


def builtin_sequence(name: str) -> tuple:
    try:
        return _BUILTINS[name][1]
    except KeyError:
        raise KeyError(f"unknown grammar bundle {name!r}; known: {sorted(_BUILTINS)}") from None


def builtin_names() -> list:
    return sorted(_BUILTINS)
