"""JSON forms of grammars and templates.

Grammar::

    {"start": "S", "nonterminals": [...], "terminals": [...],
     "relations": [{"name": "g", "head": "S", "children": ["A", "A"]}],
     "terminations": [{"name": "a", "head": "A", "terminal": "a"}]}

Template::

    {"pure": "g"}  |  "id"  |
    {"rep": {"head": <template>, "comb": ["free", {"ref": 0}, "star"],
             "children": [<template>, ...]}}
"""
from __future__ import annotations

import json
from pathlib import Path

from .core import FREE, STAR, Id, Pure, Ref, Rep, TemplateError
from .grammar import Grammar, Relation


class FormatError(ValueError):
    pass


def grammar_to_dict(g: Grammar) -> dict:
    return {
        "start": g.start,
        "nonterminals": sorted(g.nonterminals),
        "terminals": sorted(g.terminals),
        "relations": [{"name": r.name, "head": r.head, "children": list(r.children)}
                      for r in g.internal],
        "terminations": [{"name": r.name, "head": r.head, "terminal": r.terminal}
                         for r in g.terminations],
    }


def grammar_from_dict(d: dict) -> Grammar:
    try:
        rels = [Relation(r["name"], r["head"], tuple(r.get("children", ())))
                for r in d.get("relations", [])]
        rels += [Relation(r["name"], r["head"], (), r["terminal"])
                 for r in d.get("terminations", [])]
        nts = d.get("nonterminals")
        ts = d.get("terminals")
        return Grammar.build(d["start"], rels,
                             None if nts is None else set(nts),
                             None if ts is None else set(ts))
    except (KeyError, TypeError, AttributeError) as exc:
        raise FormatError(f"bad grammar document: {exc!r}") from None


def load_grammar(path) -> Grammar:
    try:
        data = json.loads(Path(path).read_text(encoding="utf-8"))
    except json.JSONDecodeError as exc:
        raise FormatError(f"{path}: {exc}") from None
    return grammar_from_dict(data)


def _slot_to_json(s):
    if s is FREE:
        return "free"
    if s is STAR:
        return "star"
    return {"ref": s.index}


def _slot_from_json(x):
    if x == "free":
        return FREE
    if x == "star":
        return STAR
    if isinstance(x, dict) and isinstance(x.get("ref"), int):
        return Ref(x["ref"])
    raise FormatError(f"bad combinator slot {x!r}")


def template_to_json(e):
    if isinstance(e, Id):
        return "id"
    if isinstance(e, Pure):
        return {"pure": e.relation}
    if isinstance(e, Rep):
        return {"rep": {"head": template_to_json(e.head),
                        "comb": [_slot_to_json(s) for s in e.comb],
                        "children": [template_to_json(c) for c in e.children]}}
    raise TemplateError(f"not a template expression: {e!r}")


def template_from_json(x, grammar: Grammar):
    """Rebuild a template; relation arities come from ``grammar``."""
    if x == "id":
        return Id()
    if not isinstance(x, dict) or len(x) != 1:
        raise FormatError(f"bad template node {x!r}")
    if "pure" in x:
        name = x["pure"]
        if name not in grammar.families:
            raise FormatError(f"unknown relation {name!r}")
        return Pure(name, grammar.arity_of(name))
    if "rep" in x:
        r = x["rep"]
        if not isinstance(r, dict) or {"head", "comb", "children"} - set(r):
            raise FormatError("rep node needs head, comb and children")
        return Rep(template_from_json(r["head"], grammar),
                   tuple(_slot_from_json(s) for s in r["comb"]),
                   tuple(template_from_json(c, grammar) for c in r["children"]))
    raise FormatError(f"bad template node {x!r}")
