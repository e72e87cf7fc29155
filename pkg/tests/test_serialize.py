import json

import pytest

from reptemplate.core import Id, Pure, Rep, comb
from reptemplate.grammar import builtin_grammar
from reptemplate.render import to_dot, to_text, trace
from reptemplate.serialize import (FormatError, grammar_from_dict, grammar_to_dict, load_grammar,
                                   template_from_json, template_to_json)

SHARED = Rep(Pure("g", 2), comb("_", 0), (Pure("a"),))


def test_grammar_round_trip(tmp_path):
    g = builtin_grammar("coffee")
    doc = grammar_to_dict(g)
    assert set(doc) == {"start", "nonterminals", "terminals", "relations", "terminations"}
    p = tmp_path / "g.json"
    p.write_text(json.dumps(doc), encoding="utf-8")
    h = load_grammar(p)
    assert h.start == g.start and set(h.relations) == set(g.relations)


def test_grammar_bad_documents(tmp_path):
    with pytest.raises(FormatError):
        grammar_from_dict({"relations": []})
    with pytest.raises(FormatError):
        grammar_from_dict({"start": "S", "relations": [{"head": "S"}]})
    p = tmp_path / "g.json"
    p.write_text('{"start": "S", ', encoding="utf-8")
    with pytest.raises(FormatError):
        load_grammar(p)


def test_template_round_trip(toy):
    doc = template_to_json(SHARED)
    assert doc == {"rep": {"head": {"pure": "g"}, "comb": ["free", {"ref": 0}],
                           "children": [{"pure": "a"}]}}
    assert template_from_json(doc, toy) == SHARED
    star = Rep(Pure("g", 2), comb("*", "_"), (Id(),))
    assert template_from_json(json.loads(json.dumps(template_to_json(star))), toy) == star


@pytest.mark.parametrize("doc", [
    {"pure": "nope"},
    {"rep": {"head": {"pure": "g"}}},
    {"rep": {"head": {"pure": "g"}, "comb": ["both"], "children": []}},
    {"pure": "g", "extra": 1},
    [1, 2],
])
def test_template_bad(toy, doc):
    with pytest.raises(FormatError):
        template_from_json(doc, toy)


def test_trace_tags_shared_pair():
    root = trace(SHARED)
    assert root.relation == "g"
    assert [c.tags for c in root.children] == [["r1.0"], ["r1.0"]]
    assert root.tags == []


def test_trace_tags_star():
    e = Rep(Rep(Pure("p", 2), comb("*", "_"), (Pure("x"),)), comb("_", 0), (Pure("x"),))
    root = trace(e)
    assert "r2.★" in root.tags and "r2.★" in root.children[0].tags


def test_render_formats():
    dot = to_dot(SHARED, "aa")
    assert dot.startswith('digraph "template" {') and dot.rstrip().endswith("}")
    assert "cluster_tree" in dot and 'xlabel="r1.0"' in dot
    assert dot.count("fillcolor") == 2
    assert to_text(SHARED, "aa").splitlines() == ["g", "  a 'a'  [r1.0]", "  a 'a'  [r1.0]"]


def test_render_single_node():
    dot = to_dot(Pure("a"), ["a"])
    tree_part = dot.split("cluster_tree")[1]
    assert tree_part.count("[label=") == 1
