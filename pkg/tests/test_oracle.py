"""Hand-derived expectations for the brute-force enumerator."""
import pytest

from reptemplate import oracle
from reptemplate.core import Node, Pure, Rep, comb
from reptemplate.grammar import Grammar, Relation

SHARED = Rep(Pure("g", 2), comb("_", 0), (Pure("a"),))
PLAIN = Rep(Pure("g", 2), comb("_", "_"), (Pure("a"), Pure("a")))


def test_toy_enumeration(toy):
    assert oracle.enumerate_all(toy, "aa", 10) == [SHARED, PLAIN]
    assert oracle.census(toy, "aa", 10) == {3: 1, 4: 1}
    assert oracle.min_size(toy, "aa", 10) == 3
    assert oracle.census(toy, "aa", 3) == {3: 1}


def test_no_parse(toy):
    assert oracle.enumerate_all(toy, "aaa", 10) == []
    assert oracle.min_size(toy, "a", 10) is None


def test_derivation_trees(chain):
    # Catalan numbers
    assert [len(oracle.derivation_trees(chain, "x" * n)) for n in range(1, 6)] == [1, 1, 2, 5, 14]


def test_templates_of_three_leaves(chain):
    t = Node("p", (Node("p", (Node("x"), Node("x"))), Node("x")))
    got = {repr(e) for e in oracle.templates_of(chain, t)}
    # the left child can be shared, starred or spelled out
    assert "Rep (Rep (Pure p) ⟨★ _⟩ [Pure x]) ⟨_ 0⟩ [Pure x]" in got
    assert "Rep (Pure p) ⟨_ _⟩ [Rep (Pure p) ⟨_ 0⟩ [Pure x], Pure x]" in got
    assert "Rep (Rep (Pure p) ⟨_ ★⟩ [Pure x]) ⟨_ 0⟩ [Pure x]" not in got


def test_two_leaf_census_by_hand():
    # S -> A B with distinct leaves: nothing to share, one template
    g = Grammar.build("S", [Relation("g", "S", ("A", "B")), Relation("a", "A", (), "a"),
                            Relation("b", "B", (), "b")])
    assert oracle.census(g, "ab", 10) == {4: 1}


def test_bounds(toy):
    with pytest.raises(oracle.OracleBoundError):
        oracle.enumerate_all(toy, "a" * 7, 10)
    with pytest.raises(oracle.OracleBoundError):
        oracle.enumerate_all(toy, "", 10)
    with pytest.raises(oracle.OracleBoundError):
        oracle.enumerate_all(toy, "aa", 0)
