import pytest

from reptemplate.grammar import Grammar, Relation


@pytest.fixture
def toy():
    """S -> A A, A -> "a": the smallest grammar with a shareable repeat."""
    return Grammar.build("S", [Relation("g", "S", ("A", "A")), Relation("a", "A", (), "a")])


@pytest.fixture
def chain():
    """S -> S S | "x": every binary bracketing is a derivation."""
    return Grammar.build("S", [Relation("p", "S", ("S", "S")), Relation("x", "S", (), "x")])
