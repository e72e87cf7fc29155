import json

from hypothesis import HealthCheck, given, settings
from hypothesis import strategies as st

from _instances import cyk, instances
from reptemplate import core, oracle
from reptemplate.analysis import (check_template, enumerate_minimal, extract_minimal,
                                  size_distribution)
from reptemplate.core import FREE, STAR, Pure, Ref, Rep
from reptemplate.engine import EngineConfig, best_first, best_first_chart, forward_chain, merge_weight
from reptemplate.grammar import Grammar, Relation
from reptemplate.serialize import template_from_json, template_to_json

CHAIN = Grammar.build("S", [Relation("p", "S", ("S", "S")), Relation("x", "S", (), "x")])
P, X = Pure("p", 2), Pure("x")


@st.composite
def slots(draw, k):
    """Combinator over ``k`` slots built from free slots and references."""
    out = []
    for i in range(k):
        frees = [j for j, s in enumerate(out) if s is FREE]
        if frees and draw(st.booleans()):
            out.append(Ref(draw(st.sampled_from(frees))))
        else:
            out.append(FREE)
    return tuple(out)


def closed(depth=3):
    """Arity-0 templates over ``CHAIN``."""
    if depth == 0:
        return st.just(X)
    sub = closed(depth - 1)
    heads = st.one_of(
        st.just(P),
        st.just(Rep(P, (STAR, STAR), ())),
        sub.map(lambda c: Rep(P, (STAR, FREE), (c,))),
        sub.map(lambda c: Rep(P, (FREE, STAR), (c,))),
    )

    @st.composite
    def rep(draw):
        h = draw(heads)
        m = draw(slots(core.arity(h)))
        kids = tuple(draw(sub) for _ in range(core.free_count(m)))
        return Rep(h, m, kids)

    return st.one_of(st.just(X), rep())


def leaves(e):
    return len(core.tree_yield(core.evaluate(e)))


@given(closed())
def test_random_templates_check(e):
    assert core.arity(e) == 0
    assert check_template(CHAIN, e, "x" * leaves(e))
    assert not check_template(CHAIN, e, "x" * (leaves(e) + 1))


@given(closed())
def test_size_matches_merge_weight(e):
    if isinstance(e, Rep):
        per_slot = [core.size(c) for c in core.use_rep(e.head, e.comb, e.children)]
        assert core.size(e) == merge_weight(e.comb, core.size(e.head), per_slot)


@given(closed())
def test_template_json_round_trip(e):
    assert template_from_json(json.loads(json.dumps(template_to_json(e))), CHAIN) == e
    if isinstance(e, Rep):
        assert core.parse_comb(core.format_comb(e.comb)) == e.comb


@settings(max_examples=40, deadline=None)
@given(closed(2))
def test_engine_never_beats_nor_misses_a_template(e):
    n = leaves(e)
    if n > 5:
        return
    cfg = EngineConfig(max_holes=n, max_tree_size=0)
    _, w = best_first(CHAIN, "x" * n, cfg)
    assert w <= core.size(e)
    # the oracle lists e itself among the templates of its size
    assert e in oracle.enumerate_all(CHAIN, "x" * n, core.size(e))


@settings(max_examples=30, deadline=None, suppress_health_check=[HealthCheck.too_slow])
@given(st.integers(0, 10 ** 6))
def test_engine_agrees_with_oracle(seed):
    (g, seq), = instances(seed, 1)
    cfg = EngineConfig(max_holes=len(seq), max_tree_size=0)
    chart = forward_chain(g, seq, cfg)
    dist = size_distribution(chart)
    assert dist.counts == dict(oracle.census(g, seq, 100))
    if dist.counts:
        sub = extract_minimal(best_first_chart(g, seq, cfg))
        assert sub.weight == dist.min_size
        for e in enumerate_minimal(sub, 5):
            assert check_template(g, e, seq)
            assert core.size(e) == sub.weight


@settings(max_examples=30, deadline=None)
@given(st.integers(0, 10 ** 6))
def test_free_only_is_context_free_recognition(seed):
    (g, seq), = instances(seed, 1, max_len=6, max_trees=10 ** 9, derived_share=0.5)
    chart = best_first_chart(g, seq, EngineConfig(free_only=True, max_tree_size=0))
    assert bool(chart.goals) == cyk(g, seq)
