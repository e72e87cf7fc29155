"""Acceptance criteria, one test each; every test prints a PASS/FAIL line.

Run alone with ``pytest tests/test_acceptance.py -v`` or as a script.
"""
import time

import pytest

from _instances import cyk, instances
from reptemplate import core, oracle
from reptemplate.analysis import (check_template, enumerate_minimal, extract_minimal,
                                  size_distribution)
from reptemplate.core import STAR, Pure, Rep, comb
from reptemplate.engine import EngineConfig, best_first_chart, forward_chain
from reptemplate.grammar import (COFFEE_SEQUENCE, JAZZ_SEQUENCE, Grammar, Relation,
                                 builtin_grammar)

RANDOM_SEED = 2024
RANDOM_COUNT = 250
CYK_COUNT = 150


def report(capsys, number, ok, detail):
    line = f"{'PASS' if ok else 'FAIL'} criterion {number}: {detail}"
    with capsys.disabled():
        print("\n" + line)
    assert ok, line


def full(seq):
    """Bounds that make the search complete for ``seq``."""
    return EngineConfig(max_holes=len(seq), max_tree_size=0)


@pytest.fixture(scope="module")
def random_runs():
    """Engine and oracle results on the shared random instances, with timing."""
    runs = []
    t0 = time.perf_counter()
    for g, seq in instances(RANDOM_SEED, RANDOM_COUNT):
        cfg = full(seq)
        dist = size_distribution(forward_chain(g, seq, cfg))
        census = dict(oracle.census(g, seq, 100))
        # the agenda asserts nondecreasing pops while it runs
        bf = best_first_chart(g, seq, cfg)
        templates = enumerate_minimal(extract_minimal(bf), 10) if bf.goals else []
        runs.append({"grammar": g, "seq": seq, "dist": dist, "census": census, "bf": bf,
                     "exhaustive_min": dist.min_size, "templates": templates})
    return runs, time.perf_counter() - t0


def test_criterion_1_oracle_equivalence(capsys, random_runs):
    runs, elapsed = random_runs
    oracle_min = [min(r["census"]) if r["census"] else None for r in runs]
    min_ok = sum(r["exhaustive_min"] == m for r, m in zip(runs, oracle_min))
    dist_ok = sum(r["dist"].counts == r["census"] for r in runs)
    parsed = sum(bool(r["census"]) for r in runs)
    ok = len(runs) >= 200 and min_ok == dist_ok == len(runs) and elapsed < 120
    report(capsys, 1, ok,
           f"{len(runs)} instances ({parsed} parseable): min size {min_ok}/{len(runs)}, "
           f"distribution {dist_ok}/{len(runs)}, {elapsed:.1f}s (< 120s)")


def test_criterion_2_sharing_toy(capsys):
    g = Grammar.build("S", [Relation("g", "S", ("A", "A")), Relation("a", "A", (), "a")])
    seq = ("a", "a")
    best = enumerate_minimal(extract_minimal(best_first_chart(g, seq)), 10)
    dist = size_distribution(forward_chain(g, seq))
    want = Rep(Pure("g", 2), comb("_", 0), (Pure("a"),))
    ok = (best == [want] and dist.min_size == 3 and dist[4] == 1
          and dict(oracle.census(g, seq, 10)) == {3: 1, 4: 1})
    report(capsys, 2, ok, f"minimal {best}, distribution {dist.rows()}")


def test_criterion_3_cfg_degeneracy(capsys):
    pairs = instances(RANDOM_SEED + 1, CYK_COUNT, max_len=8, max_trees=10 ** 9,
                      derived_share=0.6)
    agree = accepted = 0
    for g, seq in pairs:
        chart = best_first_chart(g, seq, EngineConfig(free_only=True, max_tree_size=0))
        got = bool(chart.goals)
        agree += got == cyk(g, seq)
        accepted += got
    longest = max(len(s) for _, s in pairs)
    ok = len(pairs) >= 100 and agree == len(pairs) and longest <= 8
    report(capsys, 3, ok, f"{agree}/{len(pairs)} agree with CYK ({accepted} accepted, "
                          f"lengths up to {longest})")


def test_criterion_4_best_first(capsys, random_runs):
    runs, _ = random_runs
    equal = monotone = 0
    for r in runs:
        bf = r["bf"]
        equal += bf.goal_weight == r["exhaustive_min"]
        pw = bf.pop_weights
        monotone += all(a <= b for a, b in zip(pw, pw[1:]))
    ok = equal == monotone == len(runs)
    report(capsys, 4, ok, f"goal weight equal on {equal}/{len(runs)}, "
                          f"monotone pops on {monotone}/{len(runs)}")


def test_criterion_5_round_trip(capsys, random_runs):
    runs, _ = random_runs
    total = passed = 0
    for r in runs:
        for e in r["templates"]:
            total += 1
            passed += bool(check_template(r["grammar"], e, r["seq"]))
    ok = total > 0 and passed == total
    report(capsys, 5, ok, f"{passed}/{total} minimal templates accepted")


def _case(name, seq):
    g = builtin_grammar(name)
    t0 = time.perf_counter()
    chart = best_first_chart(g, seq, full(seq))
    sub = extract_minimal(chart)
    found = enumerate_minimal(sub, 10)
    return g, sub.weight, found, time.perf_counter() - t0


def test_criterion_6_jazz(capsys):
    g, w, found, elapsed = _case("jazz", JAZZ_SEQUENCE)
    starred = [e for e in found if any(STAR in m for m in core.combinators(e))]
    trivial = min(core.size(core.embed_derivation(core.evaluate(e))) for e in found)
    ok = (w == 13 and len(starred) == len(found) > 0 and w < trivial and elapsed < 30
          and all(check_template(g, e, JAZZ_SEQUENCE) for e in found))
    report(capsys, "6 (jazz)", ok,
           f"minimal size {w} (target 13), star in {len(starred)}/{len(found)} minimal "
           f"templates, trivial embedding {trivial}, {elapsed:.1f}s (< 30s)")


def test_criterion_6_coffee(capsys):
    g, w, found, elapsed = _case("coffee", COFFEE_SEQUENCE)
    dup = [e for e in found if comb("_", 0) in core.combinators(e)]
    trivial = min(core.size(core.embed_derivation(core.evaluate(e))) for e in found)
    ok = w == 9 and dup and w < trivial and elapsed < 30
    report(capsys, "6 (coffee)", ok,
           f"minimal size {w} (target 9), ⟨_ 0⟩ in {len(dup)}/{len(found)} minimal "
           f"templates, trivial embedding {trivial}, {elapsed:.1f}s (< 30s)")


@pytest.mark.parametrize("name,seq", [("jazz", JAZZ_SEQUENCE), ("coffee", COFFEE_SEQUENCE)])
def test_criterion_7_histogram(capsys, name, seq):
    g = builtin_grammar(name)
    dist = size_distribution(forward_chain(g, seq, full(seq)))
    bf = best_first_chart(g, seq, full(seq)).goal_weight
    at_min = dist[dist.min_size]
    # exact counts are checked against brute force where it is feasible
    short = seq[-5:]
    oracle_ok = (size_distribution(forward_chain(g, short, full(short))).counts
                 == dict(oracle.census(g, short, 100)))
    ok = dist.min_size == bf and dist.total >= 10 * at_min and oracle_ok
    report(capsys, f"7 ({name})", ok,
           f"min bucket {dist.min_size} = best-first {bf}, {at_min} at minimum, "
           f"total {dist.total} ({dist.total / at_min:.1f}x), "
           f"oracle agrees on last {len(short)} tokens: {oracle_ok}")


if __name__ == "__main__":
    raise SystemExit(pytest.main([__file__, "-q"]))
