import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from conftest import all_words, embeds, words
from test_transducers import pairs, transducers
from dclosure.automata import nfa
from dclosure.cfg import (
    Cfg,
    alph_sets_by_emptiness,
    alph_sets_cfg,
    cfg,
    cfg_apply_transduction,
    cfg_enumerate,
    cfg_is_empty,
    cfg_parikh,
    cfg_trim,
    empty_cfg,
    min_lengths,
    minimal_alph_sets_all,
    nfa_to_cfg,
)
from dclosure.errors import AlphabetMismatch, BudgetExhausted
from dclosure.semilinear import sls_contains, sls_members
from dclosure.transducers import (
    identity_transduction,
    projection_transduction,
    subword_transduction,
)

AB = ("a", "b")


def recognizes(g, w):
    """Earley recognizer with the nullable-completion fix; independent of the library."""
    nullable = set()
    changed = True
    while changed:
        changed = False
        for a, rhs in g.productions:
            if a not in nullable and all(x in nullable for x in rhs):
                nullable.add(a)
                changed = True
    rules = {}
    for a, rhs in g.productions:
        rules.setdefault(a, []).append(rhs)
    chart = [set() for _ in range(len(w) + 1)]
    chart[0] = {(g.start, rhs, 0, 0) for rhs in rules.get(g.start, [])}
    for i in range(len(w) + 1):
        agenda = list(chart[i])
        while agenda:
            a, rhs, dot, origin = agenda.pop()
            if dot < len(rhs):
                x = rhs[dot]
                if x in g.nonterminals:
                    new = [(x, r, 0, i) for r in rules.get(x, [])]
                    if x in nullable:
                        new.append((a, rhs, dot + 1, origin))
                    for item in new:
                        if item not in chart[i]:
                            chart[i].add(item)
                            agenda.append(item)
                elif i < len(w) and w[i] == x:
                    chart[i + 1].add((a, rhs, dot + 1, origin))
            else:
                for b, r2, d2, o2 in list(chart[origin]):
                    if d2 < len(r2) and r2[d2] == a:
                        item = (b, r2, d2 + 1, o2)
                        if item not in chart[i]:
                            chart[i].add(item)
                            agenda.append(item)
    return any(a == g.start and dot == len(rhs) and o == 0 for a, rhs, dot, o in chart[len(w)])


def language(g, max_len):
    return {w for w in all_words(g.terminals, max_len) if recognizes(g, w)}


NTS = ("S", "A", "B")


@st.composite
def grammars(draw):
    symbol = st.sampled_from(AB + NTS)
    rhs = st.lists(symbol, max_size=3).map(tuple)
    prods = draw(st.lists(st.tuples(st.sampled_from(NTS), rhs), min_size=1, max_size=6))
    return Cfg(frozenset(NTS), AB, prods, "S")


anbn = cfg(AB, [("S", "a S b"), ("S", "_")], "S")


def test_emptiness():
    assert not cfg_is_empty(anbn)
    assert cfg_is_empty(cfg(AB, [("S", "S")], "S"))
    assert cfg_is_empty(cfg(AB, [("S", "a T")], "S", nonterminals={"S", "T"}))


def test_enumerate_examples():
    assert cfg_enumerate(anbn, 4) == words("_", "ab", "aabb")
    assert cfg_enumerate(empty_cfg(AB), 4) == set()
    g = cfg(("a",), [("S", "S S"), ("S", "a")], "S")
    assert cfg_enumerate(g, 3) == words("a", "aa", "aaa")
    with pytest.raises(BudgetExhausted):
        cfg_enumerate(cfg(AB, [("S", "S S"), ("S", "a"), ("S", "b")], "S"), 10, budget=100)


def test_apply_transduction_examples():
    assert cfg_enumerate(cfg_apply_transduction(anbn, identity_transduction(AB)), 6) == \
        cfg_enumerate(anbn, 6)
    closed = cfg_apply_transduction(anbn, subword_transduction(AB))
    expected = {w for w in all_words(AB, 6)
                if any(embeds(w, v) for v in cfg_enumerate(anbn, 12))}
    assert cfg_enumerate(closed, 6) == expected
    proj = cfg_apply_transduction(anbn, projection_transduction(AB, "c"))
    assert cfg_enumerate(proj, 6) == {("c",) * k for k in range(7)}
    with pytest.raises(AlphabetMismatch):
        cfg_apply_transduction(anbn, identity_transduction(("a",)))


def test_parikh_examples():
    s = cfg_parikh(anbn)
    assert sls_members(s, 8) == {(k, k) for k in range(5)}
    assert sls_members(cfg_parikh(cfg(("a",), [("S", "a")], "S")), 5) == {(1,)}
    assert cfg_parikh(empty_cfg(AB)).parts == frozenset()


def test_nfa_to_cfg():
    m = nfa(AB, [(0, "a", 0), (0, "b", 1)], 0, {1})
    assert cfg_enumerate(nfa_to_cfg(m), 3) == words("b", "ab", "aab")


def test_trim_keeps_language():
    g = cfg(AB, [("S", "a S b"), ("S", "_"), ("S", "T"), ("T", "T a"), ("U", "b")], "S")
    t = cfg_trim(g)
    assert "T" not in t.nonterminals and "U" not in t.nonterminals
    assert cfg_enumerate(t, 6) == cfg_enumerate(g, 6)


# ---------------------------------------------------------------- properties

@given(grammars())
@settings(max_examples=80)
def test_enumerate_matches_earley(g):
    assert cfg_enumerate(g, 5) == language(g, 5)


@given(grammars())
@settings(max_examples=80)
def test_emptiness_matches_shortest_word(g):
    shortest = min_lengths(g).get(g.start)
    assert cfg_is_empty(g) == (shortest is None)
    if shortest is not None and shortest <= 8:
        found = cfg_enumerate(g, shortest)
        assert found and min(map(len, found)) == shortest
        assert all(recognizes(g, w) for w in found)


@given(grammars(), transducers(writing=True))
@settings(max_examples=40)
def test_transduction_image_matches_oracle(g, t):
    inputs = cfg_enumerate(g, 8)
    expected = {v for u, v in pairs(t, 8, 4) if u in inputs}
    assert cfg_enumerate(cfg_apply_transduction(g, t), 4) == expected


@given(grammars())
@settings(max_examples=60)
def test_parikh_two_sided(g):
    s = cfg_parikh(g)
    from_words = {(w.count("a"), w.count("b")) for w in cfg_enumerate(g, 8)}
    assert all(sls_contains(s, v) for v in from_words)
    assert sls_members(s, 8) == from_words


@given(grammars())
@settings(max_examples=60)
def test_alphabet_sets_two_routes(g):
    assert alph_sets_cfg(g) == alph_sets_by_emptiness(g)
    minimal = minimal_alph_sets_all(g)[g.start]
    family = alph_sets_cfg(g)
    assert set(minimal) <= set(family)
    assert all(any(m <= x for m in minimal) for x in family)
    assert {frozenset(w) for w in cfg_enumerate(g, 6)} <= family
