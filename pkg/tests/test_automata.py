import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from conftest import W, all_words, embeds, nfas, words
from dclosure.automata import (
    Nfa,
    determinize,
    empty_nfa,
    epsilon_nfa,
    find_difference,
    nfa,
    nfa_accepts,
    nfa_complement,
    nfa_downward_saturate,
    nfa_enumerate,
    nfa_equivalent,
    nfa_included,
    nfa_is_empty,
    nfa_normalize,
    nfa_product,
    nfa_reverse,
    nfa_union,
    stars_nfa,
    superwords_nfa,
    universal_nfa,
    words_nfa,
)
from dclosure.errors import AlphabetMismatch, UnknownLetter

AB = ("a", "b")


def astar_b():
    return nfa(AB, [(0, "a", 0), (0, "b", 1)], 0, {1})


def b_astar():
    return nfa(AB, [(0, "b", 1), (1, "a", 1)], 0, {1})


def abstar():
    return nfa(AB, [(0, "a", 1), (1, "b", 0)], 0, {0})


def a_star_b_star():
    return stars_nfa(AB, [("a",), ("b",)])


def test_construction_rejects_bad_edges():
    with pytest.raises(ValueError):
        Nfa(AB, {0}, [(0, ("a",), 1)], 0, ())
    with pytest.raises(UnknownLetter):
        Nfa(AB, {0}, [(0, ("c",), 0)], 0, ())


def test_normalize_splits_word_labels():
    m = nfa(AB, [(0, ("a", "b"), 1)], 0, {1})
    n = nfa_normalize(m)
    assert n.is_normalized
    assert len(n.states) == 3
    assert nfa_enumerate(n, 4) == nfa_enumerate(m, 4) == words("ab")


def test_normalize_keeps_normalized_automaton():
    m = astar_b()
    assert nfa_normalize(m) is m


def test_accepts():
    assert nfa_accepts(astar_b(), W("aab"))
    assert not nfa_accepts(astar_b(), W("ba"))
    assert not nfa_accepts(nfa(AB, [], 0, ()), ())
    with pytest.raises(UnknownLetter):
        nfa_accepts(astar_b(), W("c"))


def test_emptiness():
    assert nfa_is_empty(empty_nfa(AB))
    assert not nfa_is_empty(epsilon_nfa(AB))
    # a*b and ba* share the word b; a+b and ba* are disjoint
    assert not nfa_is_empty(nfa_product(astar_b(), b_astar()))
    aplus_b = nfa(AB, [(0, "a", 1), (1, "a", 1), (1, "b", 2)], 0, {2})
    assert nfa_is_empty(nfa_product(aplus_b, b_astar()))


def test_product():
    both = nfa_product(a_star_b_star(), stars_nfa(AB, [("b",), ("a",)]))
    expected = {w for w in all_words(AB, 5) if len(set(w)) <= 1}
    assert nfa_enumerate(both, 5) == expected
    assert nfa_equivalent(nfa_product(astar_b(), universal_nfa(AB)), astar_b())
    assert nfa_is_empty(nfa_product(astar_b(), empty_nfa(AB)))
    with pytest.raises(AlphabetMismatch):
        nfa_product(astar_b(), universal_nfa(("a",)))


def test_complement():
    assert nfa_equivalent(nfa_complement(empty_nfa(("a",))), universal_nfa(("a",)))
    m = abstar()
    assert nfa_equivalent(nfa_complement(nfa_complement(m)), m)
    co = nfa_complement(a_star_b_star())
    expected = {w for w in all_words(AB, 5) if "ba" in "".join(w)}
    assert nfa_enumerate(co, 5) == expected


def test_equivalence():
    m = nfa(AB, [(0, ("a", "b"), 1), (1, "_", 0)], 0, {0})
    assert nfa_equivalent(m, nfa_normalize(m))
    a_star = nfa(AB, [(0, "a", 0)], 0, {0})
    a_star_twice = nfa(AB, [(0, "a", 0), (0, "_", 1), (1, "a", 1)], 0, {1})
    assert nfa_equivalent(a_star, a_star_twice)
    assert not nfa_equivalent(a_star_b_star(), abstar())
    assert find_difference(a_star_b_star(), abstar()) in {W("b"), W("a")}


def test_downward_saturate():
    ab = words_nfa(AB, [W("ab")])
    assert nfa_enumerate(nfa_downward_saturate(ab), 3) == words("_", "a", "b", "ab")
    once = nfa_downward_saturate(abstar())
    assert nfa_equivalent(nfa_downward_saturate(once), once)
    assert nfa_equivalent(once, universal_nfa(AB))


def test_enumerate():
    assert nfa_enumerate(astar_b(), 2) == words("b", "ab")
    assert nfa_enumerate(empty_nfa(AB), 5) == set()
    assert nfa_enumerate(abstar(), 4) == words("_", "ab", "abab")


def test_union_reverse_superwords():
    u = nfa_union(astar_b(), b_astar())
    assert nfa_enumerate(u, 3) == nfa_enumerate(astar_b(), 3) | nfa_enumerate(b_astar(), 3)
    assert nfa_equivalent(nfa_reverse(astar_b()), b_astar())
    sup = superwords_nfa(AB, W("ab"))
    assert nfa_enumerate(sup, 4) == {w for w in all_words(AB, 4) if embeds(W("ab"), w)}


def test_determinize_is_deterministic():
    d = determinize(abstar())
    for p in d.states:
        for a in AB:
            assert len([q for s, w, q in d.edges if s == p and w == (a,)]) == 1


# ---------------------------------------------------------------- properties

@given(nfas(), st.data())
@settings(max_examples=40)
def test_saturation_is_the_downward_closure(m, data):
    sat = nfa_downward_saturate(m)
    big = nfa_enumerate(m, 12)
    for w in all_words(m.alphabet, 4 if len(m.alphabet) == 3 else 6):
        assert nfa_accepts(sat, w) == any(embeds(w, v) for v in big)


@given(nfas())
def test_language_and_complement_are_disjoint(m):
    assert nfa_is_empty(nfa_product(m, nfa_complement(m)))


@given(nfas(), nfas())
def test_equivalence_is_symmetric_and_reflexive(m1, m2):
    assert nfa_equivalent(m1, m1)
    if m1.alphabet == m2.alphabet:
        assert nfa_equivalent(m1, m2) == nfa_equivalent(m2, m1)
        if nfa_equivalent(m1, m2):
            assert nfa_enumerate(m1, 5) == nfa_enumerate(m2, 5)


@given(nfas(), nfas())
def test_inclusion_matches_enumeration(m1, m2):
    if m1.alphabet != m2.alphabet:
        return
    if nfa_included(m1, m2):
        assert nfa_enumerate(m1, 5) <= nfa_enumerate(m2, 5)
    else:
        w = find_difference(nfa_union(m1, m2), m2)
        assert w is not None and nfa_accepts(m1, w) and not nfa_accepts(m2, w)


@given(nfas())
def test_enumerate_matches_membership(m):
    got = nfa_enumerate(m, 4)
    assert got == {w for w in all_words(m.alphabet, 4) if nfa_accepts(m, w)}
