import itertools

import pytest
from hypothesis import given
from hypothesis import strategies as st

from conftest import W, all_words
from dclosure.automata import (
    empty_nfa,
    nfa_accepts,
    nfa_downward_saturate,
    nfa_enumerate,
    nfa_equivalent,
    nfa_is_empty,
    stars_nfa,
)
from dclosure.sre import (
    OptLetter,
    Sre,
    StarSet,
    all_atoms,
    block_form_nfa,
    canonical_product,
    canonicalize,
    enumerate_sres,
    format_sre,
    is_canonical,
    parse_sre,
    product_block_form,
    sre,
    sre_to_nfa,
)

AB = ("a", "b")


def star(*ys):
    return StarSet(frozenset(ys))


def opt(x):
    return OptLetter(x)


def matches(p, w):
    """Direct membership in a product by backtracking, without automata."""
    if not p:
        return not w
    a, rest = p[0], p[1:]
    if isinstance(a, OptLetter):
        return matches(rest, w) or (bool(w) and w[0] == a.letter and matches(rest, w[1:]))
    k = 0
    while True:
        if matches(rest, w[k:]):
            return True
        if k < len(w) and w[k] in a.letters:
            k += 1
        else:
            return False


atoms = st.one_of(
    st.sampled_from(AB).map(opt),
    st.sets(st.sampled_from(AB), min_size=1).map(lambda s: StarSet(frozenset(s))),
)
products = st.lists(atoms, max_size=4).map(tuple)
sres = st.lists(products, max_size=3)


def test_sre_to_nfa_examples():
    assert nfa_is_empty(sre_to_nfa(Sre(()), AB))
    assert nfa_equivalent(sre_to_nfa(sre((star("a"), star("b"))), AB),
                          stars_nfa(AB, [("a",), ("b",)]))
    m = sre_to_nfa(sre((opt("a"), star("a", "b"))), AB)
    assert nfa_equivalent(nfa_downward_saturate(m), m)


def test_canonicalize_examples():
    assert sre((star("a"), star("a"))) == sre((star("a"),))
    assert sre((opt("a"),), (star("a"),)) == sre((star("a"),))
    assert canonical_product((opt("a"), star("a", "b"), opt("b"))) == (star("a", "b"),)


def test_enumeration_start():
    stream = enumerate_sres(AB)
    assert next(stream) == Sre(())
    first = list(itertools.islice(enumerate_sres(("a",)), 10))
    assert sre((star("a"),)) in first
    with pytest.raises(ValueError):
        next(enumerate_sres(()))


def test_enumeration_has_no_duplicates_and_nondecreasing_size():
    items = list(itertools.islice(enumerate_sres(AB), 1000))
    assert len(set(items)) == len(items)
    assert all(is_canonical(r) for r in items)
    sizes = [r.size for r in items]
    assert sizes == sorted(sizes)


def test_enumeration_is_complete_at_size_four():
    # independent generation: every set of products, canonicalized, of size <= 4
    pool = [()]
    for n in range(1, 4):
        pool += list(itertools.product(all_atoms(AB), repeat=n))
    expected = set()
    for k in range(0, 3):
        for combo in itertools.combinations(pool, k):
            r = canonicalize(list(combo))
            if r.size <= 4:
                expected.add(r)
    got = set()
    for r in enumerate_sres(AB):
        if r.size > 4:
            break
        got.add(r)
    assert expected == got


def test_block_form_examples():
    b = product_block_form((opt("a"), star("a", "b"), opt("c")))
    assert b.words == (W("a"), W("c"))
    assert b.sets == (frozenset("ab"),)
    assert b.blocks == (W("ab"),)
    e = product_block_form(())
    assert e.words == ((),) and e.n == 0
    s = product_block_form((star("a"), star("b")))
    assert s.words == ((), (), ())
    assert s.blocks == (W("a"), W("b"))


def test_text_format_round_trip():
    r = parse_sre("a? (a|b)* c? | d*")
    assert str(r) and parse_sre(format_sre(r)) == r
    assert parse_sre("") == Sre(())
    assert parse_sre("_") == sre(())
    with pytest.raises(ValueError):
        parse_sre("a??")


# ---------------------------------------------------------------- properties

@given(sres)
def test_canonicalize_is_idempotent_and_preserves_language(ps):
    r = canonicalize(ps)
    assert canonicalize(list(r.products)) == r
    m = sre_to_nfa(r, AB)
    for w in all_words(AB, 4):
        assert nfa_accepts(m, w) == any(matches(p, w) for p in ps)


@given(sres)
def test_sre_languages_are_downward_closed(ps):
    m = sre_to_nfa(canonicalize(ps), AB)
    assert nfa_equivalent(nfa_downward_saturate(m), m)


@given(products)
def test_block_form_describes_the_product(p):
    b = product_block_form(p)
    assert nfa_equivalent(block_form_nfa(b, AB), sre_to_nfa(sre(p), AB))
    m = block_form_nfa(b, AB)
    for w in all_words(AB, 4):
        assert nfa_accepts(m, w) == matches(p, w)


@given(sres)
def test_format_round_trip(ps):
    r = canonicalize(ps)
    assert parse_sre(format_sre(r)) == r


def test_empty_sre_automaton():
    assert nfa_enumerate(sre_to_nfa(Sre(()), AB), 3) == nfa_enumerate(empty_nfa(AB), 3)
