import itertools

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

import corpus
from conftest import W, all_words, embeds, words
from test_transducers import pairs, transducers
from dclosure.automata import (
    empty_nfa,
    epsilon_nfa,
    nfa,
    nfa_accepts,
    nfa_equivalent,
    stars_nfa,
    universal_nfa,
    words_nfa,
)
from dclosure.errors import AlphabetMismatch
from dclosure.indexed import (
    IndexAnalysis,
    bounded_language,
    derive_step,
    derive_words,
    downward_member,
    index_word_member,
    iw_automaton,
    is_normal,
    normalize,
    nu,
    partitioned_family,
    pcp_grammar,
    to_interval,
    to_productive,
    triple_construct,
)
from dclosure.indexed.grammar import (
    PartitionedGrammar,
    indexed_grammar,
    pop,
    push,
    rule,
)
from dclosure.indexed.interval import interval_consistent, is_productive_form
from dclosure.transducers import (
    Transducer,
    empty_transduction,
    identity_transduction,
    morphism_transduction,
    subword_transduction,
)

AB = ("a", "b")


def naive_language(g, max_len, max_depth=None):
    """Words of length ≤ max_len reachable by plain breadth-first use of derive_step.

    Sentential forms are capped (terminals ≤ max_len, nonterminals ≤ max_len + 2,
    index depth ≤ max_depth), so this is an under-approximation that is exact on
    the small grammars used here.
    """
    max_depth = max_len + 2 if max_depth is None else max_depth
    start = ((g.start, ()),)
    seen = {start}
    frontier = [start]
    found = set()
    while frontier:
        nxt = []
        for sf in frontier:
            for s in derive_step(g, sf):
                terms = [i for i in s if isinstance(i, str)]
                nts = [i for i in s if not isinstance(i, str)]
                if len(terms) > max_len or len(nts) > max_len + 2:
                    continue
                if any(len(x) > max_depth for _, x in nts):
                    continue
                if s in seen:
                    continue
                seen.add(s)
                if not nts:
                    found.add(tuple(terms))
                else:
                    nxt.append(s)
        frontier = nxt
    return found


def exact(g, max_len, budget=20_000):
    found, closed = bounded_language(g, max_len, budget)
    assert closed, "bounded search was cut off"
    return found


# ---------------------------------------------------------------- derivation steps

def test_derive_step_examples(ww):
    assert derive_step(ww, [("S", ())]) == {
        (("S", ("f",)),), (("S", ("g",)),), (("U", ()), ("U", ())),
    }
    assert (("B", ("f",)),) in derive_step(ww, [("U", ("g", "f"))])
    # U -> ε needs an empty index
    assert derive_step(ww, [("U", ("f",))]) == {(("A", ()),)}
    assert derive_step(ww, [("U", ())]) == {()}


def test_derive_step_keeps_terminals_and_context(ww):
    sf = ("a", ("A", ("g",)), "b")
    assert derive_step(ww, sf) == {("a", ("U", ("g",)), "a", "b")}


@pytest.mark.parametrize("name", sorted(corpus.ALL))
def test_terminal_productions_need_an_empty_index(name):
    g = corpus.ALL[name]()
    terminal_rules = [p for p in g.productions
                      if p.kind == "plain" and g.terminal_word(p.rhs)]
    frontier = [((g.start, ()),)]
    seen = set(frontier)
    for _ in range(5):
        nxt = []
        for sf in frontier:
            succ = derive_step(g, sf)
            for k, item in enumerate(sf):
                if isinstance(item, str) or not item[1]:
                    continue
                for p in terminal_rules:
                    if p.lhs != item[0]:
                        continue
                    forbidden = sf[:k] + p.rhs + sf[k + 1:]
                    # the only other way to reach it would be a pop to the same word
                    other = any(q.pop == item[1][0] and q.lhs == item[0] and q.rhs == p.rhs
                                for q in g.productions)
                    assert other or forbidden not in succ
            for s in succ:
                if s not in seen and len(s) <= 6:
                    seen.add(s)
                    nxt.append(s)
        frontier = nxt[:200]


# ---------------------------------------------------------------- bounded searches

def test_example_grammar_bounded_language(ww):
    found, closed = bounded_language(ww, 4)
    assert closed
    assert found == words("_", "aa", "bb", "abab", "baba", "aaaa", "bbbb")
    assert W("abab") in found


def test_grammar_without_terminal_productions():
    g = indexed_grammar(AB, "f", [push("S", "S", "f"), pop("S", "f", "S")], "S")
    assert bounded_language(g, 4) == (set(), True)
    assert bounded_language(corpus.empty(), 4) == (set(), True)


@pytest.mark.parametrize("name", sorted(set(corpus.ALL) - {"pcp_unary"}))
def test_bounded_language_matches_naive_search(name):
    g = corpus.ALL[name]()
    assert exact(g, 4) == naive_language(g, 4)


def test_derive_words_from_a_configuration(ww):
    found, closed = derive_words(ww, "U", ("f", "g"), max_len=4)
    assert closed and found == {W("ba")}
    found, closed = derive_words(ww, "S", ("f",), max_len=4)
    assert closed and found == words("aa", "abab", "aaaa")


def test_budget_reports_cutoff():
    found, closed = bounded_language(corpus.powers_of_two(), 8, budget=2)
    assert not closed
    assert found <= exact(corpus.powers_of_two(), 8)


def test_index_word_member_and_downward_member(ww):
    assert index_word_member(ww, "U", ("f", "f"), universal_nfa(AB)) == (True, True)
    assert index_word_member(ww, "U", ("f",), words_nfa(AB, [W("b")])) == (False, True)
    assert downward_member(ww, W("ab"))[0]
    assert downward_member(ww, W("abba"))[0]  # abba ⪯ abaaba
    g = corpus.anbn()
    assert downward_member(g, W("aaab"))[0]
    assert not downward_member(g, W("ba"), budget=1000)[0]


# ---------------------------------------------------------------- normal form

def test_normalize_examples():
    g = indexed_grammar(AB, "f", [rule("A", "B C D"), rule("B", "a"), rule("C", "b"),
                                  rule("D", "a"), push("S", "A", "f"), pop("A", "f", "a B b")],
                        "S")
    n = normalize(g)
    assert is_normal(n) and not is_normal(g)
    assert exact(n, 5) == exact(g, 5) == words("aab")
    heads = [p for p in n.productions if p.lhs == "A" and p.pop == "f"]
    assert len(heads) == 1 and len(heads[0].rhs) == 1


def test_normalize_terminal_pop_discards_the_index():
    g = indexed_grammar(AB, "f", [push("S", "R", "f"), push("R", "T", "f"), pop("T", "f", "a")],
                        "S")
    n = normalize(g)
    assert is_normal(n)
    assert exact(n, 3) == exact(g, 3) == words("a")


@pytest.mark.parametrize("name", sorted(corpus.ALL))
def test_normalize_preserves_language(name):
    g = corpus.ALL[name]()
    n = normalize(g)
    assert is_normal(n)
    assert exact(n, 5) == exact(g, 5)


# ---------------------------------------------------------------- triple construction

def test_triple_examples(ww):
    assert exact(triple_construct(ww, identity_transduction(AB)), 4) == exact(ww, 4)
    cd = morphism_transduction(AB, ("c", "d"), {"a": "c", "b": "d"})
    assert exact(triple_construct(ww, cd), 4) == words("_", "cc", "dd", "cdcd", "dcdc",
                                                       "cccc", "dddd")
    assert exact(triple_construct(ww, empty_transduction(AB, AB)), 4) == set()
    with pytest.raises(AlphabetMismatch):
        triple_construct(ww, identity_transduction(("a", "c")))


@given(st.sampled_from(["ww", "anbn", "single_ab", "empty"]), transducers(max_states=3,
                                                                        writing=True))
@settings(max_examples=25)
def test_triple_matches_image_oracle(name, t):
    g = corpus.ALL[name]()
    inputs = exact(g, 8)
    expected = {v for u, v in pairs(t, 8, 4) if u in inputs}
    assert exact(triple_construct(g, t), 4) == expected


def outputs_on(t, u, max_out):
    """Outputs of ``t`` on the input ``u`` up to length ``max_out``, by path search."""
    found = set()
    start = (t.initial, 0, ())
    seen, stack = {start}, [start]
    while stack:
        p, i, v = stack.pop()
        if i == len(u) and p in t.finals:
            found.add(v)
        for s, a, b, q in t.edges:
            if s != p or tuple(u[i:i + len(a)]) != tuple(a) or len(v) + len(b) > max_out:
                continue
            item = (q, i + len(a), v + tuple(b))
            if item not in seen:
                seen.add(item)
                stack.append(item)
    return found


def test_triple_with_erasing_transducers():
    # Erasing makes the image grammars' bounded searches open-ended (many
    # configurations with a zero yield bound), so only the found sets are
    # compared.  Every output of length ≤ 4 has a source word of length ≤ 14
    # in these grammars (a^7 b^7 is the longest needed, for pcp_unary).
    first_then_a = Transducer(AB, AB, {0, 1}, [
        (0, ("a",), ("a",), 1), (0, ("b",), ("b",), 1),
        (1, ("a",), ("a",), 1), (1, ("b",), (), 1)], 0, {0, 1})
    for name in ["ww", "anbn", "pcp_unary"]:
        g = corpus.ALL[name]()
        sources = exact(g, 14)
        for t in (first_then_a, subword_transduction(AB)):
            expected = set()
            for u in sources:
                expected |= outputs_on(t, u, 4)
            found, _ = bounded_language(triple_construct(g, t), 4)
            assert found == expected, name


def test_triple_with_fast_growing_bounds():
    # Reading ``bb`` then ``b`` on pcp_unary gives yield bounds that roughly
    # double with the index depth; saturating them keeps the search closed.
    t = Transducer(AB, AB, {0, 1}, [(0, ("b", "b"), ("a",), 1), (1, ("b",), ("a",), 0)],
                   0, {0})
    g = corpus.pcp_unary()
    sources = exact(g, 12)
    expected = set()
    for u in sources:
        expected |= outputs_on(t, u, 4)
    assert exact(triple_construct(g, t), 4) == expected


# ---------------------------------------------------------------- index sets

R_SETS = {
    "all": lambda t: universal_nfa(t),
    "none": lambda t: empty_nfa(t),
    "eps": lambda t: epsilon_nfa(t),
    "plus": lambda t: nfa(t, [(0, x, 1) for x in t] + [(1, x, 1) for x in t], 0, {1}),
    "has_a": lambda t: nfa(t, [(0, x, 0) for x in t] + [(0, "a", 1)]
                           + [(1, x, 1) for x in t], 0, {1}),
}

IW_CASES = [("ww", "U"), ("ww", "S"), ("ww", "A"), ("g_blocking", "U"),
            ("powers_of_two", "A"), ("anbn", "T"), ("anbncn", "S")]

GRAMMARS = dict(corpus.ALL, g_blocking=corpus.g_blocking)


def derives_into(g, a, x, r, max_len=10):
    found, closed = derive_words(g, a, x, max_len=max_len)
    assert closed
    return any(nfa_accepts(r, w) for w in found)


def test_iw_examples(ww):
    ff = stars_nfa(("f", "g"), [("f", "g")])
    assert nfa_equivalent(iw_automaton(ww, "U", universal_nfa(AB)), ff)
    f_star = stars_nfa(("f", "g"), [("f",)])
    assert nfa_equivalent(iw_automaton(corpus.g_blocking(), "U", universal_nfa(AB)), f_star)
    assert nfa_equivalent(iw_automaton(ww, "U", empty_nfa(AB)), empty_nfa(("f", "g")))
    with pytest.raises(ValueError):
        iw_automaton(ww, "nope", universal_nfa(AB))


@pytest.mark.parametrize("name,a", IW_CASES)
@pytest.mark.parametrize("rname", sorted(R_SETS))
def test_iw_matches_derivation_search(name, a, rname):
    g = GRAMMARS[name]()
    r = R_SETS[rname](g.terminals)
    m = iw_automaton(g, a, r)
    for n in range(4):
        for x in itertools.product(g.indices, repeat=n):
            assert nfa_accepts(m, x) == derives_into(g, a, x, r), x


@pytest.mark.parametrize("name", sorted(GRAMMARS))
def test_saturation_stays_within_bound(name):
    g = GRAMMARS[name]()
    for r in (universal_nfa(g.terminals), R_SETS["has_a"](g.terminals)):
        analysis = IndexAnalysis(g, r)
        size = len(analysis.automaton.sys.nonterminals)
        assert analysis.automaton.rounds <= size * 2 ** size


# ---------------------------------------------------------------- interval / productive

@pytest.mark.parametrize("name", sorted(corpus.BOUNDED))
def test_to_interval_preserves_language(name):
    g = corpus.BOUNDED[name]()
    ig = to_interval(g)
    assert exact(ig.grammar, 6) == exact(g, 6)
    assert all(ig.iota[x] == (x[0], x[2]) for x in ig.grammar.nonterminals)
    for p in ig.grammar.productions:
        assert interval_consistent(ig.grammar, ig.iota, ig.letters, p)


def test_to_interval_examples():
    assert exact(to_interval(corpus.single_ab()).grammar, 4) == words("ab")
    assert exact(to_interval(corpus.empty()).grammar, 4) == set()


def test_to_interval_keeps_the_bounded_part(ww):
    # outside the caller contract: only the words inside a*b* survive
    expected = {w for w in exact(ww, 6) if list(w) == sorted(w)}
    assert exact(to_interval(ww).grammar, 6) == expected


def test_to_interval_rejects_a_wrong_letter_order():
    with pytest.raises(ValueError):
        to_interval(corpus.single_ab(), ("a", "c"))


@pytest.mark.parametrize("name", sorted(corpus.BOUNDED))
def test_to_productive_removes_only_the_empty_word(name):
    g = corpus.BOUNDED[name]()
    pg = to_productive(to_interval(g))
    assert is_productive_form(pg.grammar)
    assert exact(pg.grammar, 5) == exact(g, 5) - {()}


def test_to_productive_examples():
    assert exact(to_productive(to_interval(corpus.eps_or_a())).grammar, 3) == words("a")
    assert exact(to_productive(to_interval(corpus.empty())).grammar, 3) == set()


# ---------------------------------------------------------------- partitioned family

def productive(name):
    return to_productive(to_interval(corpus.BOUNDED[name]()))


def test_family_sizes():
    pg = productive("anbncn")
    family = partitioned_family(pg)
    assert len(family) == 2 ** 3
    assert {fam.direct for fam in family} == {
        frozenset(s) for k in range(4) for s in itertools.combinations("abc", k)
    }
    unary = productive("powers_of_two")
    assert partitioned_family(unary) == [PartitionedGrammar(unary, frozenset())]


def test_partitioned_invariant_is_enforced():
    pg = productive("anbncn")
    unary = [a for a in pg.grammar.nonterminals if pg.is_unary(a)]
    assert unary
    letter = pg.letters[pg.iota[unary[0]][0] - 1]
    with pytest.raises(ValueError):
        PartitionedGrammar(pg, {letter})


@pytest.mark.parametrize("name", ["anbn", "single_ab", "powers_of_two", "empty"])
def test_family_words_are_dominated(name):
    g = corpus.BOUNDED[name]()
    source, closed = bounded_language(g, 10)
    assert closed
    for member in partitioned_family(productive(name)):
        found, _ = bounded_language(member.grammar.grammar, 5, budget=2000)
        for w in found:
            assert any(embeds(w, v) for v in source), (member.direct, w)
            assert downward_member(g, w)[0]


def test_anbn_family_reaches_the_full_closure():
    # with both letters direct, the family member keeps a^n b^n shapes, and
    # with one direct letter the other one can grow on its own
    family = {m.direct: m for m in partitioned_family(productive("anbn"))}
    found, _ = bounded_language(family[frozenset("a")].grammar.grammar, 5, budget=2000)
    assert W("aaaab") in found


# ---------------------------------------------------------------- PCP generator

def test_nu_examples():
    assert nu("") == 0
    assert nu("12") == 4
    assert nu("111") == 7
    with pytest.raises(ValueError):
        nu("13")


def test_nu_is_injective():
    values = {}
    for w in all_words(("1", "2"), 6):
        v = nu(w)
        assert v not in values, (w, values.get(v))
        values[v] = w


def expected_pcp(xs, alpha, beta, max_len):
    out = set()
    # ν(α(w)) ≥ |w|, so longer w only give longer words
    for n in range(1, max_len + 1):
        for w in itertools.product(xs, repeat=n):
            i = nu("".join(alpha[x] for x in w))
            j = nu("".join(beta[x] for x in w))
            if i + j <= max_len:
                out.add(("a",) * i + ("b",) * j)
    return out


def test_pcp_examples():
    g = corpus.pcp_unary()
    assert exact(g, 8) == words("ab", "aaabbb")
    g = pcp_grammar(("x",), {"x": "1"}, {"x": "2"})
    assert W("abb") in exact(g, 3)


@pytest.mark.parametrize("alpha,beta", [
    ({"x": "1", "y": "2"}, {"x": "2", "y": "1"}),
    ({"x": "12", "y": "1"}, {"x": "1", "y": "21"}),
    ({"x": "1", "y": "11"}, {"x": "1", "y": "2"}),
])
def test_pcp_language(alpha, beta):
    g = pcp_grammar(("x", "y"), alpha, beta)
    assert exact(g, 7) == expected_pcp(("x", "y"), alpha, beta, 7)


def test_pcp_rejects_bad_input():
    with pytest.raises(ValueError):
        pcp_grammar((), {}, {})
    with pytest.raises(ValueError):
        pcp_grammar(("1",), {"1": "1"}, {"1": "1"})
    with pytest.raises(ValueError):
        pcp_grammar(("x",), {"x": "13"}, {"x": "1"})
    with pytest.raises(ValueError):
        pcp_grammar(("x",), {}, {"x": "1"})
