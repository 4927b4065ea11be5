"""Regular sets of index words: ``I_G(A, R) = { x : ∃ y ∈ R, A x ⇒* y }``.

The computation first reduces ``R`` to ``T*`` (apply the identity on ``R``
with the triple construction), then forgets terminals, so only the question
"does ``A x`` derive the empty word" remains.  Push/pop detours are folded
into plain productions by saturation, after which the sets
``{ B : B v ⇒* ε }`` for suffixes ``v`` of the index are computed by a
deterministic automaton reading the index from the bottom.
"""
import logging
from dataclasses import dataclass

from ..automata import Nfa, compact, empty_nfa, nfa_included, nfa_is_empty, nfa_reverse
from ..automata import universal_nfa
from ..cfg import Cfg, minimal_alph_sets_all
from ..transducers import regular_intersection_transduction
from .normal import normalize
from .triple import _prepare, triple_productions

log = logging.getLogger(__name__)


@dataclass
class ErasingSystem:
    """Nonterminal-only productions of a grammar whose terminals were dropped.

    ``plain`` maps a head to right-hand sides over nonterminals, ``pushes``
    holds ``(C, B, f)`` for ``C -> B f`` and ``pops`` maps ``(B, f)`` to the
    heads ``C`` of ``B f -> C``.
    """

    nonterminals: frozenset
    indices: tuple
    plain: dict
    pushes: set
    pops: dict


def erasing_system(nonterminals, indices, productions, is_terminal):
    plain = {a: set() for a in nonterminals}
    pushes, pops = set(), {}
    for p in productions:
        rhs = tuple(x for x in p.rhs if not is_terminal(x))
        if p.push is not None:
            pushes.add((p.lhs, p.rhs[0], p.push))
        elif p.pop is not None:
            if len(rhs) != 1:
                raise ValueError(f"expected a normal-form pop production, got {p}")
            pops.setdefault((p.lhs, p.pop), set()).add(rhs[0])
        else:
            plain[p.lhs].add(rhs)
    return ErasingSystem(frozenset(nonterminals), tuple(indices), plain, pushes, pops)


def _leaf(c):
    return ("leaf", c)


def pop_closure_sets(sys, f):
    """``W_{B,f}`` for every ``B``: alphabets of ``V_f(K_B)``.

    ``K_B`` holds the nonempty nonterminal words ``B`` derives with plain
    productions; ``V_f`` replaces each of their letters ``D`` by some ``C``
    with ``D f -> C``.  Both are folded into one grammar whose leaves are
    the images under ``V_f``.

    Only the ⊆-minimal alphabets are kept.  A word erases exactly when all
    of its letters erase, so a larger alphabet never adds anything.
    """
    names = sorted(sys.nonterminals, key=repr)
    leaves = sorted({_leaf(c) for (_, g), cs in sys.pops.items() if g == f for c in cs}, key=repr)
    prods = set()
    for a in names:
        for rhs in sys.plain[a]:
            if rhs:
                prods.add((a, rhs))
    for (d, g), cs in sys.pops.items():
        if g == f:
            for c in cs:
                prods.add((d, (_leaf(c),)))
    if not names:
        return {}
    cfg = Cfg(frozenset(names), tuple(leaves), frozenset(prods), names[0])
    sets = minimal_alph_sets_all(cfg)
    return {a: {frozenset(x[1] for x in s) for s in sets[a]} for a in names}


def saturate(sys):
    """Add ``C -> w_X`` for each push ``C -> B f`` and each ``X ∈ W_{B,f}`` until stable.

    Returns the number of rounds that added something and the final ``W``
    table.
    """
    n = len(sys.nonterminals)
    bound = n * 2 ** n
    rounds = 0
    while True:
        w = {f: pop_closure_sets(sys, f) for f in sys.indices}
        added = False
        for c, b, f in sorted(sys.pushes, key=repr):
            for x in w[f].get(b, ()):
                rhs = tuple(sorted(x, key=repr))
                if rhs not in sys.plain[c] and not _subsumed(sys.plain[c], x):
                    sys.plain[c].add(rhs)
                    added = True
        if not added:
            return rounds, w
        rounds += 1
        if rounds > bound:
            raise AssertionError("saturation exceeded its termination bound")


def _subsumed(rhss, x):
    """Some existing right-hand side uses only letters of ``x``."""
    return any(rhs and set(rhs) <= x for rhs in rhss)


def nullable(sys):
    found = set()
    changed = True
    while changed:
        changed = False
        for a in sys.nonterminals:
            if a not in found and any(all(x in found for x in rhs) for rhs in sys.plain[a]):
                found.add(a)
                changed = True
    return frozenset(found)


class ErasureAutomaton:
    """Deterministic automaton over reversed index words.

    After reading ``v`` (bottom of the index first) the state is the set of
    nonterminals ``B`` with ``B v ⇒* ε``.
    """

    def __init__(self, sys):
        self.sys = sys
        self.rounds, self.w = saturate(sys)
        self.initial = nullable(sys)
        self._cache = {}

    def step(self, x, f):
        key = (x, f)
        if key not in self._cache:
            self._cache[key] = frozenset(
                b for b, ys in self.w[f].items() if any(y <= x for y in ys)
            )
        return self._cache[key]

    def run(self, reversed_word):
        x = self.initial
        for f in reversed_word:
            x = self.step(x, f)
        return x

    def reachable(self):
        order = [self.initial]
        seen = {self.initial}
        edges = []
        k = 0
        while k < len(order):
            x = order[k]
            k += 1
            for f in self.sys.indices:
                y = self.step(x, f)
                edges.append((x, (f,), y))
                if y not in seen:
                    seen.add(y)
                    order.append(y)
        return order, edges


def _live(nts, prods):
    """Drop nonterminals that derive nothing even when indices are ignored."""
    good = set()
    changed = True
    while changed:
        changed = False
        for p in prods:
            if p.lhs not in good and all(x in good or x not in nts for x in p.rhs):
                good.add(p.lhs)
                changed = True
    keep = [p for p in prods if p.lhs in good and all(x in good or x not in nts for x in p.rhs)]
    return frozenset(nts), keep


def _universal(r):
    return nfa_included(universal_nfa(r.alphabet), r)


class IndexAnalysis:
    """Answers ``x ∈ I_G(A, R)`` for every nonterminal ``A`` of ``g`` at once."""

    def __init__(self, g, r, heads=None):
        g = normalize(g)
        if set(r.alphabet) != set(g.terminals):
            r = Nfa(g.terminals, r.states, r.edges, r.initial, r.finals)
        heads = sorted(g.nonterminals if heads is None else heads, key=repr)
        self.indices = g.indices
        self.empty = nfa_is_empty(r)
        if _universal(r):
            self.names = {a: a for a in heads}
            sys = erasing_system(g.nonterminals, g.indices, g.productions, g.is_terminal)
        else:
            h, t = _prepare(g, regular_intersection_transduction(r))
            roots = [(t.initial, a, t.final) for a in heads]
            nts, prods = triple_productions(h, t, roots)
            nts, prods = _live(nts, prods)
            self.names = {a: root for a, root in zip(heads, roots)}
            sys = erasing_system(nts, g.indices, prods, lambda x: x not in nts)
        self.automaton = ErasureAutomaton(sys)
        log.debug("index analysis: %d nonterminals, %d saturation rounds",
                  len(sys.nonterminals), self.automaton.rounds)

    def contains(self, a, x):
        """Is the index word ``x`` (top first) in ``I_G(a, R)``?"""
        return self.names[a] in self.automaton.run(tuple(reversed(tuple(x))))

    def state_members(self, state):
        """Heads ``A`` whose renamed nonterminal lies in an automaton state."""
        return frozenset(a for a, n in self.names.items() if n in state)

    def automaton_for(self, a):
        """NFA for ``I_G(a, R)`` over the index alphabet."""
        if self.empty:
            return empty_nfa(self.indices)
        order, edges = self.automaton.reachable()
        index = {x: k for k, x in enumerate(order)}
        finals = {index[x] for x in order if self.names[a] in x}
        rev = Nfa(self.indices, range(len(order)),
                  [(index[p], w, index[q]) for p, w, q in edges], 0, finals)
        return compact(nfa_reverse(rev))


def iw_automaton(g, a, r):
    """Automaton for ``I_G(a, R) = { x ∈ I* : ∃ y ∈ L(r), a x ⇒* y }``."""
    if a not in g.nonterminals:
        raise ValueError(f"{a!r} is not a nonterminal")
    return IndexAnalysis(g, r, [a]).automaton_for(a)
