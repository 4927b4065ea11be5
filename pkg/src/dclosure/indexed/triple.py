"""Applying a transducer to an indexed grammar.

Nonterminals of the result are triples ``(p, A, q)``: ``A`` derives a word
that the transducer can read on a path from ``p`` to ``q``, and the triple
derives the outputs of such paths.  Terminal productions ``A -> u`` are
handled by small runs of the transducer over ``u``: nonterminals
``("run", k, (r, i), (s, j))`` walk from state ``r`` having read ``i``
letters of the ``k``-th terminal production to ``(s, j)``, emitting what the
transducer writes.
"""
from collections import deque

from ..errors import AlphabetMismatch
from ..transducers import Transducer, split_reads
from ..words import EPSILON
from .grammar import Fresh, IndexedGrammar, Production, pop, prune, rule
from .normal import escape, normalize, production_form, split_output


def escape_outputs(g):
    """Rewrite output productions ``A -> u B v`` (``uv ≠ ε``) as splits.

    ``u`` and ``v`` move into fresh nonterminals that pop their whole index
    and then emit the word, so the grammar only emits terminals through
    terminal productions.  Unit productions ``A -> B`` are kept.
    """
    fresh = Fresh(g.nonterminals | set(g.terminals) | set(g.indices), "E")
    prods = []
    cache = {}

    def word_nt(w):
        if w not in cache:
            cache[w] = escape(g, fresh, w, prods, "E")
        return cache[w]

    for p in sorted(g.productions, key=Production.sort_key):
        if production_form(g, p) != "output" or len(p.rhs) == 1:
            prods.append(p)
            continue
        u, b, v = split_output(g, p)
        if u and v:
            y = fresh("Y")
            prods.append(rule(p.lhs, (word_nt(u), y)))
            prods.append(rule(y, (b, word_nt(v))))
        elif u:
            prods.append(rule(p.lhs, (word_nt(u), b)))
        else:
            prods.append(rule(p.lhs, (b, word_nt(v))))
    nts = set(g.nonterminals) | {p.lhs for p in prods}
    return IndexedGrammar(nts, g.terminals, g.indices, prods, g.start)


def single_final(t):
    """Equivalent transducer whose edges read ≤ 1 letter, with one final state.

    Outputs may stay longer than one letter; the construction below emits
    them as words.  This keeps the state count (and so the number of
    triples) close to the input's.
    """
    t = split_reads(t)
    if len(t.finals) == 1:
        return t
    end = ("final",)
    while end in t.states:
        end = end + ("'",)
    edges = set(t.edges) | {(f, EPSILON, EPSILON, end) for f in t.finals}
    return Transducer(t.input_alphabet, t.output_alphabet, t.states | {end}, edges,
                      t.initial, {end})


def _prepare(g, t):
    if set(t.input_alphabet) != set(g.terminals):
        raise AlphabetMismatch(g.terminals, t.input_alphabet, "grammar terminals and transducer input")
    return escape_outputs(normalize(g)), single_final(t)


def triple_productions(g, t, roots):
    """Productions of the triple grammar reachable from ``roots``.

    ``g`` must be normalized with output productions escaped; ``t`` must
    read at most one letter per edge and have a single final state.
    """
    states = sorted(t.states, key=repr)
    reads, writes = {}, {}
    for p, u, v, q in t.edges:
        if u:
            reads.setdefault(p, []).append((u[0], v, q))
        else:
            writes.setdefault(p, []).append((v, q))
    terminal_rules, rules_by_k = {}, {}
    for k, p in enumerate(sorted(g.productions, key=Production.sort_key)):
        if p.pop is None and p.push is None and g.terminal_word(p.rhs):
            terminal_rules.setdefault(p.lhs, []).append((k, p.rhs))
            rules_by_k[k] = p.rhs
    reach_cache = {}

    def run_succ(k, u, r, i):
        """Moves of a run: (emitted word, next position)."""
        for v, r2 in writes.get(r, ()):
            yield v, (r2, i)
        if i < len(u):
            for a, v, r2 in reads.get(r, ()):
                if a == u[i]:
                    yield v, (r2, i + 1)

    def run_reach(k, u, r):
        seen = {(r, 0)}
        queue = deque(seen)
        while queue:
            r1, i = queue.popleft()
            for _, nxt in run_succ(k, u, r1, i):
                if nxt not in seen:
                    seen.add(nxt)
                    queue.append(nxt)
        return seen

    prods = set()
    seen = set(roots)
    queue = deque(roots)
    while queue:
        x = queue.popleft()
        new = []
        if x[0] == "run":
            _, k, (r, i), (s, j) = x
            u = rules_by_k[k]
            if (r, i) == (s, j):
                prods.add(rule(x, ()))
            for v, nxt in run_succ(k, u, r, i):
                y = ("run", k, nxt, (s, j))
                prods.add(rule(x, tuple(v) + (y,)))
                new.append(y)
        else:
            p, a, q = x
            for prod in g.by_lhs[a]:
                form = production_form(g, prod)
                if form == "push":
                    y = (p, prod.rhs[0], q)
                    prods.add(Production(x, (y,), push=prod.push))
                    new.append(y)
                elif form == "pop":
                    y = (p, prod.rhs[0], q)
                    prods.add(pop(x, prod.pop, (y,)))
                    new.append(y)
                elif form == "output":
                    y = (p, prod.rhs[0], q)
                    prods.add(rule(x, (y,)))
                    new.append(y)
                elif form == "split":
                    b, c = prod.rhs
                    for r in states:
                        y, z = (p, b, r), (r, c, q)
                        prods.add(rule(x, (y, z)))
                        new += [y, z]
            for k, u in terminal_rules.get(a, ()):
                if (k, p) not in reach_cache:
                    reach_cache[k, p] = run_reach(k, u, p)
                if (q, len(u)) in reach_cache[k, p]:
                    y = ("run", k, (p, 0), (q, len(u)))
                    prods.add(rule(x, (y,)))
                    new.append(y)
        for y in new:
            if y not in seen:
                seen.add(y)
                queue.append(y)
    return seen, prods


def triple_construct(g, t, start=None):
    """Indexed grammar for ``T(L(g))`` (or for ``T(L(g, start))``)."""
    g, t = _prepare(g, t)
    a = g.start if start is None else start
    root = (t.initial, a, t.final)
    nts, prods = triple_productions(g, t, [root])
    return prune(IndexedGrammar(nts, t.output_alphabet, g.indices, prods, root))
