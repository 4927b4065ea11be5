"""Interval, productive and partitioned grammars for languages inside ``a1* ... an*``.

An interval grammar tags each nonterminal ``A`` with ``ι(A) = (i, j)``: it
only derives words of ``ai* ... aj*``.  A productive grammar never derives
the empty word from a sentential form reachable from the start.  The
partitioned family splits the letters into *direct* ones (produced by a
single terminal where a whole unary subtree used to be) and the others,
whose subtrees are kept but at most one per letter.
"""
from collections import deque
from itertools import combinations, product as cartesian

from ..automata import epsilon_nfa, nfa
from .grammar import (
    Fresh,
    IndexedGrammar,
    IntervalGrammar,
    PartitionedGrammar,
    Production,
    pop,
    prune,
    restrict_interval,
    rule,
)
from .iw import IndexAnalysis
from .normal import normalize, production_form, split_output


def in_blocks(w, i, j, rank):
    """Is ``w`` in ``ai* ... aj*`` (1-based, ``rank`` maps letters to positions)?"""
    last = i
    for x in w:
        k = rank[x]
        if k < last or k > j:
            return False
        last = k
    return True


def _rank(letters):
    return {a: k for k, a in enumerate(letters, 1)}


def _letters(g, letters):
    letters = g.terminals if letters is None else tuple(letters)
    if set(letters) != set(g.terminals):
        raise ValueError(f"letter order {letters} does not list the terminals {g.terminals}")
    return letters


# ---------------------------------------------------------------- interval grammar

def to_interval(g, letters=None):
    """Equivalent interval grammar; ``L(g)`` must lie in ``a1* ... an*``.

    ``letters`` gives ``a1 ... an`` (default: the terminal declaration order).
    Nonterminals are triples ``(i, A, j)`` with ``ι = (i, j)``.
    """
    g = normalize(g)
    letters = _letters(g, letters)
    n = len(letters)
    rank = _rank(letters)
    if n == 0:
        raise ValueError("need at least one terminal")
    root = (1, g.start, n)
    seen = {root}
    queue = deque([root])
    prods = set()
    while queue:
        x = queue.popleft()
        i, a, j = x
        new = []
        for p in g.by_lhs[a]:
            form = production_form(g, p)
            if form == "push":
                y = (i, p.rhs[0], j)
                prods.add(Production(x, (y,), push=p.push))
                new.append(y)
            elif form == "pop":
                y = (i, p.rhs[0], j)
                prods.add(pop(x, p.pop, (y,)))
                new.append(y)
            elif form == "output":
                u, b, v = split_output(g, p)
                for r in range(i, j + 1):
                    if not in_blocks(u, i, r, rank):
                        continue
                    for s in range(r, j + 1):
                        if in_blocks(v, s, j, rank):
                            y = (r, b, s)
                            prods.add(rule(x, u + (y,) + v))
                            new.append(y)
            elif form == "split":
                b, c = p.rhs
                for k in range(i, j + 1):
                    y, z = (i, b, k), (k, c, j)
                    prods.add(rule(x, (y, z)))
                    new += [y, z]
            elif form == "terminal":
                if in_blocks(p.rhs, i, j, rank):
                    prods.add(p if p.lhs == x else rule(x, p.rhs))
            else:
                raise ValueError(f"production {p} is not in normal form")
        for y in new:
            if y not in seen:
                seen.add(y)
                queue.append(y)
    h = prune(IndexedGrammar(seen, g.terminals, g.indices, prods, root))
    return IntervalGrammar(h, {x: (x[0], x[2]) for x in h.nonterminals}, letters)


def interval_consistent(g, iota, letters, p):
    """Does ``p`` respect the syntactic interval conditions?"""
    rank = _rank(letters)
    i, j = iota[p.lhs]
    form = production_form(g, p)
    if form in ("push", "pop"):
        return iota[p.rhs[0]] == (i, j)
    if form == "output":
        u, b, v = split_output(g, p)
        r, s = iota[b]
        return i <= r <= s <= j and in_blocks(u, i, r, rank) and in_blocks(v, s, j, rank)
    if form == "split":
        (p1, q1), (r1, s1) = iota[p.rhs[0]], iota[p.rhs[1]]
        return i <= p1 <= q1 <= r1 <= s1 <= j
    if form == "terminal":
        return in_blocks(p.rhs, i, j, rank)
    return False


# ---------------------------------------------------------------- productive grammar

def _plus_nfa(letters):
    edges = [(0, a, 1) for a in letters] + [(1, a, 1) for a in letters]
    return nfa(letters, edges, 0, {1})


class IndexStates:
    """Deterministic states of index words for ``R = {ε}`` and ``R = T+`` jointly.

    A state describes the index word read so far (bottom first) by the sets
    ``σ0`` of nonterminals that derive ε and ``σ+`` of those deriving a
    nonempty word with that index.
    """

    def __init__(self, g):
        self.zero = IndexAnalysis(g, epsilon_nfa(g.terminals))
        self.plus = IndexAnalysis(g, _plus_nfa(g.terminals))
        start = (self.zero.automaton.initial, self.plus.automaton.initial)
        self.states = [start]
        self.index = {start: 0}
        self.table = {}
        k = 0
        while k < len(self.states):
            x0, xp = self.states[k]
            for f in g.indices:
                y = (self.zero.automaton.step(x0, f), self.plus.automaton.step(xp, f))
                if y not in self.index:
                    self.index[y] = len(self.states)
                    self.states.append(y)
                self.table[k, f] = self.index[y]
            k += 1
        self.sigma0 = [self.zero.state_members(x0) for x0, _ in self.states]
        self.sigma_plus = [self.plus.state_members(xp) for _, xp in self.states]

    def push(self, q, f):
        """State of ``f x`` when ``x`` has state ``q``."""
        return self.table[q, f]

    def __len__(self):
        return len(self.states)


def to_productive(ig):
    """Productive interval grammar for ``L(ig) ∖ {ε}``.

    Nonterminals are pairs ``(A, q)`` and index symbols pairs ``(f, q)``
    where ``q`` is the state of the index word below.  Output productions
    ``A -> u B v`` whose ``B`` can only vanish are kept through a fresh
    nonterminal that pops its index and emits ``uv``.
    """
    g = ig.grammar
    qs = IndexStates(g)
    q0 = 0
    fresh = Fresh(g.nonterminals, "E")
    iota = {}
    prods = set()
    escapes = {}

    def escape_nt(word, interval):
        key = (word, interval)
        if key not in escapes:
            e = fresh("E")
            escapes[key] = e
            for q in range(len(qs)):
                for f in g.indices:
                    prods.add(pop((e, qs.push(q, f)), (f, q), ((e, q),)))
            prods.add(rule((e, q0), word))
            for q in range(len(qs)):
                iota[(e, q)] = interval
        return escapes[key]

    for p in sorted(g.productions, key=Production.sort_key):
        a = p.lhs
        form = production_form(g, p)
        for q in range(len(qs)):
            plus, zero = qs.sigma_plus[q], qs.sigma0[q]
            if form == "pop":
                # (A, f·q)(f, q) -> (B, q)
                b = p.rhs[0]
                if b in plus:
                    prods.add(pop((a, qs.push(q, p.pop)), (p.pop, q), ((b, q),)))
            elif form == "push":
                b, f = p.rhs[0], p.push
                q2 = qs.push(q, f)
                if b in qs.sigma_plus[q2]:
                    prods.add(Production((a, q), ((b, q2),), push=(f, q)))
            elif form == "output":
                u, b, v = split_output(g, p)
                if b in plus:
                    prods.add(rule((a, q), u + ((b, q),) + v))
                if (u or v) and b in zero:
                    e = escape_nt(u + v, ig.iota[a])
                    prods.add(rule((a, q), ((e, q),)))
            elif form == "split":
                b, c = p.rhs
                if b in plus and c in plus:
                    prods.add(rule((a, q), ((b, q), (c, q))))
                if b in plus and c in zero:
                    prods.add(rule((a, q), ((b, q),)))
                if b in zero and c in plus:
                    prods.add(rule((a, q), ((c, q),)))
            elif form == "terminal":
                if q == q0 and p.rhs:
                    prods.add(rule((a, q0), p.rhs))
            else:
                raise ValueError(f"production {p} is not in normal form")
    for a in g.nonterminals:
        for q in range(len(qs)):
            iota[(a, q)] = ig.iota[a]
    nts = set(iota)
    indices = [(f, q) for f in g.indices for q in range(len(qs))]
    start = (g.start, q0)
    h = prune(IndexedGrammar(nts, g.terminals, indices, prods, start))
    used = sorted({p.pop for p in h.productions if p.pop is not None}
                  | {p.push for p in h.productions if p.push is not None}, key=repr)
    h = IndexedGrammar(h.nonterminals, h.terminals, used, h.productions, h.start)
    return restrict_interval(IntervalGrammar(h, iota, ig.letters), h)


def is_productive_form(g):
    """Syntactic check: no ε right-hand sides and no pop to nothing."""
    return all(p.rhs for p in g.productions)


# ---------------------------------------------------------------- partitioned grammars

def _interval_forms(ig, fresh):
    """Productions reduced to the interval shapes, with equal intervals across push/pop."""
    g, iota = ig.grammar, dict(ig.iota)
    prods = []
    for p in sorted(g.productions, key=Production.sort_key):
        form = production_form(g, p)
        if form in ("push", "pop") and iota[p.rhs[0]] != iota[p.lhs]:
            b = p.rhs[0]
            (i, j), (r, s) = iota[p.lhs], iota[b]
            if not i <= r <= s <= j:
                continue
            z = fresh("Z")
            iota[z] = (i, j)
            if form == "push":
                prods.append(Production(p.lhs, (z,), push=p.push))
            else:
                prods.append(pop(p.lhs, p.pop, (z,)))
            prods.append(rule(z, (b,)))
            continue
        if interval_consistent(g, iota, ig.letters, p):
            prods.append(p)
    nts = set(g.nonterminals) | {p.lhs for p in prods}
    return IndexedGrammar(nts, g.terminals, g.indices, prods, g.start), iota


def _direct_stage(g, iota, letters, direct, fresh):
    """Replace unary direct-letter nonterminals by their letter."""
    def unary_direct(x):
        if x not in g.nonterminals:
            return None
        i, j = iota[x]
        return letters[i - 1] if i == j and letters[i - 1] in direct else None

    iota = dict(iota)
    prods = []
    escapes = {}
    for p in sorted(g.productions, key=Production.sort_key):
        if unary_direct(p.lhs) is not None:
            continue
        if p.push is not None or p.pop is not None:
            if unary_direct(p.rhs[0]) is None:
                prods.append(p)
            continue
        if not any(unary_direct(x) for x in p.rhs):
            prods.append(p)
            continue
        w = tuple(unary_direct(x) or x for x in p.rhs)
        if any(x in g.nonterminals for x in w):
            prods.append(rule(p.lhs, w))
            continue
        key = (w, iota[p.lhs])
        if key not in escapes:
            e = fresh("E")
            escapes[key] = e
            iota[e] = iota[p.lhs]
            for f in g.indices:
                prods.append(pop(e, f, (e,)))
            prods.append(rule(e, w))
        prods.append(rule(p.lhs, (escapes[key],)))
    nts = {a for a in g.nonterminals if unary_direct(a) is None} | {p.lhs for p in prods}
    return IndexedGrammar(nts, g.terminals, g.indices, prods, g.start), iota


def _annotate(g, iota, letters, direct, fresh):
    """Keep at most one subtree per non-direct letter, tracking where it may still appear."""
    rank = _rank(letters)
    others = [k for k, a in enumerate(letters, 1) if a not in direct]

    def unary(x):
        i, j = iota[x]
        return i == j

    def tag(a, pending):
        return a if unary(a) else ("alpha", a, tuple(sorted(pending)))

    new_iota = {}
    prods = set()
    escapes = {}
    start_pending = frozenset(k for k in others if iota[g.start][0] <= k <= iota[g.start][1])
    root = (g.start, frozenset() if unary(g.start) else start_pending)
    seen = {root}
    queue = deque([root])
    while queue:
        a, pending = queue.popleft()
        head = tag(a, pending)
        new_iota[head] = iota[a]
        out = []
        for p in g.by_lhs[a]:
            if unary(a):
                kids = [(x, frozenset()) for x in p.rhs if x in g.nonterminals]
                rhs = tuple(x if x not in g.nonterminals else tag(x, frozenset()) for x in p.rhs)
                prods.add(Production(head, rhs, pop=p.pop, push=p.push))
                out += kids
                continue
            if p.push is not None or p.pop is not None:
                b = p.rhs[0]
                kid = (b, pending)
                prods.add(Production(head, (tag(*kid),), pop=p.pop, push=p.push))
                out.append(kid)
                continue
            for rhs, kids in _distribute(g, iota, rank, p.rhs, pending, others):
                out += kids
                tagged = tuple(x if isinstance(x, str) else tag(*x) for x in rhs)
                had_nts = any(x in g.nonterminals for x in p.rhs)
                if kids or not had_nts:
                    prods.add(rule(head, tagged))
                    continue
                key = (tagged, iota[a])
                if key not in escapes:
                    e = fresh("E")
                    escapes[key] = e
                    new_iota[e] = iota[a]
                    for f in g.indices:
                        prods.add(pop(e, f, (e,)))
                    prods.add(rule(e, tagged))
                prods.add(rule(head, (escapes[key],)))
        for kid in out:
            if kid not in seen:
                seen.add(kid)
                queue.append(kid)
    h = IndexedGrammar(set(new_iota), g.terminals, g.indices, prods, tag(*root))
    return h, new_iota


def _distribute(g, iota, rank, rhs, pending, others):
    """Ways to keep at most one carrier per pending letter in ``rhs``.

    Yields ``(items, kids)`` where items are terminal letters or
    ``(nonterminal, pending set)`` pairs and kids lists the nonterminal items.
    """
    carriers = {}
    for pos, x in enumerate(rhs):
        if x in g.nonterminals:
            i, j = iota[x]
            for k in others:
                if i <= k <= j:
                    carriers.setdefault(k, []).append(pos)
        elif rank[x] in others:
            carriers.setdefault(rank[x], []).append(pos)
    letters = sorted(k for k in carriers if k in pending)
    choices = [carriers[k] for k in letters]
    for pick in cartesian(*choices):
        chosen = dict(zip(letters, pick))
        items, kids = [], []
        for pos, x in enumerate(rhs):
            if x not in g.nonterminals:
                k = rank[x]
                if k not in others or chosen.get(k) == pos:
                    items.append(x)
                continue
            i, j = iota[x]
            if i == j and i in others:
                if chosen.get(i) == pos:
                    items.append((x, frozenset()))
                    kids.append((x, frozenset()))
                continue
            mine = frozenset(k for k, q in chosen.items() if q == pos)
            items.append((x, mine))
            kids.append((x, mine))
        yield tuple(items), kids


def partitioned_family(ig):
    """One partitioned grammar per set ``D`` of direct letters.

    The family satisfies: ``↓L(ig) = a1* ... an*`` iff some member's closure
    is ``a1* ... an*``, and each member's closure lies inside ``↓L(ig)``.
    For a single letter the grammar itself is returned with ``D = ∅``.
    """
    letters = ig.letters
    if len(letters) == 1:
        return [PartitionedGrammar(ig, frozenset())]
    taken = set(ig.grammar.nonterminals) | set(ig.grammar.terminals) | set(ig.grammar.indices)
    family = []
    for size in range(len(letters) + 1):
        for direct in combinations(letters, size):
            direct = frozenset(direct)
            fresh = Fresh(taken, "E")
            g0, iota0 = _interval_forms(ig, fresh)
            g1, iota1 = _direct_stage(g0, iota0, letters, direct, fresh)
            if g1.start not in g1.nonterminals:
                g1 = IndexedGrammar(g1.nonterminals | {g1.start}, g1.terminals, g1.indices,
                                    g1.productions, g1.start)
            g2, iota2 = _annotate(g1, iota1, letters, direct, fresh)
            g3 = prune(g2)
            family.append(PartitionedGrammar(
                IntervalGrammar(g3, {a: iota2[a] for a in g3.nonterminals}, letters), direct))
    return family
