"""Finite automata over finite alphabets.

An :class:`Nfa` carries word labels on its edges, like the textbook
definition.  Most operations first call :func:`nfa_normalize` so that every
label is a single letter or the empty word; ε-edges are kept and handled
through ε-closures.
"""
from collections import deque
from dataclasses import dataclass, field
from functools import cached_property
from itertools import count

from .errors import AlphabetMismatch, UnknownLetter
from .words import EPSILON


def make_alphabet(letters):
    letters = tuple(letters)
    if len(set(letters)) != len(letters):
        raise ValueError(f"duplicate letters in alphabet {letters}")
    return letters


@dataclass(frozen=True)
class Nfa:
    alphabet: tuple
    states: frozenset
    edges: frozenset  # of (source, label word, target)
    initial: object
    finals: frozenset = field(default_factory=frozenset)

    def __post_init__(self):
        object.__setattr__(self, "alphabet", make_alphabet(self.alphabet))
        object.__setattr__(self, "states", frozenset(self.states))
        object.__setattr__(self, "finals", frozenset(self.finals))
        object.__setattr__(
            self, "edges", frozenset((p, tuple(w), q) for p, w, q in self.edges)
        )
        if self.initial not in self.states:
            raise ValueError(f"initial state {self.initial!r} is not a state")
        if not self.finals <= self.states:
            raise ValueError("final states must be states")
        letters = set(self.alphabet)
        for p, w, q in self.edges:
            if p not in self.states or q not in self.states:
                raise ValueError(f"edge {(p, w, q)!r} uses an undeclared state")
            for x in w:
                if x not in letters:
                    raise UnknownLetter(x, self.alphabet)

    @cached_property
    def out(self):
        adj = {q: [] for q in self.states}
        for p, w, q in sorted(self.edges, key=repr):
            adj[p].append((w, q))
        return adj

    @cached_property
    def is_normalized(self):
        return all(len(w) <= 1 for _, w, _ in self.edges)

    def __repr__(self):
        return (
            f"Nfa(alphabet={self.alphabet}, states={len(self.states)}, "
            f"edges={len(self.edges)})"
        )


def nfa(alphabet, edges, initial, finals, states=None):
    """Convenience constructor; states default to everything mentioned."""
    edges = [(p, _as_word(w), q) for p, w, q in edges]
    if states is None:
        states = {initial, *finals}
        for p, _, q in edges:
            states.update((p, q))
    return Nfa(tuple(alphabet), frozenset(states), frozenset(edges), initial, frozenset(finals))


def _as_word(w):
    if isinstance(w, str):
        return EPSILON if w in ("", "_") else (w,)
    return tuple(w)


# ---------------------------------------------------------------- basics

def empty_nfa(alphabet):
    return Nfa(alphabet, {0}, (), 0, ())


def universal_nfa(alphabet):
    return Nfa(alphabet, {0}, [(0, (a,), 0) for a in alphabet], 0, {0})


def epsilon_nfa(alphabet):
    return Nfa(alphabet, {0}, (), 0, {0})


def words_nfa(alphabet, words):
    """Automaton accepting exactly the given finite set of words."""
    edges, finals = [], set()
    states = {0}
    fresh = count(1)
    for w in words:
        q = next(fresh)
        states.add(q)
        edges.append((0, tuple(w), q))
        finals.add(q)
    return nfa_normalize(Nfa(alphabet, states, edges, 0, finals))


def superwords_nfa(alphabet, w):
    """Automaton for the words that contain ``w`` as a subword."""
    w = tuple(w)
    edges = [(i, (a,), i) for i in range(len(w) + 1) for a in alphabet]
    edges += [(i, (x,), i + 1) for i, x in enumerate(w)]
    return Nfa(alphabet, range(len(w) + 1), edges, 0, {len(w)})


def stars_nfa(alphabet, blocks):
    """Automaton for ``Y1* Y2* ... Yk*`` where each block is a set of letters."""
    k = len(blocks)
    edges = [(i, (a,), i) for i, ys in enumerate(blocks) for a in ys]
    edges += [(i, EPSILON, i + 1) for i in range(k)]
    return Nfa(alphabet, range(k + 1), edges, 0, {k})


def bounded_form_nfa(letters, alphabet=None):
    """Automaton for ``a1* a2* ... an*``."""
    return stars_nfa(tuple(letters) if alphabet is None else alphabet, [(a,) for a in letters])


def relabel(m):
    """Rename states to 0..n-1 in breadth-first order from the initial state.

    Unreachable states keep a deterministic position after the reachable ones.
    """
    order = _bfs_order(m.initial, m.out, m.states)
    index = {q: i for i, q in enumerate(order)}
    return Nfa(
        m.alphabet,
        range(len(order)),
        [(index[p], w, index[q]) for p, w, q in m.edges],
        0,
        [index[q] for q in m.finals],
    )


def _bfs_order(initial, out, states):
    seen = {initial}
    order = [initial]
    queue = deque([initial])
    while queue:
        p = queue.popleft()
        for _, q in out[p]:
            if q not in seen:
                seen.add(q)
                order.append(q)
                queue.append(q)
    rest = sorted((q for q in states if q not in seen), key=repr)
    return order + rest


def trim(m):
    """Keep only states that are reachable and co-reachable (plus the initial)."""
    fwd = _reach(m.initial, m.out)
    back = {q: [] for q in m.states}
    for p, _, q in m.edges:
        back[q].append(p)
    co = set(m.finals)
    stack = list(m.finals)
    while stack:
        q = stack.pop()
        for p in back[q]:
            if p not in co:
                co.add(p)
                stack.append(p)
    keep = (fwd & co) | {m.initial}
    return Nfa(
        m.alphabet,
        keep,
        [(p, w, q) for p, w, q in m.edges if p in keep and q in keep],
        m.initial,
        m.finals & keep,
    )


def _reach(start, out):
    seen = {start}
    stack = [start]
    while stack:
        p = stack.pop()
        for _, q in out[p]:
            if q not in seen:
                seen.add(q)
                stack.append(q)
    return seen


def compact(m):
    return relabel(trim(m))


# ---------------------------------------------------------------- operations

def nfa_normalize(m):
    """Split word labels so that every edge reads at most one letter."""
    if m.is_normalized:
        return m
    states = set(m.states)
    edges = []
    fresh = count()
    for p, w, q in m.edges:
        if len(w) <= 1:
            edges.append((p, w, q))
            continue
        prev = p
        for x in w[:-1]:
            mid = ("mid", next(fresh))
            while mid in states:
                mid = ("mid", next(fresh))
            states.add(mid)
            edges.append((prev, (x,), mid))
            prev = mid
        edges.append((prev, w[-1:], q))
    return relabel(Nfa(m.alphabet, states, edges, m.initial, m.finals))


def eps_closure(m, states):
    seen = set(states)
    stack = list(states)
    out = m.out
    while stack:
        p = stack.pop()
        for w, q in out[p]:
            if not w and q not in seen:
                seen.add(q)
                stack.append(q)
    return frozenset(seen)


def step(m, states, letter):
    """Letter successor of a set of states, ε-closed.  ``m`` must be normalized."""
    out = m.out
    nxt = {q for p in states for w, q in out[p] if w == (letter,)}
    return eps_closure(m, nxt)


def nfa_accepts(m, w):
    m = nfa_normalize(m)
    letters = set(m.alphabet)
    current = eps_closure(m, {m.initial})
    for x in w:
        if x not in letters:
            raise UnknownLetter(x, m.alphabet)
        current = step(m, current, x)
        if not current:
            return False
    return bool(current & m.finals)


def nfa_is_empty(m):
    return not (_reach(m.initial, m.out) & m.finals)


def _check_same_alphabet(m1, m2):
    if m1.alphabet != m2.alphabet:
        if set(m1.alphabet) != set(m2.alphabet):
            raise AlphabetMismatch(m1.alphabet, m2.alphabet)


def nfa_product(m1, m2):
    """Automaton for the intersection; ε-moves of either side run alone."""
    _check_same_alphabet(m1, m2)
    m1, m2 = nfa_normalize(m1), nfa_normalize(m2)
    start = (m1.initial, m2.initial)
    seen = {start}
    queue = deque([start])
    edges = []
    while queue:
        p1, p2 = src = queue.popleft()
        succ = []
        for w1, q1 in m1.out[p1]:
            if not w1:
                succ.append((EPSILON, (q1, p2)))
                continue
            for w2, q2 in m2.out[p2]:
                if w2 == w1:
                    succ.append((w1, (q1, q2)))
        for w2, q2 in m2.out[p2]:
            if not w2:
                succ.append((EPSILON, (p1, q2)))
        for w, dst in succ:
            edges.append((src, w, dst))
            if dst not in seen:
                seen.add(dst)
                queue.append(dst)
    finals = {s for s in seen if s[0] in m1.finals and s[1] in m2.finals}
    return compact(Nfa(m1.alphabet, seen, edges, start, finals))


def nfa_union(m1, m2):
    _check_same_alphabet(m1, m2)
    edges = [(("L", p), w, ("L", q)) for p, w, q in m1.edges]
    edges += [(("R", p), w, ("R", q)) for p, w, q in m2.edges]
    edges += [("init", EPSILON, ("L", m1.initial)), ("init", EPSILON, ("R", m2.initial))]
    states = {"init"} | {("L", q) for q in m1.states} | {("R", q) for q in m2.states}
    finals = {("L", q) for q in m1.finals} | {("R", q) for q in m2.finals}
    return relabel(Nfa(m1.alphabet, states, edges, "init", finals))


def nfa_reverse(m):
    m = nfa_normalize(m)
    edges = [(("s", q), w, ("s", p)) for p, w, q in m.edges]
    edges += [("init", EPSILON, ("s", f)) for f in m.finals]
    states = {"init"} | {("s", q) for q in m.states}
    return relabel(Nfa(m.alphabet, states, edges, "init", {("s", m.initial)}))


def determinize(m, alphabet=None):
    """Subset construction; the result is complete over ``alphabet``."""
    alphabet = m.alphabet if alphabet is None else alphabet
    m = nfa_normalize(m)
    start = eps_closure(m, {m.initial})
    seen = {start}
    queue = deque([start])
    edges = []
    while queue:
        s = queue.popleft()
        for a in alphabet:
            t = step(m, s, a)
            edges.append((s, (a,), t))
            if t not in seen:
                seen.add(t)
                queue.append(t)
    finals = {s for s in seen if s & m.finals}
    return relabel(Nfa(alphabet, seen, edges, start, finals))


def nfa_complement(m, alphabet=None):
    alphabet = m.alphabet if alphabet is None else tuple(alphabet)
    if set(alphabet) != set(m.alphabet):
        raise AlphabetMismatch(m.alphabet, alphabet)
    d = determinize(m, alphabet)
    return Nfa(alphabet, d.states, d.edges, d.initial, d.states - d.finals)


def nfa_equivalent(m1, m2):
    """Decide language equality by exploring both subset constructions in lockstep."""
    return find_difference(m1, m2) is None


def find_difference(m1, m2):
    """A shortest word accepted by exactly one automaton, or None."""
    _check_same_alphabet(m1, m2)
    m1, m2 = nfa_normalize(m1), nfa_normalize(m2)
    start = (eps_closure(m1, {m1.initial}), eps_closure(m2, {m2.initial}))
    seen = {start}
    queue = deque([(start, EPSILON)])
    while queue:
        (s1, s2), w = queue.popleft()
        if bool(s1 & m1.finals) != bool(s2 & m2.finals):
            return w
        for a in m1.alphabet:
            nxt = (step(m1, s1, a), step(m2, s2, a))
            if nxt not in seen:
                seen.add(nxt)
                queue.append((nxt, w + (a,)))
    return None


def nfa_included(m1, m2):
    """L(m1) ⊆ L(m2)."""
    _check_same_alphabet(m1, m2)
    return nfa_is_empty(nfa_product(m1, nfa_complement(m2, m1.alphabet)))


def nfa_downward_saturate(m):
    """Accept every subword of an accepted word: each letter edge gets an ε twin."""
    m = nfa_normalize(m)
    extra = [(p, EPSILON, q) for p, w, q in m.edges if w]
    return Nfa(m.alphabet, m.states, list(m.edges) + extra, m.initial, m.finals)


def nfa_enumerate(m, max_len):
    """All accepted words of length at most ``max_len``."""
    m = nfa_normalize(m)
    result = set()
    layer = {EPSILON: eps_closure(m, {m.initial})}
    for n in range(max_len + 1):
        for w, s in layer.items():
            if s & m.finals:
                result.add(w)
        if n == max_len:
            break
        nxt = {}
        for w, s in layer.items():
            for a in m.alphabet:
                t = step(m, s, a)
                if t:
                    nxt[w + (a,)] = t
        layer = nxt
    return result


def to_dot(m, name="nfa"):
    """Graphviz rendering with states and edges in sorted order."""
    lines = [f"digraph {name} {{", "  rankdir=LR;", '  __start [shape=point, label=""];']
    for q in sorted(m.states, key=repr):
        shape = "doublecircle" if q in m.finals else "circle"
        lines.append(f'  "{q}" [shape={shape}];')
    lines.append(f'  __start -> "{m.initial}";')
    for p, w, q in sorted(m.edges, key=repr):
        label = " ".join(w) if w else "ε"
        lines.append(f'  "{p}" -> "{q}" [label="{label}"];')
    lines.append("}")
    return "\n".join(lines) + "\n"
