"""Finite-state transducers and the rational transductions used by the engine."""
from collections import deque
from dataclasses import dataclass
from functools import cached_property
from itertools import count

from .automata import Nfa, compact, make_alphabet, nfa_normalize
from .errors import AlphabetMismatch, ArityMismatch, UnknownLetter
from .words import EPSILON


@dataclass(frozen=True)
class Transducer:
    input_alphabet: tuple
    output_alphabet: tuple
    states: frozenset
    edges: frozenset  # of (source, input word, output word, target)
    initial: object
    finals: frozenset

    def __post_init__(self):
        object.__setattr__(self, "input_alphabet", make_alphabet(self.input_alphabet))
        object.__setattr__(self, "output_alphabet", make_alphabet(self.output_alphabet))
        object.__setattr__(self, "states", frozenset(self.states))
        object.__setattr__(self, "finals", frozenset(self.finals))
        object.__setattr__(
            self,
            "edges",
            frozenset((p, tuple(u), tuple(v), q) for p, u, v, q in self.edges),
        )
        if self.initial not in self.states or not self.finals <= self.states:
            raise ValueError("initial and final states must be states")
        ins, outs = set(self.input_alphabet), set(self.output_alphabet)
        for p, u, v, q in self.edges:
            if p not in self.states or q not in self.states:
                raise ValueError(f"edge {(p, u, v, q)!r} uses an undeclared state")
            for x in u:
                if x not in ins:
                    raise UnknownLetter(x, self.input_alphabet)
            for y in v:
                if y not in outs:
                    raise UnknownLetter(y, self.output_alphabet)

    @cached_property
    def out(self):
        adj = {q: [] for q in self.states}
        for p, u, v, q in sorted(self.edges, key=repr):
            adj[p].append((u, v, q))
        return adj

    @cached_property
    def is_normalized(self):
        return len(self.finals) == 1 and all(
            len(u) + len(v) <= 1 for _, u, v, _ in self.edges
        )

    @property
    def final(self):
        """The single final state of a normalized transducer."""
        (f,) = self.finals
        return f

    def __repr__(self):
        return (
            f"Transducer({self.input_alphabet} -> {self.output_alphabet}, "
            f"states={len(self.states)}, edges={len(self.edges)})"
        )


def transducer(input_alphabet, output_alphabet, edges, initial, finals):
    edges = [(p, _as_word(u), _as_word(v), q) for p, u, v, q in edges]
    states = {initial, *finals}
    for p, _, _, q in edges:
        states.update((p, q))
    return Transducer(input_alphabet, output_alphabet, states, edges, initial, finals)


def _as_word(w):
    if isinstance(w, str):
        return EPSILON if w in ("", "_") else (w,)
    return tuple(w)


def _relabel(t):
    order = [t.initial]
    seen = {t.initial}
    queue = deque([t.initial])
    while queue:
        p = queue.popleft()
        for _, _, q in t.out[p]:
            if q not in seen:
                seen.add(q)
                order.append(q)
                queue.append(q)
    order += sorted((q for q in t.states if q not in seen), key=repr)
    index = {q: i for i, q in enumerate(order)}
    return Transducer(
        t.input_alphabet,
        t.output_alphabet,
        range(len(order)),
        [(index[p], u, v, index[q]) for p, u, v, q in t.edges],
        0,
        [index[q] for q in t.finals],
    )


def _trim(t):
    fwd = {t.initial}
    stack = [t.initial]
    while stack:
        p = stack.pop()
        for _, _, q in t.out[p]:
            if q not in fwd:
                fwd.add(q)
                stack.append(q)
    back = {q: [] for q in t.states}
    for p, _, _, q in t.edges:
        back[q].append(p)
    co = set(t.finals)
    stack = list(t.finals)
    while stack:
        q = stack.pop()
        for p in back[q]:
            if p not in co:
                co.add(p)
                stack.append(p)
    keep = (fwd & co) | {t.initial} | (t.finals & fwd)
    if not t.finals & fwd:
        keep = {t.initial} | set(t.finals)
    return Transducer(
        t.input_alphabet,
        t.output_alphabet,
        keep,
        [e for e in t.edges if e[0] in keep and e[3] in keep],
        t.initial,
        t.finals & keep,
    )


def transducer_normalize(t):
    """Every edge reads at most one letter or writes at most one, never both;
    exactly one final state."""
    if t.is_normalized:
        return t
    states = set(t.states)
    fresh = count()

    def new_state():
        while True:
            s = ("n", next(fresh))
            if s not in states:
                states.add(s)
                return s

    edges = []
    for p, u, v, q in t.edges:
        steps = [((x,), EPSILON) for x in u] + [(EPSILON, (y,)) for y in v]
        if not steps:
            edges.append((p, EPSILON, EPSILON, q))
            continue
        prev = p
        for i, (a, b) in enumerate(steps):
            nxt = q if i == len(steps) - 1 else new_state()
            edges.append((prev, a, b, nxt))
            prev = nxt
    if len(t.finals) == 1:
        finals = set(t.finals)
    else:
        f = new_state()
        edges += [(q, EPSILON, EPSILON, f) for q in t.finals]
        finals = {f}
    return _relabel(
        Transducer(t.input_alphabet, t.output_alphabet, states, edges, t.initial, finals)
    )


def split_reads(t):
    """Equivalent transducer whose edges read at most one letter each.

    Outputs stay attached to the last read of a split edge, so no state is
    added for edges that already read at most one letter.  This is cheaper
    than :func:`transducer_normalize` for product constructions.
    """
    if all(len(u) <= 1 for _, u, _, _ in t.edges):
        return t
    states = set(t.states)
    fresh = count()
    edges = []
    for p, u, v, q in t.edges:
        if len(u) <= 1:
            edges.append((p, u, v, q))
            continue
        prev = p
        for i, x in enumerate(u):
            if i == len(u) - 1:
                edges.append((prev, (x,), v, q))
                break
            mid = ("r", next(fresh))
            while mid in states:
                mid = ("r", next(fresh))
            states.add(mid)
            edges.append((prev, (x,), EPSILON, mid))
            prev = mid
    return Transducer(t.input_alphabet, t.output_alphabet, states, edges, t.initial, t.finals)


def apply_to_nfa(t, m):
    """Automaton for the image T(L(m))."""
    if set(m.alphabet) != set(t.input_alphabet):
        raise AlphabetMismatch(t.input_alphabet, m.alphabet, "transducer input and automaton")
    t = split_reads(t)
    m = nfa_normalize(m)
    start = (t.initial, m.initial)
    seen = {start}
    queue = deque([start])
    edges = []
    while queue:
        p, s = src = queue.popleft()
        succ = []
        for u, v, p2 in t.out[p]:
            if u:
                succ += [(v, (p2, s2)) for w, s2 in m.out[s] if w == u]
            else:
                succ.append((v, (p2, s)))
        succ += [(EPSILON, (p, s2)) for w, s2 in m.out[s] if not w]
        for label, dst in succ:
            edges.append((src, label, dst))
            if dst not in seen:
                seen.add(dst)
                queue.append(dst)
    finals = {x for x in seen if x[0] in t.finals and x[1] in m.finals}
    return compact(Nfa(t.output_alphabet, seen, edges, start, finals))


def compose(t1, t2):
    """Transducer for ``t2 ∘ t1``: apply ``t1`` first, then ``t2``."""
    if set(t1.output_alphabet) != set(t2.input_alphabet):
        raise AlphabetMismatch(t1.output_alphabet, t2.input_alphabet, "composition interface")
    t1, t2 = transducer_normalize(t1), transducer_normalize(t2)
    start = (t1.initial, t2.initial)
    seen = {start}
    queue = deque([start])
    edges = []
    while queue:
        p, q = src = queue.popleft()
        succ = []
        for u, v, p2 in t1.out[p]:
            if v:
                succ += [(EPSILON, EPSILON, (p2, q2)) for u2, _, q2 in t2.out[q] if u2 == v]
            else:
                succ.append((u, EPSILON, (p2, q)))
        for u2, v2, q2 in t2.out[q]:
            if not u2:
                succ.append((EPSILON, v2, (p, q2)))
        for u, v, dst in succ:
            edges.append((src, u, v, dst))
            if dst not in seen:
                seen.add(dst)
                queue.append(dst)
    finals = {x for x in seen if x[0] in t1.finals and x[1] in t2.finals}
    t = Transducer(t1.input_alphabet, t2.output_alphabet, seen, edges, start, finals)
    return transducer_normalize(_relabel(_trim(t)))


# ---------------------------------------------------------------- specific transducers

def identity_transduction(alphabet):
    return transducer(alphabet, alphabet, [(0, (a,), (a,), 0) for a in alphabet], 0, {0})


def morphism_transduction(input_alphabet, output_alphabet, images):
    """Letter-wise substitution ``x ↦ images[x]`` (a word)."""
    edges = [(0, (x,), tuple(images[x]), 0) for x in input_alphabet if x in images]
    return transducer(input_alphabet, output_alphabet, edges, 0, {0})


def empty_transduction(input_alphabet, output_alphabet):
    return Transducer(input_alphabet, output_alphabet, {0, 1}, (), 0, {1})


def subword_transduction(alphabet):
    """L ↦ ↓L: each letter is either copied or dropped."""
    edges = [(0, (a,), (a,), 0) for a in alphabet] + [(0, (a,), EPSILON, 0) for a in alphabet]
    return transducer(alphabet, alphabet, edges, 0, {0})


def regular_intersection_transduction(r):
    """L ↦ L ∩ L(r), realized as the identity restricted to paths of ``r``."""
    r = nfa_normalize(r)
    edges = [(p, w, w, q) for p, w, q in r.edges]
    return Transducer(r.alphabet, r.alphabet, r.states, edges, r.initial, r.finals)


def projection_transduction(alphabet, letter):
    """The transduction X* × {letter}*."""
    edges = [(0, (x,), EPSILON, 0) for x in alphabet] + [(0, EPSILON, (letter,), 0)]
    return transducer(alphabet, (letter,), edges, 0, {0})


def block_counting_transduction(words, blocks, out, alphabet):
    """{(w0 u1^x1 w1 ... un^xn wn, a1^x1 ... an^xn) : xi ≥ 0}.

    ``words`` holds w0..wn, ``blocks`` the nonempty u1..un and ``out`` the
    output letters a1..an.
    """
    words, blocks, out = [tuple(w) for w in words], [tuple(u) for u in blocks], tuple(out)
    n = len(blocks)
    if len(words) != n + 1 or len(out) != n:
        raise ArityMismatch(
            f"need n+1 words, n blocks and n output letters; got "
            f"{len(words)}, {n}, {len(out)}"
        )
    if any(not u for u in blocks):
        raise ArityMismatch("block words must be nonempty")
    # state 2i: before reading w_i; state 2i+1: looping on u_{i+1}
    edges = []
    for i in range(n):
        edges.append((2 * i, words[i], EPSILON, 2 * i + 1))
        edges.append((2 * i + 1, blocks[i], (out[i],), 2 * i + 1))
        edges.append((2 * i + 1, EPSILON, EPSILON, 2 * i + 2))
    edges.append((2 * n, words[n], EPSILON, 2 * n + 1))
    return Transducer(alphabet, out, range(2 * n + 2), edges, 0, {2 * n + 1})


def transducer_image_pairs(t, max_in, max_out):
    """All pairs (u, v) of the transduction with |u| ≤ max_in and |v| ≤ max_out.

    Brute-force path search, used as a test oracle.
    """
    t = transducer_normalize(t)
    start = (t.initial, EPSILON, EPSILON)
    seen = {start}
    stack = [start]
    pairs = set()
    while stack:
        p, u, v = stack.pop()
        if p in t.finals:
            pairs.add((u, v))
        for a, b, q in t.out[p]:
            nu, nv = u + a, v + b
            if len(nu) > max_in or len(nv) > max_out:
                continue
            s = (q, nu, nv)
            if s not in seen:
                seen.add(s)
                stack.append(s)
    return pairs
