"""Simple regular expressions: unions of products of ``x?`` and ``(Y)*`` atoms.

Every downward-closed language is described by such an expression, and every
such expression describes a downward-closed language.  The closure engine
searches the stream produced by :func:`enumerate_sres` for the first one that
matches.
"""
import re
from dataclasses import dataclass
from itertools import count

from .automata import Nfa, empty_nfa, make_alphabet, relabel
from .errors import UnknownLetter
from .words import EPSILON


@dataclass(frozen=True)
class OptLetter:
    """The atom ``x ∪ ε``."""

    letter: str

    @property
    def letters(self):
        return frozenset((self.letter,))

    def key(self):
        return (0, (self.letter,))

    def __str__(self):
        return f"{self.letter}?"


@dataclass(frozen=True)
class StarSet:
    """The atom ``(y1 ∪ ... ∪ yk)*`` for a nonempty letter set."""

    letters: frozenset

    def __post_init__(self):
        object.__setattr__(self, "letters", frozenset(self.letters))
        if not self.letters:
            raise ValueError("StarSet needs at least one letter")

    def key(self):
        return (1, tuple(sorted(self.letters)))

    def __str__(self):
        return "(" + "|".join(sorted(self.letters)) + ")*"


def product_key(p):
    return tuple(a.key() for a in p)


def product_size(p):
    return len(p) + 1


def show_product(p):
    return " ".join(str(a) for a in p) if p else "_"


@dataclass(frozen=True)
class Sre:
    """A union of products; each product is a tuple of atoms.

    Construct through :func:`sre` to get the canonical form.  The empty union
    denotes the empty language.
    """

    products: tuple = ()

    @property
    def size(self):
        return sum(product_size(p) for p in self.products)

    def letters(self):
        return frozenset(x for p in self.products for a in p for x in a.letters)

    def __str__(self):
        return " | ".join(show_product(p) for p in self.products)


# ---------------------------------------------------------------- canonical form

def _merge_step(p):
    """One left-to-right pass of the two local rewrite rules; None if nothing applies."""
    for i in range(len(p) - 1):
        a, b = p[i], p[i + 1]
        if isinstance(a, StarSet) and isinstance(b, StarSet):
            if a.letters <= b.letters:
                return p[:i] + p[i + 1:]
            if b.letters <= a.letters:
                return p[:i + 1] + p[i + 2:]
        elif isinstance(a, OptLetter) and isinstance(b, StarSet) and a.letter in b.letters:
            return p[:i] + p[i + 1:]
        elif isinstance(a, StarSet) and isinstance(b, OptLetter) and b.letter in a.letters:
            return p[:i + 1] + p[i + 2:]
    return None


def canonical_product(p):
    p = tuple(p)
    while True:
        q = _merge_step(p)
        if q is None:
            return p
        p = q


def is_canonical_product(p):
    return _merge_step(tuple(p)) is None


def product_included(p, q):
    """Language inclusion ``L(p) ⊆ L(q)`` between two products.

    The greedy left-to-right matching is exact for products: a star atom of
    ``p`` must fit inside one star atom of ``q``, and an optional letter must
    land in some later atom of ``q`` that contains it.
    """
    i = j = 0
    while i < len(p):
        if j == len(q):
            return False
        e, f = p[i], q[j]
        if isinstance(e, StarSet):
            if isinstance(f, StarSet) and e.letters <= f.letters:
                i += 1
            else:
                j += 1
        elif e.letter in f.letters:
            i += 1
            if isinstance(f, OptLetter):
                j += 1
        else:
            j += 1
    return True


def canonicalize(r):
    """Canonical representative: local merges, then drop subsumed products, then sort."""
    products = r.products if isinstance(r, Sre) else r
    prods = sorted({canonical_product(p) for p in products}, key=product_key)
    kept = []
    for i, p in enumerate(prods):
        dominated = False
        for j, q in enumerate(prods):
            if i == j or not product_included(p, q):
                continue
            # equal languages keep the key-smallest copy
            if not product_included(q, p) or j < i:
                dominated = True
                break
        if not dominated:
            kept.append(p)
    return Sre(tuple(kept))


def sre(*products):
    """Build a canonical SRE from products given as atom sequences."""
    return canonicalize([tuple(p) for p in products])


def is_canonical(r):
    return canonicalize(r) == r


# ---------------------------------------------------------------- enumeration

def all_atoms(alphabet):
    """Every atom over the alphabet, sorted by key."""
    alphabet = make_alphabet(alphabet)
    atoms = [OptLetter(x) for x in alphabet]
    letters = sorted(alphabet)
    for mask in range(1, 1 << len(letters)):
        atoms.append(StarSet(frozenset(x for k, x in enumerate(letters) if mask >> k & 1)))
    return sorted(atoms, key=lambda a: a.key())


def canonical_products(alphabet, max_len):
    """Canonical products of length ≤ ``max_len``, grouped by length.

    Prefixes of canonical products are canonical, so extending them one atom
    at a time reaches all of them.
    """
    atoms = all_atoms(alphabet)
    layers = [[EPSILON]]
    for _ in range(max_len):
        nxt = []
        for p in layers[-1]:
            for a in atoms:
                q = p + (a,)
                if is_canonical_product(q):
                    nxt.append(q)
        layers.append(nxt)
    return layers


def sres_of_size(products, size):
    """Canonical SREs of exactly ``size`` built from ``products``.

    ``products`` must be canonical products sorted by key.  Results come in
    lexicographic order of their product index sequences, so restricting
    ``products`` to a subfamily yields a subsequence of the unrestricted order.
    """
    if size == 0:
        yield Sre(())
        return
    products = [p for p in products if product_size(p) <= size]
    n = len(products)
    chosen = []

    def dfs(start, remaining):
        if remaining == 0:
            yield Sre(tuple(chosen))
            return
        for k in range(start, n):
            p = products[k]
            s = product_size(p)
            if s > remaining:
                continue
            if any(product_included(p, q) or product_included(q, p) for q in chosen):
                continue
            chosen.append(p)
            yield from dfs(k + 1, remaining - s)
            chosen.pop()

    yield from dfs(0, size)


def enumerate_sres(alphabet):
    """Fair stream of every canonical SRE over the alphabet, by nondecreasing size."""
    alphabet = make_alphabet(alphabet)
    if not alphabet:
        raise ValueError("SRE enumeration needs a nonempty alphabet")
    layers = [[EPSILON]]
    atoms = all_atoms(alphabet)
    for size in count():
        while len(layers) < size:
            layers.append(
                [p + (a,) for p in layers[-1] for a in atoms if is_canonical_product(p + (a,))]
            )
        pool = sorted((p for layer in layers[:size] for p in layer), key=product_key)
        yield from sres_of_size(pool, size)


# ---------------------------------------------------------------- block form

@dataclass(frozen=True)
class BlockForm:
    """``↓{w0} Y1* ↓{w1} ... Yn* ↓{wn}`` plus the words ``ui`` spelling each ``Yi``."""

    words: tuple
    sets: tuple
    blocks: tuple

    @property
    def n(self):
        return len(self.sets)


def product_block_form(p, alphabet=None):
    words, sets = [[]], []
    for a in p:
        if isinstance(a, OptLetter):
            words[-1].append(a.letter)
        else:
            sets.append(a.letters)
            words.append([])
    if alphabet is None:
        order = sorted
    else:
        rank = {x: i for i, x in enumerate(alphabet)}
        def order(ys):
            return sorted(ys, key=rank.__getitem__)
    blocks = tuple(tuple(order(ys)) for ys in sets)
    return BlockForm(tuple(tuple(w) for w in words), tuple(sets), blocks)


def block_form_nfa(b, alphabet):
    """Automaton built directly from a block form (independent of :func:`sre_to_nfa`)."""
    edges = []
    state = 0
    for i, w in enumerate(b.words):
        for x in w:
            edges.append((state, (x,), state + 1))
            edges.append((state, EPSILON, state + 1))
            state += 1
        if i < b.n:
            edges += [(state, (y,), state) for y in b.blocks[i]]
            edges.append((state, EPSILON, state + 1))
            state += 1
    return Nfa(alphabet, range(state + 1), edges, 0, {state})


# ---------------------------------------------------------------- automata

def sre_to_nfa(r, alphabet):
    alphabet = make_alphabet(alphabet)
    letters = set(alphabet)
    for x in r.letters():
        if x not in letters:
            raise UnknownLetter(x, alphabet)
    if not r.products:
        return empty_nfa(alphabet)
    states, edges, finals = {"init"}, [], set()
    for k, p in enumerate(r.products):
        q = (k, 0)
        states.add(q)
        edges.append(("init", EPSILON, q))
        for i, a in enumerate(p):
            nxt = (k, i + 1)
            states.add(nxt)
            if isinstance(a, OptLetter):
                edges += [(q, (a.letter,), nxt), (q, EPSILON, nxt)]
            else:
                edges += [(q, (y,), q) for y in sorted(a.letters)]
                edges.append((q, EPSILON, nxt))
            q = nxt
        finals.add(q)
    return relabel(Nfa(alphabet, states, edges, "init", finals))


# ---------------------------------------------------------------- text format

_ATOM = re.compile(r"\(([^()]*)\)\*|([^\s()|?*]+)\?|([^\s()|?*]+)\*")


def parse_sre(text):
    """Parse ``a? (a|b)* c? | d*``; ``_`` is the ε product, blank text is ∅."""
    text = "\n".join(line.split("#", 1)[0] for line in text.splitlines()).strip()
    if not text:
        return Sre(())
    products = []
    for chunk in _split_top(text):
        chunk = chunk.strip()
        if chunk == "_":
            products.append(EPSILON)
            continue
        if not chunk:
            raise ValueError("empty product; write '_' for the ε product")
        atoms = []
        for tok in chunk.split():
            m = _ATOM.fullmatch(tok)
            if m is None:
                raise ValueError(f"cannot read atom {tok!r}")
            if m.group(1) is not None:
                ys = [y.strip() for y in m.group(1).split("|")]
                if not all(ys):
                    raise ValueError(f"empty letter in {tok!r}")
                atoms.append(StarSet(frozenset(ys)))
            elif m.group(2) is not None:
                atoms.append(OptLetter(m.group(2)))
            else:
                atoms.append(StarSet(frozenset((m.group(3),))))
        products.append(tuple(atoms))
    return canonicalize(products)


def _split_top(text):
    """Split on ``|`` outside parentheses."""
    parts, depth, cur = [], 0, []
    for ch in text:
        if ch == "(":
            depth += 1
        elif ch == ")":
            depth -= 1
        if ch == "|" and depth == 0:
            parts.append("".join(cur))
            cur = []
        else:
            cur.append(ch)
    parts.append("".join(cur))
    return parts


def format_sre(r):
    return str(r) + "\n" if r.products else "\n"
