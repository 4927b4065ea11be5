"""Indexed grammars: nonterminals carry a stack of index symbols.

A production is one of

* ``A -> w`` with ``w`` a word over nonterminals and terminals,
* ``A -> B f`` (push ``f`` onto the index of ``B``),
* ``A f -> w`` (pop ``f`` and hand the rest of the index to every
  nonterminal of ``w``).

A production whose right-hand side is terminal-only (and which pops
nothing) applies only to a nonterminal whose index is empty.
"""
from dataclasses import dataclass, field
from functools import cached_property
from itertools import count

from ..automata import make_alphabet


@dataclass(frozen=True, order=True)
class Production:
    lhs: object
    rhs: tuple = ()
    pop: object = None
    push: object = None

    def __post_init__(self):
        object.__setattr__(self, "rhs", tuple(self.rhs))
        if self.push is not None:
            if self.pop is not None:
                raise ValueError("a production cannot both pop and push")
            if len(self.rhs) != 1:
                raise ValueError("a push production has exactly one right-hand nonterminal")

    @property
    def kind(self):
        if self.push is not None:
            return "push"
        if self.pop is not None:
            return "pop"
        return "plain"

    def sort_key(self):
        return repr((self.lhs, self.pop, self.push, self.rhs))


@dataclass(frozen=True)
class IndexedGrammar:
    nonterminals: frozenset
    terminals: tuple
    indices: tuple
    productions: frozenset
    start: object

    def __post_init__(self):
        object.__setattr__(self, "nonterminals", frozenset(self.nonterminals))
        object.__setattr__(self, "terminals", make_alphabet(self.terminals))
        object.__setattr__(self, "indices", make_alphabet(self.indices))
        object.__setattr__(self, "productions", frozenset(self.productions))
        n, t, i = self.nonterminals, set(self.terminals), set(self.indices)
        if n & t or n & i or t & i:
            raise ValueError("nonterminals, terminals and index symbols must be disjoint")
        if any(not isinstance(a, str) for a in self.terminals):
            raise ValueError("terminal letters must be strings")
        if self.start not in n:
            raise ValueError(f"start symbol {self.start!r} is not a nonterminal")
        for p in self.productions:
            if p.lhs not in n:
                raise ValueError(f"production head {p.lhs!r} is not a nonterminal")
            for x in p.rhs:
                if x not in n and x not in t:
                    raise ValueError(f"undeclared symbol {x!r} in {p}")
            if p.push is not None and p.rhs[0] not in n:
                raise ValueError(f"push production {p} must push onto a nonterminal")
            for f in (p.pop, p.push):
                if f is not None and f not in i:
                    raise ValueError(f"undeclared index symbol {f!r}")

    @cached_property
    def by_lhs(self):
        table = {a: [] for a in self.nonterminals}
        for p in sorted(self.productions, key=Production.sort_key):
            table[p.lhs].append(p)
        return table

    def is_terminal(self, x):
        return x not in self.nonterminals

    def terminal_word(self, rhs):
        return all(x not in self.nonterminals for x in rhs)

    def __repr__(self):
        return (
            f"IndexedGrammar(nonterminals={len(self.nonterminals)}, "
            f"terminals={self.terminals}, indices={len(self.indices)}, "
            f"productions={len(self.productions)})"
        )


@dataclass(frozen=True)
class IntervalGrammar:
    """An indexed grammar in normal form with an interval map ``ι``.

    ``iota[A] = (i, j)`` (1-based) promises that ``A`` only derives words in
    ``a_i* ... a_j*`` where ``letters`` lists ``a_1 ... a_n``.
    """

    grammar: IndexedGrammar
    iota: dict = field(hash=False, compare=False)
    letters: tuple = ()

    def __post_init__(self):
        if not self.letters:
            object.__setattr__(self, "letters", self.grammar.terminals)
        n = len(self.letters)
        for a in self.grammar.nonterminals:
            if a not in self.iota:
                raise ValueError(f"no interval for nonterminal {a!r}")
            i, j = self.iota[a]
            if not 1 <= i <= j <= n:
                raise ValueError(f"bad interval {(i, j)} for {a!r}")

    def is_unary(self, a):
        i, j = self.iota[a]
        return i == j


@dataclass(frozen=True)
class PartitionedGrammar:
    grammar: IntervalGrammar
    direct: frozenset = frozenset()

    def __post_init__(self):
        object.__setattr__(self, "direct", frozenset(self.direct))
        letters = self.grammar.letters
        for a in self.grammar.grammar.nonterminals:
            i, j = self.grammar.iota[a]
            if i == j and letters[i - 1] in self.direct:
                raise ValueError(f"unary nonterminal {a!r} for direct letter {letters[i - 1]}")


# ---------------------------------------------------------------- construction helpers

def push(lhs, target, f):
    return Production(lhs, (target,), push=f)


def pop(lhs, f, rhs):
    return Production(lhs, _word(rhs), pop=f)


def rule(lhs, rhs):
    return Production(lhs, _word(rhs))


def _word(rhs):
    if isinstance(rhs, str):
        return () if rhs.strip() in ("", "_") else tuple(rhs.split())
    return tuple(rhs)


def indexed_grammar(terminals, indices, productions, start, nonterminals=None):
    productions = list(productions)
    if nonterminals is None:
        nonterminals = {start} | {p.lhs for p in productions}
        for p in productions:
            nonterminals |= {x for x in p.rhs if x not in terminals}
    return IndexedGrammar(frozenset(nonterminals), tuple(terminals), tuple(indices),
                          frozenset(productions), start)


class Fresh:
    """Source of nonterminal names that avoid a set of taken names."""

    def __init__(self, taken, prefix="Z"):
        self.taken = set(taken)
        self.prefix = prefix
        self.counter = count(1)

    def __call__(self, hint=None):
        base = self.prefix if hint is None else hint
        while True:
            name = f"{base}{next(self.counter)}"
            if name not in self.taken:
                self.taken.add(name)
                return name


def example_grammar():
    """The grammar generating ``{ww : w ∈ {a,b}*}``."""
    return indexed_grammar(
        ("a", "b"),
        ("f", "g"),
        [
            push("S", "S", "f"),
            push("S", "S", "g"),
            rule("S", "U U"),
            rule("U", "_"),
            pop("U", "f", "A"),
            pop("U", "g", "B"),
            rule("A", "U a"),
            rule("B", "U b"),
        ],
        "S",
    )


# ---------------------------------------------------------------- structural passes

def relaxed_productive(g):
    """Nonterminals that derive a terminal word when index symbols are ignored.

    Every genuinely productive nonterminal is in this set, so removing the
    others never changes the language.
    """
    good = set()
    changed = True
    while changed:
        changed = False
        for p in g.productions:
            if p.lhs not in good and all(x in good or g.is_terminal(x) for x in p.rhs):
                good.add(p.lhs)
                changed = True
    return good


def prune(g):
    """Drop nonterminals that are unreachable or not even relaxed-productive."""
    good = relaxed_productive(g)
    prods = [p for p in g.productions
             if p.lhs in good and all(x in good or g.is_terminal(x) for x in p.rhs)]
    seen = {g.start}
    stack = [g.start]
    by_lhs = {}
    for p in prods:
        by_lhs.setdefault(p.lhs, []).append(p)
    while stack:
        a = stack.pop()
        for p in by_lhs.get(a, ()):
            for x in p.rhs:
                if x in good and x not in seen:
                    seen.add(x)
                    stack.append(x)
    prods = [p for p in prods if p.lhs in seen]
    return IndexedGrammar(seen, g.terminals, g.indices, prods, g.start)


def restrict_interval(ig, g):
    """Interval grammar over a pruned copy of ``ig``'s grammar."""
    return IntervalGrammar(g, {a: ig.iota[a] for a in g.nonterminals}, ig.letters)


def is_normal_form(g):
    for p in g.productions:
        nts = [x for x in p.rhs if x in g.nonterminals]
        if p.push is not None:
            continue
        if p.pop is not None:
            if len(p.rhs) != 1 or not nts:
                return False
        elif len(nts) == 2:
            if len(p.rhs) != 2:
                return False
        elif len(nts) > 2:
            return False
    return True
