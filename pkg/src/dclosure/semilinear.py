"""Multisets, linear and semilinear sets, and Parikh images.

Vectors are plain tuples of naturals aligned with an alphabet.  The
semilinear sets here form a commutative idempotent semiring (union as
addition, Minkowski sum as multiplication), which is what the Parikh image
computation for grammars iterates in.
"""
from dataclasses import dataclass
from functools import lru_cache
from itertools import product as cartesian

from .automata import make_alphabet, nfa_normalize


@dataclass(frozen=True)
class Multiset:
    alphabet: tuple
    counts: tuple

    def __getitem__(self, letter):
        return self.counts[self.alphabet.index(letter)]

    def as_dict(self):
        return dict(zip(self.alphabet, self.counts))

    def __str__(self):
        return _show_vec(self.alphabet, self.counts)


@dataclass(frozen=True)
class LinearSet:
    """``base + N·p1 + ... + N·pk``; periods never contain the zero vector."""

    base: tuple
    periods: frozenset = frozenset()

    def __post_init__(self):
        object.__setattr__(self, "base", tuple(self.base))
        object.__setattr__(
            self, "periods", frozenset(tuple(p) for p in self.periods if any(p))
        )

    def sort_key(self):
        return (self.base, tuple(sorted(self.periods)))


@dataclass(frozen=True)
class SemilinearSet:
    alphabet: tuple
    parts: frozenset = frozenset()

    def __post_init__(self):
        object.__setattr__(self, "alphabet", make_alphabet(self.alphabet))
        object.__setattr__(self, "parts", frozenset(self.parts))
        for part in self.parts:
            if len(part.base) != len(self.alphabet) or any(
                len(p) != len(self.alphabet) for p in part.periods
            ):
                raise ValueError("vector dimension does not match the alphabet")

    def sorted_parts(self):
        return sorted(self.parts, key=LinearSet.sort_key)

    def __str__(self):
        return format_semilinear(self)


def _show_vec(alphabet, v):
    return "{" + " ".join(f"{a}:{n}" for a, n in zip(alphabet, v)) + "}"


def format_semilinear(s):
    lines = []
    for part in s.sorted_parts():
        line = "base " + _show_vec(s.alphabet, part.base) + " periods"
        for p in sorted(part.periods):
            line += " " + _show_vec(s.alphabet, p)
        lines.append(line)
    return "\n".join(lines) + ("\n" if lines else "")


# ---------------------------------------------------------------- vectors

def zero(n):
    return (0,) * n


def unit(n, i):
    return tuple(1 if k == i else 0 for k in range(n))


def vadd(u, v):
    return tuple(a + b for a, b in zip(u, v))


def vsub(u, v):
    """``u - v`` or None when some coordinate would go negative."""
    d = tuple(a - b for a, b in zip(u, v))
    return None if min(d, default=0) < 0 else d


@lru_cache(maxsize=200_000)
def in_monoid(v, periods):
    """Is ``v`` a nonnegative integer combination of ``periods`` (a sorted tuple)?"""
    if not any(v):
        return True
    if not periods:
        return False
    p, rest = periods[0], periods[1:]
    w = v
    while w is not None:
        if in_monoid(w, rest):
            return True
        w = vsub(w, p)
    return False


def linear_contains(part, v):
    d = vsub(v, part.base)
    return d is not None and in_monoid(d, tuple(sorted(part.periods)))


# ---------------------------------------------------------------- semiring

def sls_empty(alphabet):
    return SemilinearSet(alphabet, ())


def sls_one(alphabet):
    return SemilinearSet(alphabet, (LinearSet(zero(len(alphabet))),))


def sls_letter(alphabet, letter):
    return SemilinearSet(alphabet, (LinearSet(unit(len(alphabet), alphabet.index(letter))),))


def sls_union(s, t):
    return SemilinearSet(s.alphabet, s.parts | t.parts)


def sls_sum(s, t):
    """Minkowski sum."""
    parts = {
        LinearSet(vadd(a.base, b.base), a.periods | b.periods)
        for a, b in cartesian(s.parts, t.parts)
    }
    return simplify(SemilinearSet(s.alphabet, parts))


def sls_star(s):
    """Submonoid generated by ``s``.

    ``(b + P*)* = {0} ∪ (b + ({b} ∪ P)*)`` and stars of unions multiply in a
    commutative setting.
    """
    result = sls_one(s.alphabet)
    for part in s.sorted_parts():
        closed = SemilinearSet(
            s.alphabet,
            (LinearSet(zero(len(s.alphabet))), LinearSet(part.base, part.periods | {part.base})),
        )
        result = sls_sum(result, closed)
    return result


def _reduce_periods(periods):
    """Drop periods generated by the others."""
    ps = sorted(periods, key=lambda p: (sum(p), p), reverse=True)
    kept = list(ps)
    for p in ps:
        others = tuple(sorted(q for q in kept if q != p))
        if in_monoid(p, others):
            kept.remove(p)
    return frozenset(kept)


def _linear_included(a, b):
    """Sufficient test for ``a ⊆ b``: base and all periods of ``a`` fit inside ``b``."""
    d = vsub(a.base, b.base)
    if d is None:
        return False
    gens = tuple(sorted(b.periods))
    return in_monoid(d, gens) and all(in_monoid(p, gens) for p in a.periods)


def _fold(parts):
    """Merge ``c + Q*`` into ``(c + p) + P*`` when ``p ∈ P`` and ``P ∖ {p} ⊆ Q ⊆ P``.

    The union is then exactly ``c + P*``.  Returns None when no pair folds.
    """
    for big in parts:
        for small in parts:
            if small is big or not small.periods <= big.periods:
                continue
            d = vsub(big.base, small.base)
            if d is not None and d in big.periods and big.periods - {d} <= small.periods:
                rest = [q for q in parts if q is not big and q is not small]
                return rest + [LinearSet(small.base, big.periods)]
    return None


def simplify(s):
    parts = list({LinearSet(p.base, _reduce_periods(p.periods)) for p in s.parts})
    while True:
        folded = _fold(parts)
        if folded is None:
            break
        parts = list(set(folded))
    ordered = sorted(parts, key=lambda p: (-len(p.periods), p.sort_key()))
    kept = []
    for p in ordered:
        if not any(_linear_included(p, q) for q in kept):
            kept = [q for q in kept if not _linear_included(q, p)]
            kept.append(p)
    return SemilinearSet(s.alphabet, kept)


# ---------------------------------------------------------------- operations

def parikh_word(w, alphabet):
    alphabet = make_alphabet(alphabet)
    return Multiset(alphabet, tuple(sum(1 for x in w if x == a) for a in alphabet))


def parikh_nfa(m):
    """Parikh image of an automaton, via its right-linear grammar."""
    from .cfg import cfg_parikh, nfa_to_cfg

    return cfg_parikh(nfa_to_cfg(nfa_normalize(m)))


def sls_contains(s, v, bound=None):
    """Membership of a vector (or :class:`Multiset`) in a semilinear set.

    ``bound`` caps the total coefficient size of the search; the default,
    ``‖v‖₁``, is always sufficient because periods are nonzero.
    """
    counts = v.counts if isinstance(v, Multiset) else tuple(v)
    if bound is not None and sum(counts) > bound:
        bound = sum(counts)
    return any(linear_contains(part, counts) for part in s.parts)


def sls_members(s, max_norm):
    """All vectors of the set with coordinate sum ≤ ``max_norm``."""
    found = set()
    for part in s.parts:
        if sum(part.base) > max_norm:
            continue
        # each part walks on its own: a vector another part already found
        # may still lead to new members of this one
        frontier = {part.base}
        seen = set(frontier)
        while frontier:
            nxt = set()
            for v in frontier:
                for p in part.periods:
                    w = vadd(v, p)
                    if sum(w) <= max_norm and w not in seen:
                        nxt.add(w)
            seen |= nxt
            frontier = nxt
        found |= seen
    return found


def sup_from_semilinear(s, letters):
    """Some linear part has, for every letter, a period that uses it."""
    index = [s.alphabet.index(a) for a in letters]
    return any(
        all(any(p[i] > 0 for p in part.periods) for i in index) for part in s.parts
    )


def parse_vector(text, alphabet):
    body = text.strip()
    if not (body.startswith("{") and body.endswith("}")):
        raise ValueError(f"expected {{...}}, got {text!r}")
    counts = dict.fromkeys(alphabet, 0)
    for item in body[1:-1].split():
        letter, _, n = item.partition(":")
        if letter not in counts:
            raise ValueError(f"unknown letter {letter!r}")
        counts[letter] = int(n)
    return tuple(counts[a] for a in alphabet)
