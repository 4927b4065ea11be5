"""Indexed grammars encoding instances of the Post correspondence problem.

For morphisms ``alpha, beta : X* -> {1,2}*`` the grammar generates
``{ a^nu(alpha(w)) b^nu(beta(w)) : w ∈ X+ }``, where ``nu`` reads a word over
``{1,2}`` in bijective base 2.  It meets ``{a^n b^n}`` exactly when the
instance has a solution.
"""
from .grammar import Fresh, IndexedGrammar, pop, push, rule

DIGITS = ("1", "2")


def nu(w):
    """Bijective base-2 value of a word over ``{"1", "2"}`` (last letter least significant)."""
    n = 0
    for d in w:
        if d not in DIGITS:
            raise ValueError(f"{d!r} is not a digit 1 or 2")
        n = 2 * n + int(d)
    return n


def _replace_top(lhs, f, target, word, fresh):
    """``lhs f -> target word``: pop ``f`` and push ``word`` (first letter on top).

    Uses the chain ``lhs f -> Z_n``, ``Z_i -> Z_{i-1} x_i``, ``Z_0 -> target``.
    """
    zs = [fresh("Z") for _ in range(len(word) + 1)]
    prods = [pop(lhs, f, (zs[-1],))]
    for i in range(len(word), 0, -1):
        prods.append(push(zs[i], zs[i - 1], word[i - 1]))
    prods.append(rule(zs[0], (target,)))
    return prods


def pcp_grammar(xs, alpha, beta):
    """Grammar for ``{ a^nu(alpha(w)) b^nu(beta(w)) : w ∈ X+ }``.

    ``xs`` is the alphabet ``X``; ``alpha`` and ``beta`` map each letter to
    a string (or tuple) over ``{"1", "2"}``.
    """
    xs = tuple(xs)
    if not xs:
        raise ValueError("the alphabet X must not be empty")
    if set(xs) & set(DIGITS):
        raise ValueError("X must be disjoint from {1, 2}")
    for name, m in (("alpha", alpha), ("beta", beta)):
        for x in xs:
            if x not in m:
                raise ValueError(f"{name} has no image for {x!r}")
            if any(d not in DIGITS for d in m[x]):
                raise ValueError(f"{name}({x}) is not a word over 1 and 2")
    base = {"S", "U", "A", "Abar", "B", "Bbar"}
    fresh = Fresh(base | set(xs) | set(DIGITS) | {"a", "b"})
    prods = [rule("U", ("A", "B"))]
    for x in xs:
        prods.append(push("S", "U", x))
        prods.append(push("U", "U", x))
    for c, m in (("A", alpha), ("Abar", alpha), ("B", beta), ("Bbar", beta)):
        for x in xs:
            prods += _replace_top(c, x, c, tuple(m[x]), fresh)
    for c, bar in (("A", "Abar"), ("B", "Bbar")):
        prods.append(pop(c, "1", (c, bar)))
        prods.append(pop(c, "2", (c, bar, bar)))
        for d in DIGITS:
            prods.append(pop(bar, d, (bar, bar)))
    prods += [rule("A", ()), rule("Abar", ("a",)), rule("B", ()), rule("Bbar", ("b",))]
    nonterminals = base | {p.lhs for p in prods}
    return IndexedGrammar(frozenset(nonterminals), ("a", "b"), xs + DIGITS, frozenset(prods), "S")
