"""Normal form: push, pop, output, split and terminal productions.

* push      ``A -> B f``
* pop       ``A f -> B``
* output    ``A -> u B v`` with ``u, v`` terminal words
* split     ``A -> B C``
* terminal  ``A -> w`` with ``w`` a terminal word
"""
from .grammar import Fresh, IndexedGrammar, Production, pop, rule


def production_form(g, p):
    """Name of the normal-form shape of ``p``, or None."""
    if p.push is not None:
        return "push"
    nts = [x for x in p.rhs if x in g.nonterminals]
    if p.pop is not None:
        return "pop" if len(p.rhs) == 1 and nts else None
    if not nts:
        return "terminal"
    if len(nts) == 1:
        return "output"
    if len(nts) == 2 and len(p.rhs) == 2:
        return "split"
    return None


def split_output(g, p):
    """``(u, B, v)`` for an output production."""
    for k, x in enumerate(p.rhs):
        if x in g.nonterminals:
            return p.rhs[:k], x, p.rhs[k + 1:]
    raise ValueError(f"{p} is not an output production")


def escape(g, fresh, word, prods, hint="E"):
    """A fresh nonterminal deriving exactly ``word`` under any index.

    It pops every index symbol (``E f -> E``) and emits ``word`` once the
    index is empty.
    """
    e = fresh(hint)
    for f in g.indices:
        prods.append(pop(e, f, (e,)))
    prods.append(rule(e, tuple(word)))
    return e


def _binarize(g, fresh, lhs, rhs, out):
    """Productions for ``lhs -> rhs`` (a word with ≥ 2 nonterminals), all in normal form."""
    pieces = []
    for x in rhs:
        if x in g.nonterminals:
            pieces.append([x])
        elif pieces:
            pieces[-1].append(x)
        else:
            pieces.append([x])
    # fold a leading terminal prefix into the first nonterminal piece
    if pieces[0][0] not in g.nonterminals:
        head = pieces.pop(0)
        pieces[0] = head + pieces[0]
    symbols = []
    for piece in pieces:
        if len(piece) == 1:
            symbols.append(piece[0])
        else:
            y = fresh("Y")
            out.append(rule(y, tuple(piece)))
            symbols.append(y)
    cur = lhs
    while len(symbols) > 2:
        x = fresh("X")
        out.append(rule(cur, (symbols[0], x)))
        cur, symbols = x, symbols[1:]
    out.append(rule(cur, tuple(symbols)))


def normalize(g):
    """An equivalent grammar whose productions all have a normal-form shape."""
    fresh = Fresh(g.nonterminals | set(g.terminals) | set(g.indices))
    prods = []
    for p in sorted(g.productions, key=Production.sort_key):
        form = production_form(g, p)
        if form is not None:
            prods.append(p)
            continue
        nts = [x for x in p.rhs if x in g.nonterminals]
        if p.pop is not None:
            if not nts:
                # Af -> w with w terminal discards the rest of the index
                e = escape(g, fresh, p.rhs, prods)
                prods.append(pop(p.lhs, p.pop, (e,)))
                continue
            z = fresh("Z")
            prods.append(pop(p.lhs, p.pop, (z,)))
            if len(nts) == 1 or (len(nts) == 2 and len(p.rhs) == 2):
                prods.append(rule(z, p.rhs))
            else:
                _binarize(g, fresh, z, p.rhs, prods)
            continue
        _binarize(g, fresh, p.lhs, p.rhs, prods)
    nonterminals = set(g.nonterminals)
    for p in prods:
        nonterminals.add(p.lhs)
    return IndexedGrammar(frozenset(nonterminals), g.terminals, g.indices, frozenset(prods), g.start)


def is_normal(g):
    return all(production_form(g, p) is not None for p in g.productions)
