"""Derivation semantics and bounded searches for indexed grammars.

A sentential form is a tuple whose items are terminal letters (strings) or
pairs ``(A, x)`` of a nonterminal and an index word (a tuple, top first).

The bounded searches work on *configurations* ``(A, x)``.  Since every
nonterminal of a sentential form derives independently, the words derivable
from a configuration satisfy a context-free system of equations over the
configurations it can reach.  The searches explore that system, pruning
configurations whose shortest possible yield is already too long, and then
solve it with the ordinary grammar machinery.
"""
from collections import deque

from ..automata import eps_closure, nfa_normalize, step, superwords_nfa
from ..cfg import Cfg, cfg_enumerate

INF = float("inf")


def _expand(g, p, y):
    """Replace ``p``'s right-hand side, handing index ``y`` to its nonterminals."""
    return tuple(x if g.is_terminal(x) else (x, y) for x in p.rhs)


def successors(g, a, x):
    """Right-hand sides (as sentential forms) reachable from ``(a, x)`` in one step."""
    out = []
    for p in g.by_lhs[a]:
        if p.push is not None:
            out.append(((p.rhs[0], (p.push,) + x),))
        elif p.pop is not None:
            if x and x[0] == p.pop:
                out.append(_expand(g, p, x[1:]))
        elif g.terminal_word(p.rhs):
            if not x:
                out.append(p.rhs)
        else:
            out.append(_expand(g, p, x))
    return out


def derive_step(g, sf):
    """All sentential forms reachable from ``sf`` by rewriting one nonterminal."""
    sf = tuple(sf)
    result = set()
    for k, item in enumerate(sf):
        if isinstance(item, str):
            continue
        a, x = item
        for rhs in successors(g, a, tuple(x)):
            result.add(sf[:k] + rhs + sf[k + 1:])
    return result


def start_form(g):
    return ((g.start, ()),)


def is_terminal_form(sf):
    return all(isinstance(item, str) for item in sf)


# ---------------------------------------------------------------- yield lower bounds

class YieldBound:
    """Lower bounds on the length of words derivable from ``(A, x)``.

    The bound depends only on ``A`` and ``|x|``: it is the shortest yield in
    the relaxation where any pop succeeds on a nonempty index.  Depths up to
    ``depth`` are tabulated; beyond that a constant per nonterminal is used.
    The constant is the least tabulated value over the last few depths (a
    window keeps bounds that alternate with the parity of the depth), taken
    only when the whole function passes the check in ``_sound``; otherwise
    deeper levels count as 0.

    With ``cap`` set, every bound saturates at ``cap``.  Callers that only
    compare bounds against a length below ``cap`` lose nothing, and bounds
    that grow quickly with the depth flatten out so a constant tail fits.
    """

    def __init__(self, g, depth, cap=None):
        self.g = g
        self.depth = depth
        self.cap = INF if cap is None else cap
        # per nonterminal: (shift, constant, children, needs) where ``shift``
        # is the depth change for the children and ``needs`` is "empty",
        # "nonempty" or None
        self.rules = {a: [] for a in g.nonterminals}
        self.users = {a: set() for a in g.nonterminals}
        for p in g.productions:
            kids = tuple(x for x in p.rhs if not g.is_terminal(x))
            const = len(p.rhs) - len(kids)
            if p.push is not None:
                row = (1, 0, kids, None)
            elif p.pop is not None:
                row = (-1, const, kids, "nonempty")
            elif not kids:
                row = (0, const, (), "empty")
            else:
                row = (0, const, kids, None)
            self.rules[p.lhs].append(row)
            for b in kids:
                self.users[b].add(p.lhs)
        clamped = self._solve(None)
        for window in (1, 2, 3, 4):
            lo = max(0, depth - window + 1)
            tail = {a: min(clamped[a][lo:depth + 1]) for a in g.nonterminals}
            self.table = self._solve(tail)
            if self._sound(tail):
                break
        else:
            tail = dict.fromkeys(g.nonterminals, 0)
            self.table = self._solve(tail)
        self.tail = tail

    def _best(self, a, d, look):
        best = INF
        for shift, const, kids, needs in self.rules[a]:
            if needs == "empty" and d:
                continue
            if needs == "nonempty" and not d:
                continue
            v = const
            for b in kids:
                v += look(b, d + shift)
                if v >= best:
                    break
            if v < best:
                best = v
        return min(best, self.cap)

    def _solve(self, tail):
        """Tabulate bounds up to ``depth``; deeper levels read ``tail``
        (or, with ``tail=None``, the value at ``depth`` itself)."""
        d_max = self.depth
        table = {a: [INF] * (d_max + 1) for a in self.g.nonterminals}

        def look(b, d):
            if d > d_max:
                return table[b][d_max] if tail is None else tail[b]
            return table[b][d]

        work = [(a, d) for a in sorted(self.g.nonterminals, key=repr) for d in range(d_max + 1)]
        queued = set(work)
        while work:
            a, d = work.pop()
            queued.discard((a, d))
            best = self._best(a, d, look)
            if best < table[a][d]:
                table[a][d] = best
                for c in self.users[a]:
                    for e in (d - 1, d, d + 1):
                        if 0 <= e <= d_max and (c, e) not in queued:
                            queued.add((c, e))
                            work.append((c, e))
        return table

    def _sound(self, tail):
        """Is the table extended by ``tail`` below its own one-step bound everywhere?

        A function ``b`` with ``b <= F(b)`` at every configuration is a lower
        bound on yields (induction on the height of derivation trees).  Past
        ``depth + 2`` every level looks the same as ``depth + 2``.
        """
        d_max = self.depth

        def look(b, d):
            return self.table[b][d] if d <= d_max else tail[b]

        # the table is a fixpoint up to ``depth`` by construction
        for a in self.g.nonterminals:
            for d in (d_max + 1, d_max + 2):
                if look(a, d) > self._best(a, d, look):
                    return False
        return True

    def __call__(self, a, d):
        return self.table[a][d] if d <= self.depth else self.tail[a]


# ---------------------------------------------------------------- bounded language

def _explore(g, roots, max_len, budget):
    """Reachable configurations whose yield bound fits within ``max_len``.

    Returns the configuration grammar (as a list of alternatives per
    configuration) and whether the exploration closed within ``budget``.
    """
    depth = 2 * max_len + 4
    lb = YieldBound(g, depth, cap=max_len + 1)
    alts = {}
    queue = deque(c for c in roots if lb(c[0], len(c[1])) <= max_len)
    seen = set(queue)
    closed = True
    while queue:
        a, x = queue.popleft()
        rows = []
        for rhs in successors(g, a, x):
            cost = sum(1 if isinstance(i, str) else lb(i[0], len(i[1])) for i in rhs)
            if cost > max_len:
                continue
            rows.append(rhs)
            for item in rhs:
                if not isinstance(item, str) and item not in seen:
                    if len(seen) >= budget:
                        closed = False
                        continue
                    seen.add(item)
                    queue.append(item)
        alts[(a, x)] = rows
    return alts, closed


def _config_cfg(g, alts, root):
    names = {c: ("cfg", k) for k, c in enumerate(sorted(alts, key=repr))}
    prods = set()
    for c, rows in alts.items():
        for rhs in rows:
            if all(isinstance(i, str) or i in names for i in rhs):
                prods.add((names[c], tuple(i if isinstance(i, str) else names[i] for i in rhs)))
    start = names.get(root, ("cfg", "root"))
    return Cfg(frozenset(names.values()) | {start}, g.terminals, frozenset(prods), start)


def derive_words(g, a, x=(), max_len=4, budget=20_000):
    """Words of length ≤ ``max_len`` derivable from ``(a, x)``, plus an exhaustive flag."""
    root = (a, tuple(x))
    alts, closed = _explore(g, [root], max_len, budget)
    if root not in alts:
        return set(), closed
    cg = _config_cfg(g, alts, root)
    return cfg_enumerate(cg, max_len, budget=10 ** 9), closed


def bounded_language(g, max_len, budget=20_000):
    """All words of ``L(g)`` with length ≤ ``max_len``.

    ``budget`` caps the number of configurations visited (breadth first, so
    shallow indices come first).  The flag is true when the search saw every
    configuration that can contribute, so the set is then exactly
    ``{w ∈ L(g) : |w| ≤ max_len}``; otherwise it is a subset.
    """
    return derive_words(g, g.start, (), max_len, budget)


# ---------------------------------------------------------------- index word membership

def index_word_member(g, a, x, r, budget=20_000):
    """Does ``(a, x)`` derive some word accepted by the automaton ``r``?

    Returns ``(answer, exhaustive)``.  The configurations reachable from
    ``(a, x)`` are explored breadth first up to a budget that grows tenfold
    from 100 to ``budget``; for each one the set of state pairs ``(p, q)`` of
    ``r`` connected by one of its derivable words is computed as a least
    fixpoint.  A positive answer is always sound, a negative one only when
    ``exhaustive`` is true.
    """
    r = nfa_normalize(r)
    size = min(100, budget)
    while True:
        hit, closed = _member_within(g, (a, tuple(x)), r, size)
        if hit or closed or size >= budget:
            return hit, closed or hit
        size = min(size * 10, budget)


def _member_within(g, root, r, budget):
    seen = {root}
    queue = deque([root])
    alts = {}
    closed = True
    while queue:
        c = queue.popleft()
        rows = successors(g, *c)
        alts[c] = rows
        for rhs in rows:
            for item in rhs:
                if not isinstance(item, str) and item not in seen:
                    if len(seen) >= budget:
                        closed = False
                        continue
                    seen.add(item)
                    queue.append(item)
    states = sorted(r.states, key=repr)
    closure = {p: frozenset(eps_closure(r, {p})) for p in states}
    ident = frozenset((p, q) for p in states for q in closure[p])
    letter_rel = {}

    def letter(t):
        if t not in letter_rel:
            pairs = set()
            for p in states:
                for q in step(r, closure[p], t):
                    pairs |= {(p, s) for s in closure[q]}
            letter_rel[t] = frozenset(pairs)
        return letter_rel[t]

    def compose(u, v):
        after = {}
        for p, q in v:
            after.setdefault(p, set()).add(q)
        return frozenset((p, s) for p, q in u for s in after.get(q, ()))

    rel = {c: frozenset() for c in alts}
    changed = True
    while changed:
        changed = False
        for c, rows in alts.items():
            acc = set(rel[c])
            for rhs in rows:
                cur = ident
                for item in rhs:
                    if isinstance(item, str):
                        cur = compose(cur, letter(item))
                    else:
                        cur = compose(cur, rel.get(item, frozenset()))
                    if not cur:
                        break
                acc |= cur
            if len(acc) > len(rel[c]):
                rel[c] = frozenset(acc)
                changed = True
    start = r.initial
    hit = any((start, f) in rel[root] for f in r.finals)
    return hit, closed


def downward_member(g, w, budget=20_000):
    """Is ``w`` a subword of some word of ``L(g)``?  Returns ``(answer, exhaustive)``."""
    return index_word_member(g, g.start, (), superwords_nfa(g.terminals, w), budget)
