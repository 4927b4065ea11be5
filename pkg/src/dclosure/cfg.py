"""Context-free grammars as a full trio: emptiness, transductions, Parikh images."""
from collections import defaultdict, deque
from dataclasses import dataclass
from functools import cached_property
from itertools import count, product as cartesian

from .automata import make_alphabet
from .errors import AlphabetMismatch, BudgetExhausted, UnknownLetter
from .semilinear import (
    LinearSet,
    SemilinearSet,
    simplify,
    sls_empty,
    sls_one,
    sls_star,
    sls_sum,
    sls_union,
)
from .transducers import split_reads
from .words import EPSILON


@dataclass(frozen=True)
class Cfg:
    nonterminals: frozenset
    terminals: tuple
    productions: frozenset  # of (lhs, rhs tuple)
    start: object

    def __post_init__(self):
        object.__setattr__(self, "terminals", make_alphabet(self.terminals))
        object.__setattr__(self, "nonterminals", frozenset(self.nonterminals))
        object.__setattr__(
            self, "productions", frozenset((a, tuple(rhs)) for a, rhs in self.productions)
        )
        if self.start not in self.nonterminals:
            raise ValueError(f"start symbol {self.start!r} is not a nonterminal")
        clash = self.nonterminals & set(self.terminals)
        if clash:
            raise ValueError(f"symbols used as both terminal and nonterminal: {sorted(clash)}")
        letters = set(self.terminals)
        for a, rhs in self.productions:
            if a not in self.nonterminals:
                raise ValueError(f"production head {a!r} is not a nonterminal")
            for x in rhs:
                if x not in self.nonterminals and x not in letters:
                    raise UnknownLetter(x, self.terminals)

    @cached_property
    def rules(self):
        """Productions grouped by head, each list sorted for determinism."""
        by_head = {a: [] for a in self.nonterminals}
        for a, rhs in sorted(self.productions, key=repr):
            by_head[a].append(rhs)
        return by_head

    def is_terminal(self, x):
        return x not in self.nonterminals

    def __repr__(self):
        return (
            f"Cfg(terminals={self.terminals}, nonterminals={len(self.nonterminals)}, "
            f"productions={len(self.productions)})"
        )


def cfg(terminals, productions, start, nonterminals=None):
    """Convenience constructor.  Right-hand sides may be space-separated strings."""
    prods = []
    for a, rhs in productions:
        if isinstance(rhs, str):
            rhs = () if rhs.strip() in ("", "_") else tuple(rhs.split())
        prods.append((a, tuple(rhs)))
    if nonterminals is None:
        nonterminals = {start} | {a for a, _ in prods}
    return Cfg(frozenset(nonterminals), tuple(terminals), frozenset(prods), start)


def empty_cfg(terminals):
    return Cfg(frozenset({"S"}), tuple(terminals), frozenset(), "S")


# ---------------------------------------------------------------- basic analyses

def productive(g):
    """Nonterminals that derive at least one terminal word."""
    good = set()
    changed = True
    while changed:
        changed = False
        for a, rhs in g.productions:
            if a not in good and all(x in good or g.is_terminal(x) for x in rhs):
                good.add(a)
                changed = True
    return good


def cfg_is_empty(g):
    return g.start not in productive(g)


def reachable(g):
    seen = {g.start}
    stack = [g.start]
    while stack:
        a = stack.pop()
        for rhs in g.rules[a]:
            for x in rhs:
                if x in g.nonterminals and x not in seen:
                    seen.add(x)
                    stack.append(x)
    return seen


def cfg_trim(g):
    """Remove nonproductive and unreachable nonterminals."""
    good = productive(g)
    prods = [(a, r) for a, r in g.productions if a in good and all(
        x in good or g.is_terminal(x) for x in r)]
    h = Cfg(good | {g.start}, g.terminals, prods, g.start)
    keep = reachable(h)
    return Cfg(keep, g.terminals, [(a, r) for a, r in prods if a in keep], g.start)


def _users(prods, g):
    """Map each nonterminal to the indices of productions whose body mentions it."""
    users = defaultdict(set)
    for k, (_, rhs) in enumerate(prods):
        for x in rhs:
            if not g.is_terminal(x):
                users[x].add(k)
    return users


def min_lengths(g):
    """Length of a shortest terminal word for each productive nonterminal."""
    prods = sorted(g.productions, key=repr)
    users = _users(prods, g)
    best = {}
    queue = deque(range(len(prods)))
    queued = set(queue)
    while queue:
        k = queue.popleft()
        queued.discard(k)
        a, rhs = prods[k]
        total = 0
        for x in rhs:
            if g.is_terminal(x):
                total += 1
            elif x in best:
                total += best[x]
            else:
                break
        else:
            if total < best.get(a, float("inf")):
                best[a] = total
                for j in users[a] - queued:
                    queued.add(j)
                    queue.append(j)
    return best


def cfg_enumerate(g, max_len, budget=2_000_000):
    """Exactly the words of length ≤ ``max_len``.

    Computes the least fixpoint of the grammar's equations over sets of short
    words, re-evaluating a production only when one of its nonterminals
    gained words.  ``budget`` bounds the number of partial concatenations
    examined.
    """
    lo = min_lengths(g)
    if g.start not in lo:
        return set()
    words = defaultdict(set)
    work = [0]

    def expand(rhs):
        partial = {EPSILON}
        rest_min = [0] * (len(rhs) + 1)
        for i in range(len(rhs) - 1, -1, -1):
            x = rhs[i]
            rest_min[i] = rest_min[i + 1] + (1 if g.is_terminal(x) else lo[x])
        if rest_min[0] > max_len:
            return set()
        for i, x in enumerate(rhs):
            options = [(x,)] if g.is_terminal(x) else words[x]
            nxt = set()
            limit = max_len - rest_min[i + 1]
            for u in partial:
                for v in options:
                    work[0] += 1
                    if len(u) + len(v) <= limit:
                        nxt.add(u + v)
            if work[0] > budget:
                raise BudgetExhausted(budget, "enumeration steps")
            partial = nxt
            if not partial:
                break
        return partial

    usable = [(a, r) for a, r in sorted(g.productions, key=repr)
              if a in lo and all(g.is_terminal(x) or x in lo for x in r)]
    users = _users(usable, g)
    queue = deque(range(len(usable)))
    queued = set(queue)
    while queue:
        k = queue.popleft()
        queued.discard(k)
        a, rhs = usable[k]
        new = expand(rhs) - words[a]
        if new:
            words[a] |= new
            for j in users[a] - queued:
                queued.add(j)
                queue.append(j)
    return set(words[g.start])


def nfa_to_cfg(m):
    """Right-linear grammar for an automaton's language."""
    nt = {q: ("q", q) for q in m.states}
    prods = [(nt[p], tuple(w) + (nt[q],)) for p, w, q in m.edges]
    prods += [(nt[q], ()) for q in m.finals]
    return Cfg(frozenset(nt.values()), m.alphabet, prods, nt[m.initial])


def binarize(g):
    """Right-hand sides of length at most two, with fresh chain nonterminals."""
    fresh = count()
    taken = set(g.nonterminals)
    nts = set(g.nonterminals)
    prods = []
    for a, rhs in sorted(g.productions, key=repr):
        head = a
        while len(rhs) > 2:
            while True:
                x = ("bin", next(fresh))
                if x not in taken:
                    break
            taken.add(x)
            nts.add(x)
            prods.append((head, (rhs[0], x)))
            head, rhs = x, rhs[1:]
        prods.append((head, rhs))
    return Cfg(nts, g.terminals, prods, g.start)


# ---------------------------------------------------------------- transductions

def cfg_apply_transduction(g, t):
    """Grammar for ``T(L(g))`` by annotating symbols with transducer state pairs.

    The transducer only needs edges that read at most one letter; outputs may
    be whole words.  Nonterminal ``("T", p, A, q)`` derives the outputs of runs from ``p`` to
    ``q`` reading a word derived from ``A``; ``("W", p, q)`` derives the
    outputs of read-free runs.  Only productive, reachable triples are built.
    """
    if set(g.terminals) != set(t.input_alphabet):
        raise AlphabetMismatch(g.terminals, t.input_alphabet, "grammar and transducer input")
    t = split_reads(t)
    g = binarize(cfg_trim(g))
    out_alpha = t.output_alphabet
    states = sorted(t.states, key=repr)

    writes = defaultdict(list)  # p -> [(output word, p')]
    reads = defaultdict(list)  # (p, a) -> [(output word, p')]
    for p, u, v, q in sorted(t.edges, key=repr):
        if u:
            reads[(p, u[0])].append((v, q))
        else:
            writes[p].append((v, q))

    # read-free reachability
    wreach = {}
    for p in states:
        seen = {p}
        stack = [p]
        while stack:
            x = stack.pop()
            for _, y in writes[x]:
                if y not in seen:
                    seen.add(y)
                    stack.append(y)
        wreach[p] = seen

    # terminal pieces: (p, a, q) iff p ~w~> p1 -a-> p2 ~w~> q
    term = defaultdict(set)  # (p, a) -> {q}
    for p in states:
        for p1 in wreach[p]:
            for a in g.terminals:
                for _, p2 in reads[(p1, a)]:
                    term[(p, a)] |= wreach[p2]

    # productive triples, bottom-up
    prod_by_first = defaultdict(list)  # symbol -> productions where it is rhs[0]
    prod_by_second = defaultdict(list)
    for a, rhs in g.productions:
        if rhs:
            prod_by_first[rhs[0]].append((a, rhs))
        if len(rhs) == 2:
            prod_by_second[rhs[1]].append((a, rhs))

    right = defaultdict(set)  # (p, X) -> {q} with triple (p, X, q) productive
    left = defaultdict(set)  # (X, q) -> {p}
    queue = deque()

    def add(p, x, q):
        if q not in right[(p, x)]:
            right[(p, x)].add(q)
            left[(x, q)].add(p)
            queue.append((p, x, q))

    for (p, a), qs in list(term.items()):
        for q in qs:
            add(p, a, q)
    for a, rhs in g.productions:
        if not rhs:
            for p in states:
                for q in wreach[p]:
                    add(p, a, q)
    while queue:
        p, x, q = queue.popleft()
        for a, rhs in prod_by_first[x]:
            if len(rhs) == 1:
                add(p, a, q)
            else:
                for r in list(right[(q, rhs[1])]):
                    add(p, a, r)
        for a, rhs in prod_by_second[x]:
            for r in list(left[(rhs[0], p)]):
                add(r, a, q)

    finals = sorted(t.finals, key=repr)
    start = ("start",)
    prods = set()
    nts = {start}
    todo = deque()
    seen = set()

    def T(p, x, q):
        node = ("T", p, x, q)
        if node not in seen:
            seen.add(node)
            todo.append((p, x, q))
        return node

    for f in finals:
        if f in right[(t.initial, g.start)]:
            prods.add((start, (T(t.initial, g.start, f),)))
    wseen = set()
    wtodo = deque()

    def W(p, q):
        node = ("W", p, q)
        if node not in wseen:
            wseen.add(node)
            wtodo.append((p, q))
        return node

    while todo:
        p, x, q = todo.popleft()
        node = ("T", p, x, q)
        if g.is_terminal(x):
            for p1 in wreach[p]:
                for v, p2 in reads[(p1, x)]:
                    if q in wreach[p2]:
                        prods.add((node, (W(p, p1),) + tuple(v) + (W(p2, q),)))
            continue
        for rhs in g.rules[x]:
            if not rhs:
                prods.add((node, (W(p, q),)))
            elif len(rhs) == 1:
                if q in right[(p, rhs[0])]:
                    prods.add((node, (T(p, rhs[0], q),)))
            else:
                for r in sorted(right[(p, rhs[0])], key=repr):
                    if q in right[(r, rhs[1])]:
                        prods.add((node, (T(p, rhs[0], r), T(r, rhs[1], q))))
    while wtodo:
        p, q = wtodo.popleft()
        node = ("W", p, q)
        if p == q:
            prods.add((node, ()))
        for v, p2 in writes[p]:
            if q in wreach[p2]:
                prods.add((node, tuple(v) + (W(p2, q),)))
    nts |= seen | wseen
    return cfg_trim(Cfg(nts, out_alpha, prods, start))


# ---------------------------------------------------------------- Parikh image

def _sccs(nodes, succ):
    """Strongly connected components, dependencies first (Tarjan, iterative)."""
    index, low, onstack = {}, {}, set()
    stack, result = [], []
    counter = count()
    for root in nodes:
        if root in index:
            continue
        work = [(root, iter(succ[root]))]
        index[root] = low[root] = next(counter)
        stack.append(root)
        onstack.add(root)
        while work:
            v, it = work[-1]
            for w in it:
                if w not in index:
                    index[w] = low[w] = next(counter)
                    stack.append(w)
                    onstack.add(w)
                    work.append((w, iter(succ[w])))
                    break
                if w in onstack:
                    low[v] = min(low[v], index[w])
            else:
                work.pop()
                if work:
                    low[work[-1][0]] = min(low[work[-1][0]], low[v])
                if low[v] == index[v]:
                    comp = []
                    while True:
                        w = stack.pop()
                        onstack.discard(w)
                        comp.append(w)
                        if w == v:
                            break
                    result.append(comp)
    return result


def _mul(s, t):
    if s is None or t is None:
        return None
    return sls_sum(s, t)


def _add(s, t):
    if s is None:
        return t
    if t is None:
        return s
    return simplify(sls_union(s, t))


def _matrix_star(m, n, alphabet):
    """Kleene closure of an n×n matrix over semilinear sets (None = ∅)."""
    a = [row[:] for row in m]
    for k in range(n):
        if a[k][k] is None:
            loop = sls_one(alphabet)
        else:
            loop = sls_star(a[k][k])
        for i in range(n):
            if a[i][k] is None:
                continue
            left = _mul(a[i][k], loop)
            for j in range(n):
                if a[k][j] is not None:
                    a[i][j] = _add(a[i][j], _mul(left, a[k][j]))
    one = sls_one(alphabet)
    for i in range(n):
        a[i][i] = _add(a[i][i], one)
    return a


def _commutative_system(g):
    """Productions as ``head -> {(letter counts, sorted nonterminal tuple)}``.

    Order inside right-hand sides is irrelevant for Parikh images, so equal
    multisets collapse.  Nonterminals (other than the start) with a single,
    non-recursive production are then substituted away.
    """
    index = {a: i for i, a in enumerate(g.terminals)}
    system = defaultdict(set)
    for a, rhs in g.productions:
        vec = [0] * len(index)
        nts = []
        for x in rhs:
            if x in index:
                vec[index[x]] += 1
            else:
                nts.append(x)
        system[a].add((tuple(vec), tuple(sorted(nts, key=repr))))
    for a in g.nonterminals:
        system.setdefault(a, set())
    users = defaultdict(set)
    for a, rules in system.items():
        for _, nts in rules:
            for x in nts:
                users[x].add(a)
    pending = sorted(system, key=repr)
    while pending:
        b = pending.pop()
        if b == g.start or b not in system or len(system[b]) != 1:
            continue
        (bvec, bnts), = system[b]
        if b in bnts:
            continue
        for a in sorted(users.pop(b, ()), key=repr):
            if a not in system:
                continue
            rules = set()
            for vec, nts in system[a]:
                k = nts.count(b)
                if k:
                    vec = tuple(v + k * w for v, w in zip(vec, bvec))
                    nts = tuple(sorted([x for x in nts if x != b] + list(bnts) * k, key=repr))
                rules.add((vec, nts))
            system[a] = rules
            for x in bnts:
                users[x].add(a)
            pending.append(a)
        del system[b]
        for x in bnts:
            users[x].discard(b)
    return system


def cfg_parikh(g):
    """Parikh image of ``L(g)`` as a semilinear set.

    Nonterminals are solved one strongly connected component at a time.
    Inside a component, Newton iteration in the semiring of semilinear sets
    reaches the least solution after at most as many rounds as the component
    has nonterminals (one round when the component is linear).
    """
    alphabet = g.terminals
    g = cfg_trim(g)
    if cfg_is_empty(g):
        return sls_empty(alphabet)
    system = _commutative_system(g)
    succ = {a: sorted({x for _, nts in rules for x in nts}, key=repr)
            for a, rules in system.items()}
    value = {}
    for comp in _sccs(sorted(system, key=repr), succ):
        pos = {a: i for i, a in enumerate(comp)}
        n = len(comp)
        # monomials: (constant, [component variables])
        monos = [[] for _ in comp]
        linear = True
        for a in comp:
            for vec, nts in sorted(system[a], key=repr):
                const = SemilinearSet(alphabet, (LinearSet(vec),))
                vars_ = []
                for x in nts:
                    if x in pos:
                        vars_.append(pos[x])
                    else:
                        const = sls_sum(const, value[x])
                if len(vars_) > 1:
                    linear = False
                if const.parts:
                    monos[pos[a]].append((const, vars_))

        def evaluate(nu):
            out = []
            for i in range(n):
                acc = None
                for const, vars_ in monos[i]:
                    term = const
                    for v in vars_:
                        term = _mul(term, nu[v])
                    acc = _add(acc, term)
                out.append(acc)
            return out

        def jacobian(nu):
            jac = [[None] * n for _ in range(n)]
            for i in range(n):
                for const, vars_ in monos[i]:
                    for k, y in enumerate(vars_):
                        term = const
                        for k2, v in enumerate(vars_):
                            if k2 != k:
                                term = _mul(term, nu[v])
                        jac[i][y] = _add(jac[i][y], term)
            return jac

        nu = evaluate([None] * n)
        for _ in range(1 if linear else n):
            fnu = evaluate(nu)
            star = _matrix_star(jacobian(nu), n, alphabet)
            new = []
            for i in range(n):
                acc = nu[i]
                for j in range(n):
                    acc = _add(acc, _mul(star[i][j], fnu[j]))
                new.append(acc)
            if new == nu:
                break
            nu = new
        for a in comp:
            value[a] = nu[pos[a]] if nu[pos[a]] is not None else sls_empty(alphabet)
    return simplify(value[g.start])


# ---------------------------------------------------------------- alphabet sets

def alph_sets_all(g):
    """``{ alph(w) : A ⇒* w }`` for every nonterminal ``A``, as one least fixpoint."""
    sets = defaultdict(set)
    changed = True
    prods = sorted(g.productions, key=repr)
    while changed:
        changed = False
        for a, rhs in prods:
            options = []
            for x in rhs:
                if g.is_terminal(x):
                    options.append([frozenset((x,))])
                else:
                    options.append(list(sets[x]))
            for combo in cartesian(*options):
                s = frozenset().union(*combo)
                if s not in sets[a]:
                    sets[a].add(s)
                    changed = True
    return {a: set(sets[a]) for a in g.nonterminals}


def _add_minimal(family, s):
    """Insert ``s`` into an antichain of sets; True if the antichain changed."""
    if any(t <= s for t in family):
        return False
    family -= {t for t in family if s <= t}
    family.add(s)
    return True


def minimal_alph_sets_all(g):
    """The ⊆-minimal members of :func:`alph_sets_all`, per nonterminal.

    The minimal alphabets of a concatenation are unions of minimal
    alphabets of the parts, so the fixpoint can work on antichains.
    """
    sets = defaultdict(set)
    changed = True
    prods = sorted(g.productions, key=repr)
    while changed:
        changed = False
        for a, rhs in prods:
            options = []
            for x in rhs:
                if g.is_terminal(x):
                    options.append([frozenset((x,))])
                else:
                    options.append(list(sets[x]))
            for combo in cartesian(*options):
                if _add_minimal(sets[a], frozenset().union(*combo)):
                    changed = True
    return {a: set(sets[a]) for a in g.nonterminals}


def alph_sets_cfg(g):
    """``{ alph(w) : w ∈ L(g) }``."""
    return alph_sets_all(g)[g.start]


def alph_sets_by_emptiness(g):
    """Same as :func:`alph_sets_cfg`, one emptiness check per candidate subset.

    For each ``X ⊆ T`` the grammar is intersected with the regular language
    of words using only letters of ``X`` and every one of them.  Exponential
    in ``|T|``; kept as an independent route for testing.
    """
    from .automata import nfa
    from .transducers import regular_intersection_transduction

    letters = g.terminals
    found = set()
    for mask in range(1 << len(letters)):
        xs = [a for k, a in enumerate(letters) if mask >> k & 1]
        # states: subsets of xs seen so far, encoded as bitmasks
        edges = []
        for seen in range(1 << len(xs)):
            for k, a in enumerate(xs):
                edges.append((seen, a, seen | 1 << k))
        m = nfa(letters, edges, 0, {(1 << len(xs)) - 1}, states=range(1 << len(xs)))
        if not cfg_is_empty(cfg_apply_transduction(g, regular_intersection_transduction(m))):
            found.add(frozenset(xs))
    return found
