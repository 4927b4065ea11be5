"""Text formats for automata, transducers and grammars.

Every format is line based: one declaration per line, ``#`` starts a
comment, ``_`` stands for the empty word.  Words on automaton and
transducer edges are single tokens whose letters are separated by commas
(``a,b`` is the two-letter word ``ab``).

Internal names (states or nonterminals built by a construction) may be
tuples; writers render them as bracketed tokens such as ``[0,S,1]`` and
make sure no two names collide.
"""
from .automata import Nfa
from .cfg import Cfg
from .errors import ParseError
from .indexed.grammar import IndexedGrammar, IntervalGrammar, PartitionedGrammar, Production
from .transducers import Transducer

EMPTY = "_"
SEPARATOR = "---"


# ---------------------------------------------------------------- helpers

def _lines(text):
    """``(line number, content)`` pairs with comments and blank lines removed."""
    for n, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if line:
            yield n, line


def _key_value(line):
    """Split ``key: rest``; returns ``(None, line)`` when there is no key."""
    head, sep, rest = line.partition(":")
    if sep and head.strip().isidentifier() and "->" not in head:
        return head.strip(), rest.split()
    return None, line


def _word_token(token):
    if token == EMPTY:
        return ()
    return tuple(token.split(","))


def _show_word(w, name=str):
    return ",".join(name(x) for x in w) if w else EMPTY


class Namer:
    """Stable textual names for arbitrary hashable symbols."""

    def __init__(self, symbols):
        self.names = {}
        used = set()
        for s in sorted(symbols, key=lambda s: (not isinstance(s, str), repr(s))):
            base = _render(s)
            name, k = base, 1
            while name in used:
                k += 1
                name = f"{base}'{k}"
            used.add(name)
            self.names[s] = name

    def __call__(self, s):
        return self.names[s]


def _render(s):
    if isinstance(s, str):
        return s.replace(" ", "_") or EMPTY
    if isinstance(s, (tuple, list, frozenset, set)):
        items = sorted(s, key=repr) if isinstance(s, (frozenset, set)) else s
        return "[" + ",".join(_render(x) for x in items) + "]"
    return str(s)


def _check_letters(path, n, letters, alphabet, what="letter"):
    for x in letters:
        if x not in alphabet:
            raise ParseError(path, n, f"unknown {what} {x!r}")


# ---------------------------------------------------------------- automata

def parse_nfa(text, path="<nfa>"):
    alphabet, states, edges = None, {}, []
    initial, finals = None, set()
    for n, line in _lines(text):
        key, rest = _key_value(line)
        if key == "alphabet":
            alphabet = tuple(rest)
        elif key == "state":
            if not rest:
                raise ParseError(path, n, "state declaration without a name")
            name, flags = rest[0], rest[1:]
            states[name] = n
            for flag in flags:
                if flag == "initial":
                    if initial is not None and initial != name:
                        raise ParseError(path, n, f"second initial state {name!r}")
                    initial = name
                elif flag == "final":
                    finals.add(name)
                else:
                    raise ParseError(path, n, f"unknown state flag {flag!r}")
        elif key == "edge":
            if len(rest) != 3:
                raise ParseError(path, n, "expected 'edge: source word target'")
            edges.append((n, rest[0], _word_token(rest[1]), rest[2]))
        else:
            raise ParseError(path, n, f"unexpected line {line!r}")
    if alphabet is None:
        raise ParseError(path, 0, "missing 'alphabet:' declaration")
    if initial is None:
        raise ParseError(path, 0, "no initial state")
    for n, p, w, q in edges:
        for s in (p, q):
            if s not in states:
                raise ParseError(path, n, f"undeclared state {s!r}")
        _check_letters(path, n, w, alphabet)
    return Nfa(alphabet, states, [(p, w, q) for _, p, w, q in edges], initial, finals)


def format_nfa(m):
    name = Namer(m.states)
    out = ["alphabet: " + " ".join(m.alphabet)]
    for s in sorted(m.states, key=name):
        flags = [f for f, on in (("initial", s == m.initial), ("final", s in m.finals)) if on]
        out.append(" ".join(["state:", name(s), *flags]))
    for p, w, q in sorted(m.edges, key=lambda e: (name(e[0]), e[1], name(e[2]))):
        out.append(f"edge: {name(p)} {_show_word(w)} {name(q)}")
    return "\n".join(out) + "\n"


def nfa_to_dot(m, title="nfa"):
    """Graphviz rendering with states and edges in sorted order."""
    name = Namer(m.states)
    out = [f'digraph "{title}" {{', "  rankdir=LR;", '  start [shape=point];']
    for s in sorted(m.states, key=name):
        shape = "doublecircle" if s in m.finals else "circle"
        out.append(f'  "{name(s)}" [shape={shape}];')
    out.append(f'  start -> "{name(m.initial)}";')
    for p, w, q in sorted(m.edges, key=lambda e: (name(e[0]), e[1], name(e[2]))):
        label = "".join(w) if w else "ε"
        out.append(f'  "{name(p)}" -> "{name(q)}" [label="{label}"];')
    out.append("}")
    return "\n".join(out) + "\n"


# ---------------------------------------------------------------- transducers

def parse_transducer(text, path="<transducer>"):
    inputs = outputs = None
    states, edges = {}, []
    initial, finals = None, set()
    for n, line in _lines(text):
        key, rest = _key_value(line)
        if key == "alphabet":
            inputs = outputs = tuple(rest)
        elif key == "input":
            inputs = tuple(rest)
        elif key == "output":
            outputs = tuple(rest)
        elif key == "state":
            if not rest:
                raise ParseError(path, n, "state declaration without a name")
            states[rest[0]] = n
            for flag in rest[1:]:
                if flag == "initial":
                    if initial is not None and initial != rest[0]:
                        raise ParseError(path, n, f"second initial state {rest[0]!r}")
                    initial = rest[0]
                elif flag == "final":
                    finals.add(rest[0])
                else:
                    raise ParseError(path, n, f"unknown state flag {flag!r}")
        elif key == "edge":
            if len(rest) != 4:
                raise ParseError(path, n, "expected 'edge: source input output target'")
            edges.append((n, rest[0], _word_token(rest[1]), _word_token(rest[2]), rest[3]))
        else:
            raise ParseError(path, n, f"unexpected line {line!r}")
    if inputs is None or outputs is None:
        raise ParseError(path, 0, "missing 'input:'/'output:' (or 'alphabet:') declaration")
    if initial is None:
        raise ParseError(path, 0, "no initial state")
    for n, p, u, v, q in edges:
        for s in (p, q):
            if s not in states:
                raise ParseError(path, n, f"undeclared state {s!r}")
        _check_letters(path, n, u, inputs, "input letter")
        _check_letters(path, n, v, outputs, "output letter")
    return Transducer(inputs, outputs, states, [e[1:] for e in edges], initial, finals)


def format_transducer(t):
    name = Namer(t.states)
    out = ["input: " + " ".join(t.input_alphabet), "output: " + " ".join(t.output_alphabet)]
    for s in sorted(t.states, key=name):
        flags = [f for f, on in (("initial", s == t.initial), ("final", s in t.finals)) if on]
        out.append(" ".join(["state:", name(s), *flags]))
    for p, u, v, q in sorted(t.edges, key=lambda e: (name(e[0]), e[1], e[2], name(e[3]))):
        out.append(f"edge: {name(p)} {_show_word(u)} {_show_word(v)} {name(q)}")
    return "\n".join(out) + "\n"


# ---------------------------------------------------------------- context-free grammars

def _arrow(path, n, line):
    lhs, sep, rhs = line.partition("->")
    if not sep:
        raise ParseError(path, n, f"expected a production 'A -> ...', got {line!r}")
    lhs, rhs = lhs.split(), rhs.split()
    if not lhs:
        raise ParseError(path, n, "production without a head")
    if rhs == [EMPTY]:
        rhs = []
    elif EMPTY in rhs:
        raise ParseError(path, n, "'_' must stand alone on the right-hand side")
    return lhs, rhs


def parse_cfg(text, path="<cfg>"):
    terminals, start, rows, declared = None, None, [], set()
    for n, line in _lines(text):
        key, rest = _key_value(line)
        if key == "terminals":
            terminals = tuple(rest)
        elif key == "nonterminals":
            declared.update(rest)
        elif key == "start":
            if len(rest) != 1:
                raise ParseError(path, n, "expected 'start: S'")
            start = rest[0]
        elif key is None:
            lhs, rhs = _arrow(path, n, line)
            if len(lhs) != 1:
                raise ParseError(path, n, "a context-free production has one head")
            rows.append((n, lhs[0], rhs))
        else:
            raise ParseError(path, n, f"unknown declaration {key!r}")
    if terminals is None:
        raise ParseError(path, 0, "missing 'terminals:' declaration")
    heads = {a for _, a, _ in rows} | declared
    if start is None:
        if not rows:
            raise ParseError(path, 0, "missing 'start:' declaration")
        start = rows[0][1]
    for a in declared & set(terminals):
        raise ParseError(path, 0, f"terminal {a!r} declared as a nonterminal")
    for n, a, rhs in rows:
        if a in terminals:
            raise ParseError(path, n, f"terminal {a!r} used as a production head")
        for x in rhs:
            if x not in terminals and x not in heads:
                raise ParseError(path, n, f"symbol {x!r} is neither a terminal nor a nonterminal")
    return Cfg(heads | {start}, terminals, [(a, tuple(rhs)) for _, a, rhs in rows], start)


def format_cfg(g):
    name = Namer(g.nonterminals)
    show = lambda x: x if x in g.terminals else name(x)  # noqa: E731
    out = ["terminals: " + " ".join(g.terminals), f"start: {name(g.start)}",
           "nonterminals: " + " ".join(sorted(name(a) for a in g.nonterminals))]
    rows = sorted((name(a), " ".join(map(show, rhs)) or EMPTY) for a, rhs in g.productions)
    out += [f"{a} -> {rhs}" for a, rhs in rows]
    return "\n".join(out) + "\n"


# ---------------------------------------------------------------- indexed grammars

def parse_indexed(text, path="<indexed>"):
    """Parse an indexed grammar.

    The result is an :class:`IndexedGrammar`, or an :class:`IntervalGrammar`
    when ``interval:`` lines are present, or a :class:`PartitionedGrammar`
    when a ``direct:`` line is present as well.
    """
    terminals, indices, start = None, (), None
    declared, letters, iota, direct = set(), None, {}, None
    rows = []
    for n, line in _lines(text):
        key, rest = _key_value(line)
        if key == "terminals":
            terminals = tuple(rest)
        elif key == "indices":
            indices = tuple(rest)
        elif key == "start":
            if len(rest) != 1:
                raise ParseError(path, n, "expected 'start: S'")
            start = rest[0]
        elif key == "nonterminals":
            declared.update(rest)
        elif key == "letters":
            letters = tuple(rest)
        elif key == "interval":
            if len(rest) != 3:
                raise ParseError(path, n, "expected 'interval: A i j'")
            try:
                iota[rest[0]] = (int(rest[1]), int(rest[2]))
            except ValueError:
                raise ParseError(path, n, "interval bounds must be integers") from None
        elif key == "direct":
            direct = frozenset(rest)
        elif key is None:
            lhs, rhs = _arrow(path, n, line)
            rows.append((n, lhs, rhs))
        else:
            raise ParseError(path, n, f"unknown declaration {key!r}")
    if terminals is None:
        raise ParseError(path, 0, "missing 'terminals:' declaration")
    heads = {lhs[0] for _, lhs, _ in rows} | declared
    if start is None:
        if not rows:
            raise ParseError(path, 0, "missing 'start:' declaration")
        start = rows[0][1][0]
    heads.add(start)
    prods = []
    for n, lhs, rhs in rows:
        prods.append(_indexed_production(path, n, lhs, rhs, terminals, indices, heads))
    try:
        g = IndexedGrammar(frozenset(heads), terminals, indices, frozenset(prods), start)
    except (ValueError, TypeError) as e:
        raise ParseError(path, 0, str(e)) from None
    if not iota:
        if direct is not None:
            raise ParseError(path, 0, "'direct:' requires interval declarations")
        return g
    try:
        ig = IntervalGrammar(g, iota, letters or ())
        if direct is None:
            return ig
        return PartitionedGrammar(ig, direct)
    except ValueError as e:
        raise ParseError(path, 0, str(e)) from None


def _indexed_production(path, n, lhs, rhs, terminals, indices, heads):
    def index(token):
        f = token[1:]
        if f not in indices:
            raise ParseError(path, n, f"undeclared index symbol {f!r}")
        return f

    for x in rhs:
        if x not in terminals and x not in heads and not x.startswith("^"):
            raise ParseError(path, n, f"symbol {x!r} is neither a terminal nor a nonterminal")
    if len(lhs) == 2:
        if not lhs[1].startswith("?"):
            raise ParseError(path, n, "a pop production reads 'A ?f -> ...'")
        return Production(lhs[0], tuple(rhs), pop=index(lhs[1]))
    if len(lhs) != 1:
        raise ParseError(path, n, "malformed production head")
    if rhs and rhs[-1].startswith("^"):
        if len(rhs) != 2 or rhs[0] not in heads:
            raise ParseError(path, n, "a push production reads 'A -> B ^f'")
        return Production(lhs[0], (rhs[0],), push=index(rhs[-1]))
    if any(x.startswith("^") for x in rhs):
        raise ParseError(path, n, "'^f' may only end a push production")
    return Production(lhs[0], tuple(rhs))


def format_indexed(g):
    """Text for an indexed, interval or partitioned grammar."""
    direct = iota = letters = None
    if isinstance(g, PartitionedGrammar):
        direct, g = g.direct, g.grammar
    if isinstance(g, IntervalGrammar):
        iota, letters, g = g.iota, g.letters, g.grammar
    # one namer for every symbol keeps nonterminal and index names apart
    name = Namer(set(g.terminals) | set(g.nonterminals) | set(g.indices))
    show = lambda x: x if g.is_terminal(x) else name(x)  # noqa: E731
    out = [
        "terminals: " + " ".join(g.terminals),
        "indices: " + " ".join(name(f) for f in g.indices),
        f"start: {name(g.start)}",
        "nonterminals: " + " ".join(sorted(name(a) for a in g.nonterminals)),
    ]
    if iota is not None:
        out.append("letters: " + " ".join(letters))
        for a in sorted(g.nonterminals, key=name):
            out.append(f"interval: {name(a)} {iota[a][0]} {iota[a][1]}")
    if direct is not None:
        out.append("direct: " + " ".join(x for x in letters if x in direct))
    rows = []
    for p in g.productions:
        if p.push is not None:
            rows.append(f"{name(p.lhs)} -> {name(p.rhs[0])} ^{name(p.push)}")
        else:
            head = name(p.lhs) if p.pop is None else f"{name(p.lhs)} ?{name(p.pop)}"
            rows.append(f"{head} -> {' '.join(map(show, p.rhs)) or EMPTY}")
    out += sorted(rows)
    return "\n".join(out) + "\n"


def parse_indexed_documents(text, path="<indexed>"):
    """Several grammars separated by ``---`` lines."""
    docs, cur = [], []
    for raw in text.splitlines():
        if raw.strip() == SEPARATOR:
            docs.append("\n".join(cur))
            cur = []
        else:
            cur.append(raw)
    docs.append("\n".join(cur))
    return [parse_indexed(d, path) for d in docs if list(_lines(d))]


def format_indexed_documents(grammars):
    return f"{SEPARATOR}\n".join(format_indexed(g) for g in grammars)
