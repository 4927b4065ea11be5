"""Command-line front end: ``dclosure <verb> [options]``.

Artifacts go to ``--out`` (or standard output), diagnostics to standard
error.  Errors in the input or in a computation exit with status 2.
"""
import argparse
import logging
import sys
from pathlib import Path

from .automata import nfa_downward_saturate, nfa_enumerate, nfa_normalize, universal_nfa
from .cfg import cfg_enumerate
from .engine import (
    CfgAdapter,
    RegularAdapter,
    decide_sup_cfg,
    decide_sup_regular,
    downward_closure,
)
from .errors import DClosureError, ParseError
from .formats import (
    format_indexed,
    format_indexed_documents,
    format_nfa,
    nfa_to_dot,
    parse_cfg,
    parse_indexed,
    parse_nfa,
    parse_transducer,
)
from .indexed.derive import bounded_language
from .indexed.grammar import IntervalGrammar, PartitionedGrammar
from .indexed.interval import is_productive_form, partitioned_family, to_interval, to_productive
from .indexed.iw import iw_automaton
from .indexed.normal import normalize
from .indexed.pcp import pcp_grammar
from .indexed.triple import triple_construct
from .sre import format_sre, sre_to_nfa
from .words import show

log = logging.getLogger("dclosure")

CLASSES = {".nfa": "nfa", ".cfg": "cfg", ".ix": "indexed", ".idx": "indexed"}


class Failure(Exception):
    """Exit with status 1 without a diagnostic (a negative answer)."""


def _read(path):
    try:
        return Path(path).read_text()
    except OSError as e:
        raise ParseError(path, 0, e.strerror or str(e)) from None


def _class_of(args):
    if getattr(args, "cls", None):
        return args.cls
    kind = CLASSES.get(Path(args.input).suffix)
    if kind is None:
        raise ParseError(args.input, 0, "cannot tell the input class; pass --class")
    return kind


def load(path, kind):
    text = _read(path)
    if kind == "nfa":
        return parse_nfa(text, path)
    if kind == "cfg":
        return parse_cfg(text, path)
    if kind == "indexed":
        return parse_indexed(text, path)
    if kind == "transducer":
        return parse_transducer(text, path)
    raise ValueError(kind)


def _plain(g):
    """The underlying indexed grammar of an interval or partitioned grammar."""
    if isinstance(g, PartitionedGrammar):
        g = g.grammar
    if isinstance(g, IntervalGrammar):
        g = g.grammar
    return g


def _emit(args, text):
    if args.out:
        Path(args.out).write_text(text)
    else:
        sys.stdout.write(text)


# ---------------------------------------------------------------- verbs

def cmd_dc(args):
    kind = _class_of(args)
    if kind == "nfa":
        m = load(args.input, kind)
        res = downward_closure(RegularAdapter(), nfa_normalize(m), m.alphabet, args.budget)
        alphabet = m.alphabet
    elif kind == "cfg":
        g = load(args.input, kind)
        res = downward_closure(CfgAdapter(), g, g.terminals, args.budget)
        alphabet = g.terminals
    else:
        raise ParseError(args.input, 0, f"dc supports nfa and cfg inputs, not {kind}")
    log.info("closure after %d candidates", res.candidates_tested)
    _emit(args, format_sre(res.sre))
    if args.dot:
        Path(args.dot).write_text(nfa_to_dot(sre_to_nfa(res.sre, alphabet), "closure"))


def cmd_sup(args):
    kind = _class_of(args)
    lang = load(args.input, kind)
    if kind == "nfa":
        order = args.order.split() if args.order else list(lang.alphabet)
        answer = decide_sup_regular(lang, order)
    elif kind == "cfg":
        order = args.order.split() if args.order else list(lang.terminals)
        answer = decide_sup_cfg(lang, order)
    else:
        raise ParseError(args.input, 0, f"sup supports nfa and cfg inputs, not {kind}")
    print("yes" if answer else "no")
    if not answer:
        raise Failure


def cmd_oracle_dc(args):
    m = load(args.input, "nfa")
    closed = nfa_downward_saturate(nfa_normalize(m))
    _emit(args, nfa_to_dot(closed, "closure") if args.format == "dot" else format_nfa(closed))


def cmd_enumerate(args):
    kind = _class_of(args)
    lang = load(args.input, kind)
    if kind == "nfa":
        words, exhaustive = nfa_enumerate(lang, args.max_len), True
    elif kind == "cfg":
        words, exhaustive = cfg_enumerate(lang, args.max_len, args.budget), True
    else:
        words, exhaustive = bounded_language(_plain(lang), args.max_len, args.budget)
    lines = [show(w) for w in sorted(words, key=lambda w: (len(w), w))]
    lines.append(f"# exhaustive: {'true' if exhaustive else 'false'}")
    _emit(args, "\n".join(lines) + "\n")


def _interval(g):
    return g if isinstance(g, IntervalGrammar) else to_interval(_plain(g))


def _productive(g):
    if isinstance(g, PartitionedGrammar):
        g = g.grammar
    if isinstance(g, IntervalGrammar) and is_productive_form(g):
        return g
    return to_productive(_interval(g))


def cmd_indexed(args):
    g = load(args.input, "indexed")
    if args.verb == "indexed-normalize":
        result = normalize(_plain(g))
    elif args.verb == "indexed-interval":
        result = to_interval(_plain(g))
    elif args.verb == "indexed-productive":
        result = to_productive(_interval(g))
    else:
        _emit(args, format_indexed_documents(partitioned_family(_productive(g))))
        return
    _emit(args, format_indexed(result))


def cmd_triple(args):
    g = _plain(load(args.input, "indexed"))
    t = load(args.transducer, "transducer")
    _emit(args, format_indexed(triple_construct(g, t)))


def cmd_iw(args):
    g = _plain(load(args.input, "indexed"))
    r = load(args.regular, "nfa") if args.regular else universal_nfa(g.terminals)
    a = args.nonterminal or g.start
    m = iw_automaton(g, a, r)
    _emit(args, nfa_to_dot(m, f"I({a})") if args.format == "dot" else format_nfa(m))


def _pair(text):
    parts = text.split(":")
    if len(parts) != 3:
        raise argparse.ArgumentTypeError(f"expected 'x:alpha:beta', got {text!r}")
    x, a, b = parts
    return x, "" if a == "_" else a, "" if b == "_" else b


def cmd_pcp(args):
    xs = [x for x, _, _ in args.pair]
    alpha = {x: a for x, a, _ in args.pair}
    beta = {x: b for x, _, b in args.pair}
    try:
        g = pcp_grammar(xs, alpha, beta)
    except ValueError as e:
        raise ParseError("--pair", 0, str(e)) from None
    _emit(args, format_indexed(g))


# ---------------------------------------------------------------- parser

def build_parser():
    parser = argparse.ArgumentParser(prog="dclosure", description=__doc__.splitlines()[0])
    parser.add_argument("-v", "--verbose", action="count", default=0)
    sub = parser.add_subparsers(dest="verb", required=True)

    def verb(name, func, help_text, needs_input=True):
        p = sub.add_parser(name, help=help_text)
        if needs_input:
            p.add_argument("--input", "-i", required=True)
        p.add_argument("--out", "-o")
        p.set_defaults(func=func)
        return p

    p = verb("dc", cmd_dc, "downward closure as a simple regular expression")
    p.add_argument("--class", dest="cls", choices=["nfa", "cfg"])
    p.add_argument("--dot", help="also write the closure automaton as DOT to this file")
    p.add_argument("--budget", type=int, default=100_000)

    p = verb("sup", cmd_sup, "simultaneous unboundedness: prints yes (exit 0) or no (exit 1)")
    p.add_argument("--class", dest="cls", choices=["nfa", "cfg"])
    p.add_argument("--order", help='letter order, e.g. "a b" (default: declaration order)')

    p = verb("oracle-dc", cmd_oracle_dc, "downward closure of an automaton by saturation")
    p.add_argument("--format", choices=["text", "dot"], default="text")

    p = verb("enumerate", cmd_enumerate, "words up to a length")
    p.add_argument("--class", dest="cls", choices=["nfa", "cfg", "indexed"])
    p.add_argument("--max-len", type=int, default=6)
    p.add_argument("--budget", type=int, default=20_000)

    for name, text in [
        ("indexed-normalize", "normal form of an indexed grammar"),
        ("indexed-interval", "equivalent interval grammar"),
        ("indexed-productive", "productive interval grammar (drops the empty word)"),
        ("indexed-partition", "family of partitioned grammars, separated by '---'"),
    ]:
        verb(name, cmd_indexed, text)

    p = verb("indexed-triple", cmd_triple, "image of an indexed grammar under a transducer")
    p.add_argument("--transducer", "-t", required=True)

    p = verb("iw", cmd_iw, "automaton for the index words of a nonterminal")
    p.add_argument("--nonterminal", "-n", help="default: the start symbol")
    p.add_argument("--regular", "-r", help="automaton for the target set (default: all words)")
    p.add_argument("--format", choices=["text", "dot"], default="text")

    p = verb("pcp-grammar", cmd_pcp, "indexed grammar for a correspondence instance", False)
    p.add_argument("--pair", type=_pair, action="append", required=True,
                   help="x:alpha(x):beta(x) with images over 1 and 2; repeat per letter")
    return parser


def main(argv=None):
    args = build_parser().parse_args(argv)
    logging.basicConfig(level=logging.WARNING - 10 * args.verbose, format="%(name)s: %(message)s")
    try:
        args.func(args)
    except Failure:
        return 1
    except (DClosureError, ValueError) as e:
        print(f"dclosure: error: {e}", file=sys.stderr)
        return 2
    return 0


if __name__ == "__main__":
    sys.exit(main())
