"""Computing downward closures from a transduction/emptiness/SUP interface.

The search walks the canonical SRE stream and returns the first expression
``r`` with ``↓L ⊆ L(r)`` (an emptiness question after intersecting with the
complement of ``r``) and ``L(r) ⊆ ↓L`` (one simultaneous-unboundedness
question per product of ``r``).
"""
import logging
from dataclasses import dataclass, field
from typing import Protocol

from .automata import (
    bounded_form_nfa,
    make_alphabet,
    nfa_complement,
    nfa_downward_saturate,
    nfa_included,
    nfa_is_empty,
    nfa_normalize,
)
from .errors import BudgetExhausted, NotBoundedForm
from .words import EPSILON
from .cfg import cfg_apply_transduction, cfg_is_empty, cfg_parikh
from .semilinear import parikh_nfa, sup_from_semilinear
from .sre import (
    OptLetter,
    Sre,
    StarSet,
    all_atoms,
    canonical_product,
    canonicalize,
    enumerate_sres,
    is_canonical_product,
    product_included,
    product_block_form,
    product_key,
    sre_to_nfa,
    sres_of_size,
)
from .transducers import (
    apply_to_nfa,
    block_counting_transduction,
    compose,
    projection_transduction,
    regular_intersection_transduction,
    subword_transduction,
)

log = logging.getLogger(__name__)


class ClassAdapter(Protocol):
    """What the engine needs from a language class."""

    def apply_transduction(self, handle, t): ...

    def is_empty(self, handle) -> bool: ...

    def decide_sup(self, handle, letters) -> bool: ...


@dataclass(frozen=True)
class ClosureResult:
    sre: Sre
    candidates_tested: int
    stats: dict = field(default_factory=dict, compare=False)


# ---------------------------------------------------------------- SUP deciders

def decide_sup_regular(m, letters):
    """Does the downward closure of ``L(m) ⊆ a1*...an*`` equal ``a1*...an*``?"""
    letters = make_alphabet(letters)
    if not nfa_included(m, bounded_form_nfa(letters, m.alphabet)):
        raise NotBoundedForm(letters)
    image = parikh_nfa(nfa_downward_saturate(nfa_normalize(m)))
    return sup_from_semilinear(image, letters)


def _bounded_check_transducer(letters, alphabet):
    outside = nfa_complement(bounded_form_nfa(letters, alphabet), alphabet)
    return regular_intersection_transduction(nfa_normalize(outside))


def decide_sup_cfg(g, letters):
    letters = make_alphabet(letters)
    outside = cfg_apply_transduction(g, _bounded_check_transducer(letters, g.terminals))
    if not cfg_is_empty(outside):
        raise NotBoundedForm(letters)
    closed = cfg_apply_transduction(g, subword_transduction(g.terminals))
    return sup_from_semilinear(cfg_parikh(closed), letters)


class RegularAdapter:
    """Handles are :class:`~dclosure.automata.Nfa` values."""

    def apply_transduction(self, handle, t):
        return apply_to_nfa(t, handle)

    def is_empty(self, handle):
        return nfa_is_empty(handle)

    def decide_sup(self, handle, letters):
        return decide_sup_regular(handle, letters)


class CfgAdapter:
    """Handles are :class:`~dclosure.cfg.Cfg` values."""

    def apply_transduction(self, handle, t):
        return cfg_apply_transduction(handle, t)

    def is_empty(self, handle):
        return cfg_is_empty(handle)

    def decide_sup(self, handle, letters):
        return decide_sup_cfg(handle, letters)


# ---------------------------------------------------------------- inclusion tests

def fresh_letters(n, avoid):
    out, k = [], 1
    while len(out) < n:
        c = f"c{k}"
        if c not in avoid:
            out.append(c)
        k += 1
    return tuple(out)


def sre_upper_inclusion(c, closed, r, alphabet):
    """``↓L ⊆ L(r)``, with ``closed`` a handle for ``↓L``."""
    outside = nfa_complement(sre_to_nfa(r, alphabet), alphabet)
    t = regular_intersection_transduction(nfa_normalize(outside))
    return c.is_empty(c.apply_transduction(closed, t))


def product_lower_inclusion(c, closed, p, alphabet):
    """``L(p) ⊆ ↓L`` for a single product, as one SUP instance."""
    bf = product_block_form(p, alphabet)
    if bf.n == 0:
        gate = block_counting_transduction(bf.words, (), (), alphabet)
        (a,) = fresh_letters(1, set(alphabet))
        t = compose(gate, projection_transduction((), a))
        return c.decide_sup(c.apply_transduction(closed, t), (a,))
    out = fresh_letters(bf.n, set(alphabet))
    t = block_counting_transduction(bf.words, bf.blocks, out, alphabet)
    return c.decide_sup(c.apply_transduction(closed, t), out)


def sre_lower_inclusion(c, closed, r, alphabet=None):
    """``L(r) ⊆ ↓L``: every product must pass."""
    if alphabet is None:
        alphabet = tuple(sorted(r.letters()))
    return all(product_lower_inclusion(c, closed, p, alphabet) for p in r.products)


# ---------------------------------------------------------------- the search

def enlargements(p, atoms):
    """Canonical products one step above ``p``: widen one atom or insert one.

    Inserting ``x?`` is the weakest insertion; a wider insertion only
    enlarges the language further.
    """
    out = set()
    for i, a in enumerate(p):
        if isinstance(a, OptLetter):
            out.add(p[:i] + (StarSet(frozenset((a.letter,))),) + p[i + 1:])
        else:
            for b in atoms:
                if isinstance(b, StarSet) and len(b.letters) == len(a.letters) + 1 \
                        and a.letters < b.letters:
                    out.add(p[:i] + (b,) + p[i + 1:])
    for i in range(len(p) + 1):
        for b in atoms:
            if isinstance(b, OptLetter):
                out.add(p[:i] + (b,) + p[i:])
    result = set()
    for q in out:
        q = canonical_product(q)
        if not product_included(q, p):
            result.add(q)
    return sorted(result, key=product_key)


def downward_closure(c, language, alphabet, budget=100_000):
    """First SRE of the canonical stream whose language is ``↓L``.

    Candidates are generated in the same relative order as
    :func:`~dclosure.sre.enumerate_sres`, and the first one passing both
    inclusion tests is returned, but most of the stream is skipped safely:

    * a matching SRE only contains products passing the lower test, and that
      family is closed under removing atoms, so it is grown one atom at a
      time from the empty product;
    * product languages are ideals of the subword order, and an ideal inside
      a finite union of downward-closed sets lies inside one of them.  So in
      a matching canonical SRE every product is maximal among those passing
      the lower test, and a product with a strictly larger one-step
      enlargement that passes can be dropped.

    ``budget`` caps the number of candidates sent to the upper test.
    """
    alphabet = make_alphabet(alphabet)
    if not alphabet:
        raise ValueError("need a nonempty alphabet")
    if budget <= 0:
        raise ValueError("budget must be positive")
    stats = {"lower_tests": 0, "upper_tests": 0}
    if c.is_empty(language):
        return ClosureResult(Sre(()), 0, stats)
    closed = c.apply_transduction(language, subword_transduction(alphabet))
    atoms = all_atoms(alphabet)
    good_cache = {EPSILON: True}

    def good(p):
        if p not in good_cache:
            stats["lower_tests"] += 1
            good_cache[p] = product_lower_inclusion(c, closed, p, alphabet)
        return good_cache[p]

    def maximal(p):
        return not any(good(q) for q in enlargements(p, atoms))

    layers = [[EPSILON]]  # good canonical products, by length
    pool = [p for p in layers[0] if maximal(p)]
    covered = False
    tested = 0
    size = 0
    while True:
        grown = False
        while len(layers) < size and layers[-1] and not covered:
            nxt = []
            for p in layers[-1]:
                for a in atoms:
                    q = p + (a,)
                    if is_canonical_product(q) and good(q):
                        nxt.append(q)
            layers.append(nxt)
            pool += [p for p in nxt if maximal(p)]
            grown = True
        if grown:
            pool.sort(key=product_key)
            # Once the pool covers ↓L, every longer maximal product has the
            # language of a shorter pool product, so it cannot appear in the
            # first matching SRE.
            stats["cover_tests"] = stats.get("cover_tests", 0) + 1
            covered = sre_upper_inclusion(c, closed, canonicalize(pool), alphabet)
        for r in sres_of_size(pool, size):
            tested += 1
            if tested > budget:
                raise BudgetExhausted(budget)
            stats["upper_tests"] += 1
            if sre_upper_inclusion(c, closed, r, alphabet):
                log.debug("closure found after %d candidates: %s", tested, r)
                return ClosureResult(r, tested, stats)
        size += 1


def plain_downward_closure(c, language, alphabet, budget=100_000):
    """Reference search: test every SRE of the stream in order, no pruning."""
    alphabet = make_alphabet(alphabet)
    closed = c.apply_transduction(language, subword_transduction(alphabet))
    for tested, r in enumerate(enumerate_sres(alphabet), 1):
        if tested > budget:
            raise BudgetExhausted(budget)
        if sre_lower_inclusion(c, closed, r, alphabet) and sre_upper_inclusion(
            c, closed, r, alphabet
        ):
            return ClosureResult(r, tested)
