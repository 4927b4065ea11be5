"""Words are tuples of letter tokens; the empty word is ``()``."""

EPSILON = ()


def word(text):
    """Build a word from a string of one-character letters, or pass tuples through.

    ``"_"`` and ``""`` both denote the empty word.
    """
    if isinstance(text, tuple):
        return text
    if text in ("", "_"):
        return EPSILON
    return tuple(text)


def show(w):
    return "_" if not w else " ".join(w)


def is_subword(u, v):
    """True iff ``u`` embeds into ``v`` as a scattered subsequence."""
    it = iter(v)
    return all(any(x == y for y in it) for x in u)


def alph(w):
    return frozenset(w)
