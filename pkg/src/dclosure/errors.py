"""Exception types shared across the package."""


class DClosureError(Exception):
    """Base class for every error raised by this package."""


class UnknownLetter(DClosureError):
    def __init__(self, letter, alphabet):
        super().__init__(f"letter {letter!r} is not in alphabet {list(alphabet)}")
        self.letter = letter
        self.alphabet = alphabet


class AlphabetMismatch(DClosureError):
    def __init__(self, left, right, what="alphabets"):
        super().__init__(f"{what} differ: {list(left)} vs {list(right)}")
        self.left = left
        self.right = right


class ArityMismatch(DClosureError):
    pass


class BudgetExhausted(DClosureError):
    def __init__(self, budget, what="candidates"):
        super().__init__(f"budget of {budget} {what} exhausted")
        self.budget = budget


class NotBoundedForm(DClosureError):
    def __init__(self, letters):
        pattern = " ".join(f"{a}*" for a in letters) or "{ε}"
        super().__init__(f"language is not contained in {pattern}")
        self.letters = letters


class ParseError(DClosureError):
    def __init__(self, file, line, message):
        where = f"{file}:{line}" if line else str(file)
        super().__init__(f"{where}: {message}")
        self.file = file
        self.line = line
        self.message = message
