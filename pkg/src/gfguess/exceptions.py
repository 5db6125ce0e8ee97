"""Exception hierarchy.

Every error carries a short ``status`` slug so the pipeline can record it in a
report instead of crashing.
"""


class GFGuessError(Exception):
    status = "error"


class InputError(GFGuessError, ValueError):
    status = "input-error"


class MalformedLine(InputError):
    def __init__(self, lineno, line, reason="malformed line"):
        self.lineno = lineno
        self.line = line
        super().__init__(f"line {lineno}: {reason}: {line!r}")


class NonContiguousIndex(InputError):
    def __init__(self, lineno, expected, got):
        self.lineno = lineno
        super().__init__(f"line {lineno}: expected index {expected}, got {got}")


class InsufficientData(GFGuessError, ValueError):
    status = "insufficient-data"


class SingularIndex(GFGuessError, ArithmeticError):
    status = "singular-index"

    def __init__(self, n):
        self.n = n
        super().__init__(f"leading coefficient vanishes at n={n}")


class DivergenceSuspected(GFGuessError, ArithmeticError):
    status = "divergence-suspected"


class DependentRows(GFGuessError, ValueError):
    status = "dependent-rows"


class DuplicateAbscissa(GFGuessError, ValueError):
    status = "duplicate-abscissa"


class DegreeMismatch(GFGuessError, ValueError):
    status = "degree-mismatch"


class UnstableInterpolation(GFGuessError, ArithmeticError):
    status = "unstable-interpolation"

    def __init__(self, message, outliers=()):
        self.outliers = tuple(outliers)
        super().__init__(message)


class NoRoot(GFGuessError, ValueError):
    status = "no-root"


class NonSimpleRoot(GFGuessError, ValueError):
    status = "non-simple-root"


class NoBranchMatches(GFGuessError, ValueError):
    status = "no-branch-matches"
