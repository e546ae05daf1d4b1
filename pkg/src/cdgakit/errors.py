"""Shared exception types.

Everything raised on purpose by the library derives from CdgakitError, so
callers (and the CLI) can distinguish deliberate rejections from genuine bugs.
"""


class CdgakitError(Exception):
    """Base class for all deliberate library errors."""


class AlgebraMismatchError(CdgakitError):
    """Operands belong to different algebras."""


class DegreeCapError(CdgakitError):
    """A degree outside the representable range was requested or produced."""


class HomogeneityError(CdgakitError):
    """A homogeneous element (or matching degrees) was required."""


class MorphismError(CdgakitError):
    """A morphism violates its defining axioms."""


class DifferentialError(CdgakitError):
    """A differential violates d∘d = 0 or its degree/homogeneity rules."""


class ModelError(CdgakitError):
    """Invalid input to one of the model constructions (gem/cone/suspension)."""


class NotCocycleError(CdgakitError):
    """A cocycle was required but d(input) != 0."""


class UndefinedBracketError(CdgakitError):
    """A Massey triple product is undefined ([a][b] or [b][c] nonzero)."""


class AttachingMapError(CdgakitError):
    """An attaching map failed a structural requirement during assembly."""


class StageError(CdgakitError):
    """A simplicial stage outside the implemented truncation was requested."""


class ParseError(CdgakitError):
    """A text input failed to parse; carries the 1-based line number."""

    def __init__(self, message, line=None):
        self.line = line
        if line is not None:
            message = "line %d: %s" % (line, message)
        super().__init__(message)
