"""Exception types shared across the package.

Every error raised by the library derives from TauDiffError, so callers
(and the CLI) can distinguish contract violations from genuine bugs.
"""


class TauDiffError(Exception):
    """Base class for all library errors."""


class DivisionByZero(TauDiffError, ZeroDivisionError):
    """Division by the zero element of the base field."""


class ZeroDenominator(TauDiffError, ZeroDivisionError):
    """Localization at the zero polynomial."""


class UnknownSymbol(TauDiffError, KeyError):
    """An expression mentions a symbol that is not declared."""


class InvalidBaseField(TauDiffError, ValueError):
    """Base field construction violates an invariant (e.g. no symbol has
    derivative exactly 1)."""


class ContextMismatch(TauDiffError, ValueError):
    """Operands belong to different rings / fields."""


class IndexOutOfRange(TauDiffError, IndexError):
    """Variable index outside 1..n."""


class ArityMismatch(TauDiffError, ValueError):
    """A point or vector has the wrong number of coordinates."""


class ResourceLimit(TauDiffError, RuntimeError):
    """A configured bound (pair queue, degree) was exceeded."""

    def __init__(self, message, kind="pairs"):
        super().__init__(message)
        self.kind = kind


class NotADomainSuspected(TauDiffError, ArithmeticError):
    """A product of two nonzero normal forms reduced to zero while the
    ideal was asserted prime.  Carries the offending factors."""

    def __init__(self, left, right):
        self.left = left
        self.right = right
        super().__init__(
            "zero divisor witnessed: (%s) * (%s) reduces to 0" % (left, right)
        )


class NotAnAlgebraMap(TauDiffError, ValueError):
    """The declared ring map does not send the source ideal into the
    target ideal."""


class NotAMorphism(TauDiffError, ValueError):
    """The declared polynomial map does not restrict to the varieties."""


class NotAnExtension(TauDiffError, ValueError):
    """The larger field does not extend the smaller one compatibly."""


class NotTauDerivation(TauDiffError, ValueError):
    """An operand fails the compatibility condition with the base
    derivation.  Carries the witness pair of base symbols."""

    def __init__(self, witness):
        self.witness = witness
        super().__init__("not compatible with the base derivation; witness %s" % (witness,))


class BasePointMismatch(TauDiffError, ValueError):
    """Fiber points over different base points cannot be combined."""


class NotOnVariety(TauDiffError, ValueError):
    """A point fails to satisfy a defining equation.  Carries the witness
    generator and its nonzero value."""

    def __init__(self, generator, value):
        self.generator = generator
        self.value = value
        super().__init__("point misses the variety: %s evaluates to %s" % (generator, value))


class ParseError(TauDiffError, ValueError):
    """Syntax error in an expression or problem file, with position."""

    def __init__(self, message, line, col):
        self.line = line
        self.col = col
        super().__init__("%s (line %d, column %d)" % (message, line, col))
