"""Exception hierarchy shared by the engine modules.

``EngineError`` is the common base so callers (notably the CLI) can map any
internal failure to one exit path while argument validation errors stay
ordinary ``ValueError``s.
"""


class EngineError(Exception):
    """Base class for all engine-level failures."""


class FieldError(EngineError):
    pass


class NotPrime(FieldError):
    pass


class TooLarge(FieldError):
    pass


class NoIrreducibleFound(FieldError):
    """Internal error: the modulus search exhausted all candidates."""


class DivisionByZero(FieldError):
    pass


class ExponentRange(EngineError):
    pass


class BadFieldShape(EngineError):
    pass


class BadCongruence(EngineError):
    pass


class DegreeOverflow(EngineError):
    pass


class BadGcd(EngineError):
    pass


class BadDivisor(EngineError):
    pass


class NotAPermutation(EngineError):
    """A map that was certified bijective by the reduced test failed the
    direct bijection check; signals a bug in the reduction, never bad input."""


class DegreeMismatch(EngineError):
    pass


class MissingScalar(EngineError):
    """Block-system analysis was attempted without the scalar cycle among the
    generators; the coset-only reduction would be unsound in that case."""


class DegreeTooLarge(EngineError):
    pass


class NotBlockRespecting(EngineError):
    pass


class BoundTooLarge(EngineError):
    pass
