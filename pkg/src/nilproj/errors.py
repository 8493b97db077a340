"""Exception hierarchy.

Every error raised on purpose by the package derives from :class:`NilprojError`;
the command-line front end maps these to exit code 1.
"""


class NilprojError(Exception):
    """Base class for domain errors."""


class DomainError(NilprojError, ValueError):
    """An argument lies outside the domain of a formula."""


class NotHermitian(NilprojError, ValueError):
    pass


class NoConvergence(NilprojError, ArithmeticError):
    pass


class RankDeficient(NilprojError, ArithmeticError):
    pass


class Singular(NilprojError, ArithmeticError):
    pass


class NotRankOneProjection(NilprojError, ValueError):
    pass


class IndexOutOfRange(NilprojError, IndexError):
    pass


class PoleError(NilprojError, ZeroDivisionError):
    pass


class OutOfRange(NilprojError, ValueError):
    pass


class NotTerminal(NilprojError, ValueError):
    """A partial trace sequence failed to end at 1."""


class SelectionFailure(NilprojError, RuntimeError):
    """Zero or several candidate distances survived the lower-bound filter."""


class BracketFailure(NilprojError, RuntimeError):
    pass


class ProfileMismatch(NilprojError, ValueError):
    """A matrix does not have the flat corner profile an operation requires."""


class NotUnitary(NilprojError, ValueError):
    def __init__(self, defect: float, tol: float):
        super().__init__(f"unitarity defect {defect:.3e} exceeds {tol:.1e}")
        self.defect = defect


class NotCorankOne(NilprojError, ValueError):
    pass


class NotIsometry(NilprojError, ValueError):
    pass


class ParseError(NilprojError, ValueError):
    pass


class DimensionMismatch(NilprojError, ValueError):
    pass
