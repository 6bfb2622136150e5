"""Exception hierarchy shared by every braidlab module."""


class BraidlabError(Exception):
    """Base class for all library errors."""


class ParseError(BraidlabError):
    """Malformed diagram file or word syntax."""


class InvalidMatrix(BraidlabError):
    """The Coxeter matrix violates symmetry, the unit diagonal or m_st >= 2."""


class UnknownGenerator(BraidlabError):
    pass


class NotFiniteType(BraidlabError):
    pass


class DiagramMismatch(BraidlabError):
    pass


class ClassTooLarge(BraidlabError):
    """Breadth-first materialisation of a braid class exceeded its node budget."""


class NonUniqueMaximum(BraidlabError):
    """More than one maximal reduced prefix was found.

    Maximal reduced prefixes are unique, so this signals a bug, never an
    expected outcome.
    """


class PosetTooLarge(BraidlabError):
    pass


class SizeBudget(BraidlabError):
    pass


class HypothesisFailed(BraidlabError):
    pass
