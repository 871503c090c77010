class CathedraError(Exception):
    """Base class for every engine error."""

    def __init__(self, message, witness=None):
        super().__init__(message)
        self.witness = witness


class CapExceeded(CathedraError):
    pass


SizeCapExceeded = CapExceeded


# category construction
class CategoryError(CathedraError):
    pass


class IndexOutOfRange(CategoryError):
    pass


class DuplicateLabel(CategoryError):
    pass


class MissingComposite(CategoryError):
    pass


class CompositeBoundaryError(CategoryError):
    pass


class AssociativityViolation(CategoryError):
    pass


class IdentityViolation(CategoryError):
    pass


class NotAssociative(CategoryError):
    pass


class NotUnital(CategoryError):
    pass


class NotReflexive(CategoryError):
    pass


class NotTransitive(CategoryError):
    pass


# sets
class UnknownAtom(CathedraError):
    pass


class InvalidFunction(CathedraError):
    pass


# functors and transformations
class FunctorError(CathedraError):
    pass


class DomCodMismatch(FunctorError):
    pass


class IdentityNotPreserved(FunctorError):
    pass


class CompositionNotPreserved(FunctorError):
    pass


class BoundaryMismatch(CathedraError):
    pass


class ComponentBoundary(CathedraError):
    pass


class NaturalityViolation(CathedraError):
    pass


# limits
class MissingProduct(CathedraError):
    pass


class MissingEqualizer(CathedraError):
    pass


class LimitMissing(CathedraError):
    pass


# adjunctions
class TriangleViolation(CathedraError):
    pass


class NotBijective(CathedraError):
    pass


class MeetMissing(CathedraError):
    pass


class NotMeetPreserving(CathedraError):
    pass


class NotWeaklyInitial(CathedraError):
    pass


# presheaves
class ElementNotInValue(CathedraError):
    pass


class NotASubpresheaf(CathedraError):
    pass


# catlang
class CatlangError(CathedraError):
    """Error located in a source document."""

    def __init__(self, message, span=None, witness=None):
        super().__init__(message, witness)
        self.span = span

    def __str__(self):
        base = super().__str__()
        if self.span is None:
            return base
        return f"{self.span.line}:{self.span.col}: {base}"


class LexError(CatlangError):
    pass


class ParseError(CatlangError):
    def __init__(self, message, span=None, expected=()):
        super().__init__(message, span)
        self.expected = tuple(expected)


class NameClash(CatlangError):
    pass


class UnresolvedReference(CatlangError):
    pass


class ArityError(CatlangError):
    pass


class UsageError(CathedraError):
    pass
