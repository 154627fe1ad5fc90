"""Exception hierarchy. Every error raised on bad input derives from AfaError."""


class AfaError(Exception):
    pass


class ParseError(AfaError):
    def __init__(self, message: str, location: str | None = None):
        self.location = location
        super().__init__(f"{location}: {message}" if location else message)


# hyperset
class EmptyLabel(AfaError, ValueError):
    pass


class AtomHasNoMembers(AfaError, TypeError):
    pass


class CyclicGraph(AfaError, ValueError):
    pass


# eqsolver
class UnboundVariable(AfaError, KeyError):
    def __str__(self) -> str:
        return Exception.__str__(self)


class NotClosed(AfaError):
    pass


class UnguardedSystem(AfaError):
    pass


class NotBijective(AfaError):
    pass


# langmodel
class UnknownSymbol(AfaError):
    pass


class MissingMeaning(AfaError):
    pass


class ReservedDollar(AfaError):
    pass


class NotInLanguage(AfaError):
    pass


# mu_encoder
class NotAFunction(AfaError):
    pass


class NoMatch(AfaError):
    pass


class Ambiguous(AfaError):
    pass


class NotInImage(AfaError):
    pass


class BrokenEncoding(AfaError):
    pass


class NotSynonyms(AfaError):
    pass


class NotSymbols(AfaError):
    pass


# wf_encoder
class NotAnEncoding(AfaError):
    pass


class NotComposable(AfaError):
    pass


# relsem
class EmptyArguments(AfaError):
    pass


class IndexOutOfRange(AfaError, IndexError):
    pass


class InvalidAtom(AfaError, ValueError):
    pass
