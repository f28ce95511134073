"""Exception hierarchy shared by every module of the package."""


class ShuffleWordError(Exception):
    """Base class for all errors raised by shuffleword."""


class InvalidInput(ShuffleWordError, ValueError):
    """A letter, word, length or alphabet violates an operation's precondition."""


class InvalidMorphism(InvalidInput):
    """The morphism lacks a property the operation needs (bifix images, prolongability)."""


class NotInImage(ShuffleWordError, ValueError):
    """The word is not a concatenation of images of the morphism."""


class ExhaustedStream(ShuffleWordError):
    """A stream could not produce the requested number of letters."""


class ExhaustedSchedule(ShuffleWordError):
    """A block schedule ran out of blocks before covering the requested depth."""


class RecurrenceBudgetExceeded(ShuffleWordError):
    """A required factor occurrence was not found within the search limit."""


class MemoryBudgetExceeded(ShuffleWordError):
    """A stream buffer would exceed the SHUFFLEWORD_MAX_MEM_MB cap."""


class UnknownName(ShuffleWordError, KeyError):
    """A catalog lookup used a name that is not registered."""

    def __str__(self) -> str:
        return str(self.args[0]) if self.args else ""
