"""Exception hierarchy shared by all kmlab modules.

Precondition failures (bad user input, unsupported parameters) derive from
:class:`PreconditionError`; the CLI maps them to exit code 1.  A failed
mathematical self-check raises :class:`InvariantViolation` (exit code 2).
"""


class KmlabError(Exception):
    """Base class for every error raised by kmlab."""


class PreconditionError(KmlabError):
    """The caller supplied input outside an operation's contract."""


class InvariantViolation(KmlabError):
    """An exact check that must hold came out false."""


class MalformedInput(PreconditionError):
    pass


class InvalidGCM(PreconditionError):
    def __init__(self, axiom: str, entry: tuple[int, int] | None, message: str):
        self.axiom = axiom
        self.entry = entry
        super().__init__(message)


class DecomposableMatrix(PreconditionError):
    pass


class NotSymmetrizable(PreconditionError):
    pass


class FiniteTypeHasNoImaginaryRoots(PreconditionError):
    pass


class HeightBudgetExceeded(PreconditionError):
    pass


class DigitBudgetExceeded(PreconditionError):
    pass


class NonReducedWord(PreconditionError):
    def __init__(self, word, pair, message: str):
        self.word = tuple(word)
        self.pair = pair
        super().__init__(message)


class ImageEscapedPositive(PreconditionError):
    pass


class UnsupportedCharacteristic(PreconditionError):
    pass


class PreconditionViolated(PreconditionError):
    pass


class NotClosed(PreconditionError):
    pass


class LeavesPositiveModel(PreconditionError):
    def __init__(self, root, message: str):
        self.root = tuple(root)
        super().__init__(message)


class NotGroupLike(InvariantViolation):
    pass
