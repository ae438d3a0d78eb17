"""Exception hierarchy shared across the package."""


class StagegenError(Exception):
    """Base class for all errors raised by this package."""


class EmptyScript(StagegenError):
    """Raised when a script text to parse is empty."""


class InvalidToken(StagegenError):
    """Raised when a token id is outside the backend vocabulary."""


class ContextOverflow(StagegenError):
    """Raised when a token context exceeds the backend's hard limit."""


class BackendUnavailable(StagegenError):
    """Remote language-model backend could not be reached.

    Carries retry metadata so callers can decide whether to try again.
    """

    def __init__(self, message: str, attempts: int = 1):
        super().__init__(message)
        self.attempts = attempts


class NoCharacters(StagegenError):
    """Raised when an operation needs at least one character cue."""


class ConstraintStarved(StagegenError):
    """No allowed cue token had a finite logit in the backend response."""


class DuplicateExhausted(StagegenError):
    """Every retry produced a line duplicating the recent window."""

    def __init__(self, attempts: int):
        super().__init__(f"gave up after {attempts} duplicate lines")
        self.attempts = attempts


class UnknownLine(StagegenError):
    """Referenced line id does not exist in the session."""


class UnknownSession(StagegenError):
    """Referenced session id does not exist."""


class PromptLineImmutable(StagegenError):
    """Prompt lines cannot be discarded."""


class InvalidText(StagegenError):
    """Line text is empty or contains a newline."""


class TranslationUnavailable(StagegenError):
    """The translation client failed for a line; line stays untranslated."""


class SessionBusy(StagegenError):
    """A generation is already in flight for this session."""
