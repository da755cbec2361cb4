"""Exception types shared across the package."""


class WaveFieldError(Exception):
    """Base class for all wavefield errors."""


class DimMismatch(WaveFieldError):
    """Operands have different dimensions, or a mask has the wrong length."""


class ZeroEnergy(WaveFieldError):
    """An operation that requires a non-zero pattern received an all-zero one."""


class EmptyInput(WaveFieldError):
    """Text input was empty, or parsed to no content units."""


class DanglingNegator(WaveFieldError):
    """A negator token had no following content word to attach to."""


class UnknownLexeme(WaveFieldError):
    """A file-sourced lexicon has no entry for the requested lexeme."""


class InvalidVector(WaveFieldError):
    """An embedding vector was non-finite or otherwise malformed."""


class EmptyMemory(WaveFieldError):
    """Cleanup was asked to match against an empty item memory."""


class EmptyStore(WaveFieldError):
    """A query was issued against a store with no live records."""


class DuplicateId(WaveFieldError):
    """A put used an id that is already live in the store."""


class DuplicateLabel(WaveFieldError):
    """A label is already present in an item memory."""


class StoreIO(WaveFieldError):
    """A storage read/write failed; the message names the segment path."""


class CorruptStore(WaveFieldError):
    """Store files failed validation; the message names the offending field."""
