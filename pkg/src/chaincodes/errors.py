"""Exception types raised by chaincodes."""


class ChainCodesError(Exception):
    """Base class for all library errors."""


class InputError(ChainCodesError, ValueError):
    """Malformed or out-of-range input."""


class ContextMismatch(ChainCodesError, ValueError):
    """Operands built over different rings or lengths."""


class SizeLimitError(ChainCodesError):
    """A configured resource bound would be exceeded."""


class NotUnitError(ChainCodesError, ZeroDivisionError):
    """Attempt to invert a non-unit ring element."""


class NotCyclicError(ChainCodesError, ValueError):
    """A row span is not closed under the cyclic shift."""
