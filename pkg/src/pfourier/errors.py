"""Exception hierarchy shared by every module."""


class PFourierError(Exception):
    """Base class for all library errors."""


class DomainError(PFourierError, ValueError):
    """A mathematical precondition was violated (bad index, wrong group, ...)."""


class UnsupportedError(DomainError):
    """The requested operation is not available for this group or subgroup kind."""


class DescriptorError(PFourierError, ValueError):
    """A group, subgroup, weight or parameter descriptor could not be parsed."""
