"""Exception types raised across the package."""


class EpiconjError(Exception):
    """Base class for all package errors."""


class ClosureCapExceeded(EpiconjError):
    pass


class NonAssociative(EpiconjError):
    pass


class NoIdentity(EpiconjError):
    pass


class NotGroupElement(EpiconjError):
    pass


class NotRegular(EpiconjError):
    pass


class NotInverse(EpiconjError):
    pass


class NotFactorizable(EpiconjError):
    pass


class SizeMismatch(EpiconjError):
    pass


class NotInjective(EpiconjError):
    pass


class AmbientMismatch(EpiconjError):
    pass


class GroupTooLarge(EpiconjError):
    pass


class BadAlphabet(EpiconjError):
    pass


class AlphabetMismatch(EpiconjError):
    pass


class NotInjectiveAtLength(EpiconjError):
    pass


class NotLocallyInjective(EpiconjError):
    pass


class LengthCapExceeded(EpiconjError):
    pass


class DepthCapExceeded(EpiconjError):
    pass
