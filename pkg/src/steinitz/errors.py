"""Exception hierarchy shared by the library and the command-line front end."""


class SteinitzError(Exception):
    """Base class for every error raised by this package."""


class UndefinedInputError(SteinitzError, ValueError):
    pass


class PreconditionError(SteinitzError, ValueError):
    """An operation was called with arguments outside its domain."""


class DiscriminantMismatchError(SteinitzError, ValueError):
    pass


class NonSplitPrimeError(SteinitzError, ValueError):
    """The rational prime is inert or ramified in the base field."""


class CapExceededError(SteinitzError, ValueError):
    pass


class ShapeMismatchError(SteinitzError, ValueError):
    pass


class UnsupportedFamilyError(SteinitzError, ValueError):
    pass


class SamplingExhaustedError(SteinitzError, RuntimeError):
    """Prime sampling hit its hard bound before the subgroup stabilized."""


class SearchExhaustedError(SteinitzError, RuntimeError):
    """Witness search spent its prime budget without hitting the target."""
