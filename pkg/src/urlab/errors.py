"""Exception types raised on precondition violations."""


class InputError(ValueError):
    """Invalid argument: bad index, out-of-range order, malformed input."""


class DimensionMismatchError(InputError):
    pass


class HermiticityError(InputError):
    pass


class NotPSDError(InputError):
    """Matrix has an eigenvalue below the clamping threshold."""
