"""Exception hierarchy shared by all modules."""


class HarmoniaError(Exception):
    """Base class for library errors."""


class DimensionError(HarmoniaError, ValueError):
    """Operands live in different ambient dimensions."""


class DegreeError(HarmoniaError, ValueError):
    """A polynomial or rule has the wrong degree for the requested operation."""


class ConvergenceError(HarmoniaError, ArithmeticError):
    """An iterative eigensolver failed to converge."""


class SingularKernelError(HarmoniaError, ArithmeticError):
    """The averaging operator of a kernel is not invertible in the requested degree."""

    def __init__(self, index, value, message=None):
        self.index = index
        self.value = value
        super().__init__(
            message
            or f"kernel coefficient lambda_{index} = {value:.3e} vanishes; "
            "the averaging operator is singular"
        )
