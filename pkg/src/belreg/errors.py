"""Exception types raised by belreg.

All inherit from ``BELError`` (itself a ``ValueError``) so callers can catch
the whole family or a single failure kind.
"""


class BELError(ValueError):
    pass


class InvalidLevels(BELError):
    """Level count too small for the requested construction."""


class OutOfRange(BELError):
    """Label or level coordinate outside its admissible interval."""


class ShapeError(BELError):
    """Logit/bit vector length does not match the code matrix."""


class InvalidLevel(BELError):
    """Integer target level outside ``1..L``."""


class InvalidTarget(BELError):
    """Real-valued target level coordinate outside ``[1, L]``."""


class InvalidSigma(BELError):
    pass


class InvalidModel(BELError):
    """Error model yields a misclassification probability above one."""


class InvalidConvention(BELError):
    """Bound convention size incompatible with the requested code."""


class UnsupportedDecoder(BELError):
    pass


class UnknownTask(BELError):
    pass
