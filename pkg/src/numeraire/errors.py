"""Exception hierarchy shared by the pricing modules."""


class PricingError(Exception):
    """Base class for every error raised by this package."""


class StructuralError(PricingError, ValueError):
    """The market or tree is degenerate (e.g. up and down states coincide)."""


class ArbitrageError(PricingError, ValueError):
    """A martingale probability fell outside [0, 1]."""

    def __init__(self, message: str, value: float):
        super().__init__(f"{message} (p = {value!r})")
        self.value = value


class ConfigurationError(PricingError, ValueError):
    """Inputs are individually valid but cannot be used together."""


class UnsupportedConfigurationError(ConfigurationError):
    pass


class NonHomotheticPayoffError(PricingError, ValueError):
    """A two-asset pricing request was made with a payoff that does not scale."""


class PayoffSyntaxError(PricingError, ValueError):
    def __init__(self, message: str, offset: int, expected: frozenset[str] = frozenset()):
        self.message = message
        self.offset = offset
        self.expected = expected
        super().__init__(f"{message} at offset {offset}")


class PayoffEvaluationError(PricingError, ArithmeticError):
    def __init__(self, message: str, subexpression: str):
        self.subexpression = subexpression
        super().__init__(f"{message} in '{subexpression}'")
