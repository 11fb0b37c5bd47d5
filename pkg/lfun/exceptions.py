class LFunctionError(ValueError):
    pass


class TruncationBudgetExceeded(LFunctionError):
    """Raised when a truncated sum would need more terms than the configured budget."""

    def __init__(self, message, partial=None):
        super().__init__(message)
        self.partial = partial
