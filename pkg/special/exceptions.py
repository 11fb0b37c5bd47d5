class SpecialFunctionError(ValueError):
    pass


class PoleError(SpecialFunctionError):
    pass


class IntegrationError(SpecialFunctionError):
    def __init__(self, message, estimate=None, bound=None):
        super().__init__(message)
        self.estimate = estimate
        self.bound = bound
