class EulerProductError(ValueError):
    pass


class DegenerateLocalFactor(EulerProductError):
    """Raised when a closed-form local factor would divide by zero."""
