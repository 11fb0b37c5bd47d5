class CharacterError(ValueError):
    pass


class ModulusError(CharacterError):
    """Raised for a modulus outside the supported range."""


class NonCoprimeSplit(CharacterError):
    """Raised when a CRT split is requested for non-coprime factors."""
