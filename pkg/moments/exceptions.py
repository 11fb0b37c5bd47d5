class MomentError(ValueError):
    pass


class ConfluentCharacters(MomentError):
    """An L(1, chi_i conj(chi_j)) factor with chi_i conj(chi_j) principal."""

    def __init__(self, message, term=None):
        super().__init__(message)
        self.term = term
