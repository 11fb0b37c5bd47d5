class MollifierError(ValueError):
    pass


class CutoffOverflow(MollifierError):
    """The coefficient map would exceed the term budget."""
