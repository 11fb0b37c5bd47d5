class VoronoiError(ValueError):
    pass


class TailTooLarge(VoronoiError):
    """The dual sum did not settle below tolerance within the term cap."""

    def __init__(self, message, tail=None):
        super().__init__(message)
        self.tail = tail
