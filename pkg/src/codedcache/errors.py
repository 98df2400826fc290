"""Exception types shared across the toolkit."""


class ConstraintViolation(ValueError):
    """A caching distribution violates the memory-fraction constraints."""

    def __init__(self, message, index=None):
        super().__init__(message)
        self.index = index


class DecodeFailure(RuntimeError):
    """A user could not recover a demanded packet from the codeword.

    This always indicates a bug in graph construction or coloring; a valid
    coloring of the conflict graph is decodable by construction.
    """

    def __init__(self, user, file, packet):
        super().__init__(
            f"user {user} cannot decode packet {packet} of file {file}"
        )
        self.user = user
        self.file = file
        self.packet = packet


class GraphTooLarge(ValueError):
    """Exact chromatic search refused a graph above its vertex limit."""
