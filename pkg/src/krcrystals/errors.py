class CrystalError(Exception):
    """Base error for this package."""


class UnsupportedSpec(CrystalError):
    pass


class BudgetExceeded(CrystalError):
    pass


class VerificationError(CrystalError):
    """A checked identity failed; ``witness`` names the offending vertex."""

    def __init__(self, message, witness=None):
        super().__init__(message)
        self.witness = witness


class IsomorphismError(CrystalError):
    def __init__(self, message, vertex=None, color=None):
        super().__init__(message)
        self.vertex = vertex
        self.color = color
