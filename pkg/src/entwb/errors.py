"""Exception types raised by entwb."""


class EntanglementError(Exception):
    """Base class for all entwb errors."""


class ZeroState(EntanglementError, ValueError):
    pass


class NonUnitary(EntanglementError, ValueError):
    pass


class ConstraintViolation(EntanglementError, ValueError):
    pass


class NotUnit(EntanglementError, ValueError):
    pass


class NonPositive(EntanglementError, ValueError):
    pass


class NoConvergence(EntanglementError, RuntimeError):
    pass


class DegenerateClosest(EntanglementError):
    """The state has several inequivalent closest product states.

    The candidates are attached as ``products`` so callers can still pick one.
    """

    def __init__(self, message, products=()):
        super().__init__(message)
        self.products = list(products)


class ComplexRoot(EntanglementError, ValueError):
    pass


class IndefiniteAtW(EntanglementError, ValueError):
    pass


class InvalidAngle(EntanglementError, ValueError):
    pass


class NoValidRoot(EntanglementError, ValueError):
    pass


class CanonicalizationFailure(EntanglementError):
    pass
