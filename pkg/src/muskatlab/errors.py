"""Exception hierarchy shared by all modules."""


class MuskatLabError(ValueError):
    """Base class for precondition failures raised by muskatlab."""


class NonFinite(MuskatLabError):
    pass


class NonZeroMean(MuskatLabError):
    pass


class GridMismatch(MuskatLabError):
    pass


class NegativeTime(MuskatLabError):
    pass


class EpsilonRange(MuskatLabError):
    pass


class ZeroAlpha(MuskatLabError):
    pass


class MissingNode(MuskatLabError):
    pass


class SpecRange(MuskatLabError):
    pass


class NuRange(MuskatLabError):
    pass


class ExponentMismatch(MuskatLabError):
    pass


class ParamRange(MuskatLabError):
    pass


class InsufficientSnapshots(MuskatLabError):
    pass


class BlowupDetected(RuntimeError):
    """Raised when an evolution leaves its admissible regime.

    ``time`` holds the simulation time of the last accepted state and
    ``states`` the snapshots recorded before the failure.
    """

    def __init__(self, message, time=None, states=None):
        super().__init__(message)
        self.time = time
        self.states = states if states is not None else []


class DegenerateRHS(MuskatLabError):
    """Right-hand side of an estimate below the degeneracy threshold."""
