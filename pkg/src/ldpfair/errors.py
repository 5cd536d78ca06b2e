"""Exception hierarchy shared by all ldpfair modules."""


class LdpFairError(Exception):
    """Base class for every error raised by this package."""


class DistributionError(LdpFairError, ValueError):
    """A distribution document or table is malformed."""


class SumNotOne(DistributionError):
    pass


class NegativeEntry(DistributionError):
    pass


class DuplicateLabel(DistributionError):
    pass


class MissingCell(DistributionError):
    pass


class UnknownScenario(LdpFairError, KeyError):
    def __str__(self):
        # KeyError would otherwise repr() the message
        return str(self.args[0]) if self.args else ""


class NegativeEpsilon(LdpFairError, ValueError):
    pass


class NonFiniteEpsilon(LdpFairError, ValueError):
    pass


class InvalidRetention(LdpFairError, ValueError):
    """Retention probability outside [1/2, 1]."""


class ZeroGroupMass(LdpFairError, ValueError):
    """A sensitive group has no probability mass, so its rates are undefined."""


class UndefinedEOD(LdpFairError, ValueError):
    """A group has no positive-outcome mass, so its true positive rate is undefined."""


class AssumptionViolated(LdpFairError, ValueError):
    pass


class InvalidConfig(LdpFairError, ValueError):
    pass


class BoundaryWarning(UserWarning):
    """A real-valued epsilon sits within tolerance of a flip threshold."""
