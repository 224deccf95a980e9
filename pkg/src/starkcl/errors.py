"""Exception hierarchy.

Every error raised by the library derives from :class:`StarkCLError`.  The
three intermediate classes map one-to-one onto CLI exit codes:

* :class:`DomainError` -> 2 (bad input, unsupported parameters)
* :class:`Refusal` -> 3 (mathematically meaningful refusal)
* :class:`PrecisionError` -> 4 (p-adic precision exhausted)
"""


class StarkCLError(Exception):
    exit_code = 1


class DomainError(StarkCLError, ValueError):
    exit_code = 2


class Refusal(StarkCLError):
    exit_code = 3


class PrecisionError(StarkCLError, ArithmeticError):
    exit_code = 4


# quadfield
class NotSquareFree(DomainError):
    pass


class DTooSmall(DomainError):
    pass


class NotSplit(DomainError):
    pass


class EvenPrime(DomainError):
    pass


class UnitTooLarge(DomainError):
    pass


# classgroup
class ZeroLeadingCoefficient(DomainError):
    pass


class DiscriminantMismatch(DomainError):
    pass


class DiscriminantTooLarge(DomainError):
    pass


class GeneratorSetInsufficient(Refusal):
    pass


class BSGSWindowError(Refusal):
    pass


class InertPrime(DomainError):
    pass


# padic
class ZeroInput(DomainError):
    pass


class OutsideConvergenceDomain(DomainError):
    pass


class DivisibleByP(DomainError):
    pass


class IndistinguishableFromZero(PrecisionError):
    pass


# lfunction
class IllConditioned(PrecisionError):
    pass


class ResidualTooLarge(PrecisionError):
    pass


class OrderExceedsDegree(DomainError):
    pass


# stark
class ZeroQuotient(Refusal):
    pass


# coleman
class PrecisionExhausted(PrecisionError):
    pass


class TOutsideDomain(DomainError):
    pass


class ConvergenceHypothesisFailed(Refusal):
    pass


class PDividesClassNumber(DomainError):
    pass


# qwalk
class GroupTooLarge(DomainError):
    pass


class Disconnected(Refusal):
    pass


class Trivial(Refusal):
    pass


# sigma
class NonCyclicGroup(Refusal):
    pass


class BadDiscriminant(DomainError):
    pass


class MessageLengthMismatch(DomainError):
    pass
