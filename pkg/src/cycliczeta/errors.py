"""Exception hierarchy.

Validation errors mean the input curve violates a hypothesis and map to CLI
exit code 2; computation errors signal an internal assertion (precision,
integrality, consistency) and map to exit code 3.
"""


class CyclicZetaError(Exception):
    pass


class ValidationError(CyclicZetaError):
    pass


class NotPrime(ValidationError):
    pass


class NotSquarefree(ValidationError):
    pass


class LeadingCoeffVanishes(ValidationError):
    pass


class DegenerateCover(ValidationError):
    pass


class PTooSmall(ValidationError):
    def __init__(self, p, bound):
        self.p = p
        self.bound = bound
        super().__init__(f"p = {p} must exceed d*(N+eps)*r = {bound}")


class ComputationError(CyclicZetaError):
    pass


class NonUnit(ComputationError):
    pass


class InexactDivision(ComputationError):
    pass


class PrecisionExhausted(ComputationError):
    pass


class NotCoprime(ComputationError):
    pass


class SingularNodes(ComputationError):
    pass


class UnexpectedZeroDenominator(ComputationError):
    pass


class IntegralityViolation(ComputationError):
    pass


class PreconditionFailed(ComputationError):
    pass


class LiftAmbiguous(ComputationError):
    pass


class BoundViolated(ComputationError):
    pass


class NonIntegralCoefficient(ComputationError):
    pass


class ConsistencyError(ComputationError):
    pass


class TooLarge(ValidationError):
    pass
