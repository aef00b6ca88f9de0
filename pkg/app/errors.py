"""Exception hierarchy shared by every checker.

The CLI maps each class to an exit code, so library code raises and lets the
caller decide; nothing here logs.
"""


class EmcongError(Exception):
    pass


class InvalidModulusError(EmcongError, ValueError):
    def __init__(self, modulus):
        super().__init__(f"modulus must be >= 1, got {modulus}")
        self.modulus = modulus


class DomainError(EmcongError, ValueError):
    pass


class OracleRangeError(EmcongError):
    """A brute-force evaluator would iterate more terms than its cap allows."""

    def __init__(self, needed, cap, what="power sum"):
        super().__init__(f"{what} needs {needed} iterations, cap is {cap}")
        self.needed = needed
        self.cap = cap


class ResourceError(EmcongError):
    def __init__(self, bound, limit, what="bound"):
        super().__init__(f"{what} {bound} exceeds limit {limit}")
        self.bound = bound
        self.limit = limit


class IncompleteFactorizationError(EmcongError):
    """Trial division and primality testing could not finish the job.

    ``partial`` holds the primes found so far and ``cofactor`` the composite
    part that is left.
    """

    def __init__(self, number, partial, cofactor):
        super().__init__(f"could not factor {number}: cofactor {cofactor} is composite "
                         f"with no factor below the trial-division limit")
        self.number = number
        self.partial = partial
        self.cofactor = cofactor


class TheoremViolationError(EmcongError, AssertionError):
    """An identity that is a proven theorem failed: always a bug upstream."""
