"""Exception types shared across the package."""


class DomainError(ValueError):
    """Argument lies outside the domain of a function or state family."""


class ConvergenceError(RuntimeError):
    """An iterative procedure did not reach its tolerance."""


class UnreachableTargetError(ValueError):
    """A requested mean photon number cannot be realised by the family."""
