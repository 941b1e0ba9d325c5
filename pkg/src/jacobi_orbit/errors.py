"""Exception hierarchy shared by all modules."""


class JacobiOrbitError(Exception):
    """Base class for every error raised by this package."""


class DomainError(JacobiOrbitError, ValueError):
    """An argument lies outside the supported domain (e.g. Im(tau) too small)."""


class PoleError(DomainError):
    """Evaluation requested too close to a pole or a zero of a denominator."""


class ConvergenceError(JacobiOrbitError, ArithmeticError):
    """A series did not converge within its term budget."""


class NoConvergence(ConvergenceError):
    """An iterative solver exhausted its iteration budget."""


class JacobianSingular(JacobiOrbitError, ArithmeticError):
    """The Jacobian of a coordinate change is numerically singular."""
