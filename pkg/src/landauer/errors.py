"""Package-wide exception types.

The CLI maps these onto exit codes: ConfigError -> 2, failed scenario
checks -> 1, NumericalCheckError and friends -> 3.
"""


class ConfigError(ValueError):
    """Scenario configuration is malformed or inconsistent."""


class NumericalCheckError(ArithmeticError):
    """A quantity that is exact in principle failed its roundoff budget."""


class MaxIterationsError(NumericalCheckError):
    """Iterative solver exhausted its iteration or line-search budget."""


class SingularJacobianError(NumericalCheckError):
    """Newton Jacobian numerically singular (should not happen: the
    derivative is negative definite on the traceless subspace)."""
