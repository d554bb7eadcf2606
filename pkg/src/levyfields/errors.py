"""Exception types shared by all modules."""


class LevyFieldsError(Exception):
    """Base class for every error raised by the package."""


class DomainError(LevyFieldsError, ValueError):
    """An argument lies outside the domain of an operation."""


class ConvergenceError(LevyFieldsError, ArithmeticError):
    """A quadrature or series did not reach its requested tolerance."""


class SizeError(LevyFieldsError, ValueError):
    """A combinatorial size exceeds the supported range."""


class LatticeMismatch(LevyFieldsError, ValueError):
    """Fields that must share one lattice live on different lattices."""


class OffLattice(LevyFieldsError, ValueError):
    """A point or translation does not fit the lattice."""


class SupportError(LevyFieldsError, ValueError):
    """A test function violates its declared support constraint."""


class SearchFailed(LevyFieldsError, RuntimeError):
    """A constructive search finished without a result.

    ``diagnostics`` holds whatever the search recorded along the way.
    """

    def __init__(self, reason, diagnostics=None):
        super().__init__(reason)
        self.reason = reason
        self.diagnostics = dict(diagnostics or {})


class MassShellError(LevyFieldsError, ValueError):
    """A momentum sits on (or too close to) the mass shell."""


class ConfigError(LevyFieldsError, ValueError):
    """An experiment configuration failed validation.

    ``path`` is the dotted field name, for example ``kernel.alpha``.
    """

    def __init__(self, path, message):
        super().__init__(f"{path}: {message}")
        self.path = path
        self.message = message
