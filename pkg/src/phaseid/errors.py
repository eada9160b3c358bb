"""Exception types shared across the package."""


class StateValidationError(ValueError):
    """A state or operator violates its construction invariants."""


class InvalidBasisError(ValueError):
    """A measurement basis is not orthonormal."""


class NonUnitaryGateError(ValueError):
    """A gate matrix fails the unitarity check."""


class DimensionMismatchError(ValueError):
    """Operands live in incompatible spaces."""


class UsageExhaustedError(RuntimeError):
    """No protocol uses left under this key.

    Raised as a refusal; deliberately distinct from a verifier reject.
    """


class HandleReusedError(RuntimeError):
    """A register handle was consumed twice (no-cloning guard)."""


class TransportEmptyError(RuntimeError):
    """A receive was attempted on an empty transport queue."""


class ConfigError(ValueError):
    """Invalid run configuration (bad flag value or combination)."""


class NumericalError(RuntimeError):
    """An internal numerical check failed beyond tolerance."""
