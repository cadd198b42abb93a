"""Error taxonomy for the modular functor engine.

Every error carries a JSON-serializable payload so the CLI can print a
machine-readable diagnostic. Theorem and invariant violations put the full
counterexample instance into the payload.
"""

from typing import Any, Dict, Optional


class EngineError(Exception):
    """Base class for all engine errors."""

    exit_code = 1
    kind = "engine_error"

    def __init__(self, message: str, payload: Optional[Dict[str, Any]] = None):
        super().__init__(message)
        self.message = message
        self.payload: Dict[str, Any] = dict(payload or {})

    def to_diagnostic(self) -> Dict[str, Any]:
        """Machine-readable form printed on the error stream."""
        return {"error": self.kind, "message": self.message, "payload": self.payload}


# Usage errors (exit 1)

class UsageError(EngineError):
    kind = "usage_error"


class GroupValidationError(UsageError):
    kind = "invalid_group"


class UnknownPresetError(UsageError):
    kind = "unknown_preset"


class UnknownLabelError(UsageError):
    kind = "unknown_label"


class InvalidCutError(UsageError):
    kind = "invalid_cut"


class SubgroupNotClosedError(UsageError):
    kind = "subgroup_not_closed"


# Infeasible computations (exit 2)

class CapExceededError(EngineError):
    exit_code = 2
    kind = "cap_exceeded"


# Invariant and theorem violations (exit 3)

class InvariantViolation(EngineError):
    exit_code = 3
    kind = "invariant_violation"


class CharacterTableError(InvariantViolation):
    kind = "character_table_failure"


class IntegralityError(InvariantViolation):
    kind = "non_integral_result"


class DualityError(InvariantViolation):
    kind = "duality_failure"


class RouteDisagreementError(InvariantViolation):
    kind = "route_disagreement"


class GluingMismatchError(InvariantViolation):
    kind = "gluing_mismatch"


class ModularDataError(InvariantViolation):
    kind = "modular_data_failure"


class SelftestFailure(InvariantViolation):
    kind = "selftest_failure"


class CompletenessError(InvariantViolation):
    kind = "decomposition_incomplete"


# Cyclotomic arithmetic

class ConductorMismatchError(ValueError):
    """Operands of a cyclotomic operation live in different fields."""


class CyclotomicZeroDivisionError(ZeroDivisionError):
    """Inversion of the zero element of a cyclotomic field."""
