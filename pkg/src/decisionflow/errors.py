"""Exception types shared across the engine.

Errors that operators see (config loading, CLI) carry enough context to
name the offending file, entity, or column; per-fact evaluation failures
are signalled with ``EvaluationFailure`` and downgraded to a ``"failed"``
fact value by the logic engine rather than escaping.
"""

from __future__ import annotations


class EngineError(Exception):
    """Base class for all decisionflow errors."""


class MalformedPayload(EngineError):
    """Data product payload violates the payload rules (ragged table, bad name, ...)."""


class UnknownKey(EngineError):
    """No product was ever stored under the requested name."""


class ExpressionSyntaxError(EngineError):
    """Expression text failed to parse.

    ``column`` is 1-based into the source text.
    """

    def __init__(self, message: str, column: int):
        super().__init__(f"{message} (column {column})")
        self.column = column


class DepthExceeded(EngineError):
    """Expression tree exceeds the maximum nesting depth."""

    def __init__(self, message: str, column: int = 0):
        super().__init__(message)
        self.column = column


class EvaluationFailure(EngineError):
    """A fact expression could not be evaluated (missing product, bad types, ...)."""

    def __init__(self, message: str, column: int = 0):
        super().__init__(message)
        self.column = column


class CycleDetected(EngineError):
    """Transform dependency graph contains a cycle."""


class MissingInput(EngineError):
    """A module's declared input product is absent or expired at cycle time."""


class SourceFailure(EngineError):
    """A due source exhausted its retry budget; the channel enters the error state."""


class TransformFailure(EngineError):
    """A transform raised during the cycle; the cycle is aborted."""


class ModuleContractError(EngineError):
    """A module produced products that do not match its declared contract."""


class ParseError(EngineError):
    """Configuration or scenario document is not well-formed text."""


class SchemaError(EngineError):
    """Document structure violates the strict schema (unknown key, wrong type, missing key)."""


class UnknownImplementation(EngineError):
    """Configured implementation key is not present in the module registry."""


class ExpressionError(EngineError):
    """A configured fact or rule expression failed to parse or type-check.

    Carries the owning entity name and the 1-based column when known.
    """

    def __init__(self, entity: str, message: str, column: int = 0):
        detail = f"{entity}: {message}"
        if column:
            detail += f" (column {column})"
        super().__init__(detail)
        self.entity = entity
        self.column = column


class ContractViolation(EngineError):
    """Channel assembly failed structural validation; carries the violation list."""

    def __init__(self, violations):
        self.violations = list(violations)
        super().__init__("; ".join(str(v) for v in self.violations))


class SinkUnavailable(EngineError):
    """The provisioner sink rejected the delivery attempt."""


class ScriptedOutage(EngineError):
    """A simulated external system is down per the scenario script."""


class UnknownCycle(EngineError):
    """No decision record exists for the requested cycle."""


class CorruptRecord(EngineError):
    """A decision log line failed to parse; ``lineno`` is 1-based."""

    def __init__(self, lineno: int, message: str = "corrupt record"):
        super().__init__(f"{message} at line {lineno}")
        self.lineno = lineno
