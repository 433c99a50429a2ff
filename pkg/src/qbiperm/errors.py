"""Exception hierarchy.

Every error carries a stable machine-readable ``kind`` slug (used by the
CLI to emit JSON error payloads) and an exit code: 1 for domain errors,
2 for syntax/usage errors.
"""

from __future__ import annotations


class QbipermError(Exception):
    kind = "error"
    exit_code = 1


class ShapeError(QbipermError):
    kind = "shape-error"


class NotIsometry(QbipermError):
    kind = "not-isometry"


class NotHermitian(QbipermError):
    kind = "not-hermitian"


class NotCP(QbipermError):
    kind = "not-cp"


class NotTracePreserving(QbipermError):
    kind = "not-trace-preserving"


class NotUnital(QbipermError):
    kind = "not-unital"


class NotCPTP(QbipermError):
    kind = "not-cptp"


class NotCPU(QbipermError):
    kind = "not-cpu"


class NotStarHom(QbipermError):
    kind = "not-star-hom"


class NotSingleBlockCodomain(QbipermError):
    kind = "not-single-block-codomain"


class IllConditioned(QbipermError):
    kind = "ill-conditioned"


class WitnessInfeasible(QbipermError):
    kind = "witness-infeasible"

    def __init__(self, message: str, residual: float | None = None):
        if residual is not None:
            message = f"{message} (residual {residual:.3e})"
        super().__init__(message)
        self.residual = residual


class SameComponent(QbipermError):
    kind = "same-component"


class WitnessNotNormalized(QbipermError):
    kind = "witness-not-normalized"


class CircuitSyntaxError(QbipermError):
    kind = "syntax-error"
    exit_code = 2

    def __init__(self, message: str, line: int | None = None, column: int | None = None):
        if line is not None:
            message = f"line {line}, column {column}: {message}"
        super().__init__(message)
        self.line = line
        self.column = column


class CircuitTypeError(QbipermError):
    kind = "type-error"
    exit_code = 2


class UsageError(QbipermError):
    kind = "usage-error"
    exit_code = 2
