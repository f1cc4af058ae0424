from __future__ import annotations


class ProjClosureError(ValueError):
    """Domain failure carrying an UPPER_SNAKE code.

    str(err) is the bare code, or "CODE: detail" when a detail is attached.
    """

    code = "PROJCLOSURE_ERROR"

    def __init__(self, detail: str | None = None, **context: object) -> None:
        self.detail = detail
        self.context = dict(context)
        super().__init__(self.code if not detail else f"{self.code}: {detail}")


class BudgetError(ProjClosureError):
    code = "BUDGET_ERROR"


class DivisionByZero(ProjClosureError):
    code = "DIVISION_BY_ZERO"


class FieldMismatch(ProjClosureError):
    code = "FIELD_MISMATCH"


class AmbientMismatch(ProjClosureError):
    code = "AMBIENT_MISMATCH"


class InvalidCodim(ProjClosureError):
    code = "INVALID_CODIM"


class InfeasibleCodim(ProjClosureError):
    code = "INFEASIBLE_CODIM"


class NonTrivialCommonIntersection(ProjClosureError):
    code = "NON_TRIVIAL_COMMON_INTERSECTION"


class ImproperSubspace(ProjClosureError):
    code = "IMPROPER_SUBSPACE"


class AxiomViolation(ProjClosureError):
    code = "AXIOM_VIOLATION"


class InfeasibleVector(ProjClosureError):
    code = "INFEASIBLE_VECTOR"


class EmptySupport(ProjClosureError):
    code = "EMPTY_SUPPORT"


class DegreeMismatch(ProjClosureError):
    code = "DEGREE_MISMATCH"


class GenericityNotAchieved(ProjClosureError):
    code = "GENERICITY_NOT_ACHIEVED"


class InvariantViolation(ProjClosureError):
    code = "INVARIANT_VIOLATION"


class NotInClosure(ProjClosureError):
    code = "NOT_IN_CLOSURE"


class DegenerateScan(ProjClosureError):
    code = "DEGENERATE_SCAN"


class ParseError(ProjClosureError):
    code = "PARSE_ERROR"


class RetryBudgetExhausted(BudgetError):
    code = "RETRY_BUDGET_EXHAUSTED"


class SubsetBudgetExceeded(BudgetError):
    code = "SUBSET_BUDGET_EXCEEDED"


class BudgetExceeded(BudgetError):
    code = "BUDGET_EXCEEDED"


class VariableBudgetExceeded(BudgetError):
    code = "VARIABLE_BUDGET_EXCEEDED"


class ExpansionBudgetExceeded(BudgetError):
    code = "EXPANSION_BUDGET_EXCEEDED"
