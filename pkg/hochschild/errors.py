"""Error hierarchy shared by the library and the CLI."""


class HochschildError(Exception):
    code = "InternalError"
    exit_code = 1

    def __init__(self, detail: str, location: str | None = None) -> None:
        super().__init__(detail)
        self.detail = detail
        self.location = location

    def diagnostic(self) -> str:
        where = f" [{self.location}]" if self.location else ""
        return f"{self.code}{where}: {self.detail}"


# ─── Invalid input ──────────────────────────────────────────────

class InvalidAlgebra(HochschildError):
    code = "InvalidAlgebra"
    exit_code = 2


class EmptyQuiver(InvalidAlgebra):
    code = "EmptyQuiver"


class BadBranchLength(InvalidAlgebra):
    code = "BadBranchLength"


class UnknownBranch(InvalidAlgebra):
    code = "UnknownBranch"


class RelationOnArrow(InvalidAlgebra):
    code = "RelationOnArrow"


class WindowOutOfRange(InvalidAlgebra):
    code = "WindowOutOfRange"


class NonMinimalRelations(InvalidAlgebra):
    code = "NonMinimalRelations"


class MixedBranchClass(InvalidAlgebra):
    code = "MixedBranchClass"


class ZeroRow(InvalidAlgebra):
    code = "ZeroRow"


class SingleBranchRelation(InvalidAlgebra):
    code = "SingleBranchRelation"


class ParseError(HochschildError):
    code = "ParseError"
    exit_code = 2


class UnknownLabel(HochschildError):
    code = "UnknownLabel"
    exit_code = 2


# ─── Misuse of an operation ─────────────────────────────────────

class EndpointMismatch(HochschildError):
    code = "EndpointMismatch"


class DegreeMismatch(HochschildError):
    code = "DegreeMismatch"


class DegreeUnsupported(HochschildError):
    code = "DegreeUnsupported"


class NotApplicable(HochschildError):
    code = "NotApplicable"


class AbelianInput(NotApplicable):
    code = "AbelianInput"


class BudgetExceeded(HochschildError):
    code = "BudgetExceeded"

    def __init__(self, degree: int, size: int, budget: int) -> None:
        super().__init__(
            f"degree {degree} needs {size} bar basis tuples, budget is {budget}",
            location=f"degree {degree}",
        )
        self.degree = degree
        self.size = size
        self.budget = budget


# ─── Internal consistency (should be unreachable) ───────────────

class NotACocycle(HochschildError):
    code = "NotACocycle"


class TableMismatch(HochschildError):
    code = "TableMismatch"


class ConstructionMismatch(HochschildError):
    code = "ConstructionMismatch"


class AmbiguityMismatch(HochschildError):
    code = "AmbiguityMismatch"


class OracleDisagreement(HochschildError):
    code = "OracleDisagreement"
    exit_code = 3
