"""Exception hierarchy for the workbench.

Every error carries an optional ``witness``: a dict naming the elements that
exhibit the failure, so callers (and the CLI) can print a counterexample.
"""


class WorkbenchError(Exception):
    """Base class for all workbench errors."""

    def __init__(self, message="", witness=None):
        super().__init__(message)
        self.witness = witness


# structural validation
class ValidationError(WorkbenchError):
    pass


class NotPoset(ValidationError):
    pass


class NotLattice(ValidationError):
    pass


class NoBounds(ValidationError):
    pass


class NotABase(ValidationError):
    pass


class NotSymmetric(ValidationError):
    pass


class CarrierMismatch(ValidationError):
    pass


class ShapeMismatch(ValidationError):
    pass


class NotOAlgebra(ValidationError):
    def __init__(self, message="", witness=None, report=None):
        super().__init__(message, witness)
        self.report = report


class NotOOLattice(NotOAlgebra):
    pass


# operations that may legitimately fail on valid input
class NoPseudocomplement(WorkbenchError):
    pass


class NotHeyting(WorkbenchError):
    pass


class NotMonotone(WorkbenchError):
    pass


class NoRightAdjoint(WorkbenchError):
    pass


class NoLeftAdjoint(WorkbenchError):
    pass


class NotJoinPreserving(WorkbenchError):
    pass


class NotFrameMap(WorkbenchError):
    pass


class NotAtomic(WorkbenchError):
    pass


class NotOMorphism(WorkbenchError):
    def __init__(self, message="", witness=None, condition=None):
        super().__init__(message, witness)
        self.condition = condition


# budgets
class BudgetError(WorkbenchError):
    pass


class SizeLimit(BudgetError):
    pass


class SearchBudgetExceeded(BudgetError):
    pass


class FrameBudgetExceeded(BudgetError):
    pass


# internal diagnostics: raised only when a theorem check disagrees with itself
class InternalInconsistency(WorkbenchError):
    pass


class InconsistentCharacterizations(InternalInconsistency):
    pass


class TheoremViolation(InternalInconsistency):
    pass


class PositivityLawViolation(InternalInconsistency):
    pass


class ParseError(WorkbenchError):
    pass
