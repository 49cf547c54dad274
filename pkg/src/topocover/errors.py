"""Exception hierarchy shared by every topocover module."""


class TopocoverError(Exception):
    """Base class for all library errors."""


class NatOverflow(TopocoverError, ArithmeticError):
    pass


class ElementSyntaxError(TopocoverError, ValueError):
    """Raised when an element or subset encoding cannot be decoded."""


class IndexOutOfRange(TopocoverError, LookupError):
    def __init__(self, element, index):
        super().__init__(f"index {index} is not an axiom index of {element}")
        self.element = element
        self.index = index


class MissingLeafProof(TopocoverError, LookupError):
    def __init__(self, element):
        super().__init__(f"no proof supplied for leaf {element}")
        self.element = element


class InvalidInput(TopocoverError, ValueError):
    pass


class ImpossibleRefl(TopocoverError):
    """A refl node claims membership in the empty subset: the certificate is corrupt."""


class NotAChild(TopocoverError, LookupError):
    pass


class InvalidCertificate(TopocoverError, ValueError):
    pass


class CertificateFormatError(TopocoverError, ValueError):
    pass


class BudgetExhausted(TopocoverError):
    def __init__(self, explored, budget):
        super().__init__(f"explored {explored} elements, budget is {budget}")
        self.explored = explored
        self.budget = budget


class ContractError(TopocoverError):
    """A functional asked for the value of an element that is not one of its children."""


class NoMatchingClause(TopocoverError, LookupError):
    def __init__(self, element):
        super().__init__(f"no clause matches input {element}")
        self.element = element


class EvalError(TopocoverError):
    pass


class ParseError(TopocoverError):
    def __init__(self, line, column, message):
        super().__init__(f"{line}:{column}: {message}")
        self.line = line
        self.column = column
        self.message = message


class ProgramError(TopocoverError):
    """Raised when lowering a program that has validation errors."""

    def __init__(self, violations):
        lines = "; ".join(str(v) for v in violations)
        super().__init__(f"program is not valid: {lines}")
        self.violations = list(violations)
