"""Exception hierarchy shared by every module.

Each class carries a short ``code`` used by the command line to print
machine-parsable ``error:{code}:{message}`` lines.
"""


class ABCError(Exception):
    code = "abc"


class DomainError(ABCError, ValueError):
    code = "domain"


class NonConvergence(ABCError, ArithmeticError):
    code = "nonconvergence"


# the solver docs call it NoConvergence
NoConvergence = NonConvergence


class QuadratureFailure(ABCError, ArithmeticError):
    code = "quadrature"


class DerivativeUnavailable(ABCError, ValueError):
    code = "derivative"


class ContractionViolation(ABCError, ValueError):
    code = "contraction"


class ConsistencyError(ABCError, ValueError):
    code = "consistency"


class HypothesisViolation(ABCError, ValueError):
    code = "hypothesis"


class PreconditionUnmet(ABCError, ValueError):
    code = "precondition"


class DominationFailure(ABCError, ArithmeticError):
    code = "domination"


class MajorantFailure(ABCError, ArithmeticError):
    code = "majorant"
