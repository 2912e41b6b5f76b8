"""Exception hierarchy.

Every error carries an ``exit_code`` so the command line front end can map
failures onto its documented codes without inspecting message text.
"""


class CYGrowthError(Exception):
    exit_code = 1


class ParseError(CYGrowthError):
    """Malformed input file (bad JSON, missing or mistyped field)."""

    exit_code = 2


class SemanticError(CYGrowthError):
    """Well-formed input that violates a mathematical precondition."""

    exit_code = 3


class InvalidQuiver(SemanticError):
    pass


class InvalidCYDatum(SemanticError):
    pass


class InvalidDimOneQuiver(InvalidCYDatum):
    pass


class CompatibilityError(InvalidCYDatum):
    """The incidence data does not satisfy the identity required by the datum."""

    def __init__(self, message, witness=None):
        super().__init__(message)
        self.witness = witness


class NonUnimodular(SemanticError):
    pass


# polyalg / growth
class ZeroDenominator(SemanticError):
    pass


class ZeroPolynomial(SemanticError):
    pass


class SingularConstantTerm(SemanticError):
    pass


class NonUnimodularConstantTerm(NonUnimodular):
    pass


class DimensionMismatch(SemanticError):
    pass


# oracle
class OracleError(CYGrowthError):
    exit_code = 4


class InvalidRelation(OracleError):
    pass


class TauNotInjective(OracleError):
    pass


class TauImageNotArrowSpace(OracleError):
    pass


class DegreeMismatch(OracleError):
    pass


class NotWeakPotential(OracleError):
    pass


class TruncationTooLarge(OracleError):
    pass


class BoundsTooLarge(CYGrowthError):
    exit_code = 5
