"""Exception hierarchy.

``ValidationError`` subclasses signal bad input (CLI exit 2).
``PropositionViolation`` signals that a mathematical guarantee failed to
hold on a validated input, which is always a bug (CLI exit 1).
"""


class LatticeEffectsError(Exception):
    """Base class for all package errors."""

    code = "Error"

    def to_dict(self):
        return {"error": self.code, "message": str(self)}


class ValidationError(LatticeEffectsError):
    code = "ValidationError"


class ParseError(ValidationError):
    code = "ParseError"


class SchemaError(ValidationError):
    code = "SchemaError"


class BudgetExceeded(ValidationError):
    code = "BudgetExceeded"


class PreorderViolation(ValidationError):
    """Relation fails reflexivity or transitivity.

    Both lists are always complete, whichever subclass is raised.
    """

    code = "PreorderViolation"

    def __init__(self, message, missing_reflexive=(), broken_transitivity=()):
        super().__init__(message)
        self.missing_reflexive = list(missing_reflexive)
        self.broken_transitivity = list(broken_transitivity)

    def to_dict(self):
        d = super().to_dict()
        d["missing_reflexive"] = self.missing_reflexive
        d["broken_transitivity"] = [list(t) for t in self.broken_transitivity]
        return d


class MissingReflexive(PreorderViolation):
    code = "MissingReflexive"


class BrokenTransitivity(PreorderViolation):
    code = "BrokenTransitivity"


class NotAntisymmetric(ValidationError):
    code = "NotAntisymmetric"

    def __init__(self, message, pairs=()):
        super().__init__(message)
        self.pairs = list(pairs)


class NotCocomplete(ValidationError):
    code = "NotCocomplete"


class GroundSetTooLarge(ValidationError):
    code = "GroundSetTooLarge"


class SpaceTooLarge(ValidationError):
    code = "SpaceTooLarge"


class PosetTooLarge(ValidationError):
    code = "PosetTooLarge"


class NotMonotone(ValidationError):
    code = "NotMonotone"

    def __init__(self, message, witness=None):
        super().__init__(message)
        self.witness = witness

    def to_dict(self):
        d = super().to_dict()
        d["witness"] = None if self.witness is None else list(self.witness)
        return d


class AxiomViolation(ValidationError):
    """A self-map failed closure or kernel axioms.

    ``violations`` maps axiom name to a witness tuple of element indices.
    """

    code = "AxiomViolation"

    def __init__(self, message, violations):
        super().__init__(message)
        self.violations = dict(violations)

    def to_dict(self):
        d = super().to_dict()
        d["violations"] = {k: list(v) for k, v in self.violations.items()}
        return d


class NotMooreFamily(ValidationError):
    code = "NotMooreFamily"


class NoMinimumExplanation(ValidationError):
    """Some phenome has no least explaining system.

    ``minimal`` is the full antichain of minimal explanations (empty when
    nothing explains the phenome at all).
    """

    code = "NoMinimumExplanation"

    def __init__(self, message, phenome, minimal):
        super().__init__(message)
        self.phenome = phenome
        self.minimal = list(minimal)

    def to_dict(self):
        d = super().to_dict()
        d["phenome"] = self.phenome
        d["minimal"] = self.minimal
        return d


class CarrierMismatch(ValidationError):
    code = "CarrierMismatch"


class MeetNotPreserved(ValidationError):
    code = "MeetNotPreserved"

    def __init__(self, message, witness):
        super().__init__(message)
        self.witness = tuple(witness)

    def to_dict(self):
        d = super().to_dict()
        d["witness"] = list(self.witness)
        return d


class GroundMismatch(ValidationError):
    code = "GroundMismatch"


class HorizonTooShort(ValidationError):
    code = "HorizonTooShort"


class NotInjective(ValidationError):
    code = "NotInjective"


class NotSurjective(ValidationError):
    code = "NotSurjective"


class PropositionViolation(LatticeEffectsError, AssertionError):
    """A proven property failed on validated input."""

    code = "PropositionViolation"
