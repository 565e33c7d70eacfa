from typing import Optional


class ToolkitError(Exception):
    """Base class for all toolkit errors"""


class FormulaSyntaxError(ToolkitError):
    """Raised when formula text does not conform to the grammar"""

    def __init__(self, message: str, position: Optional[int] = None):
        self.position = position
        if position is not None:
            message = f"{message} (at position {position})"
        super().__init__(message)


class IllegalConnective(ToolkitError):
    """Raised when ->> is used outside the fc dialect or the f3 scheme"""


class IllegalValueForScheme(ToolkitError):
    """Raised when a valuation assigns a value the scheme does not admit"""


class InvalidModel(ToolkitError):
    """Raised when a model violates its frame or valuation constraints"""


class TooManyAtoms(ToolkitError):
    """Raised when a formula exceeds the enumeration limit"""


class UnknownLogic(ToolkitError):
    """Raised for an unrecognized logic or calculus tag"""


class NotAFixedPoint(ToolkitError):
    """Raised when a seeded iteration does not stabilize into a fixed point"""


class UniverseError(ToolkitError):
    """Raised when a sentence or set is not part of the sentence universe"""


class RealizationError(ToolkitError):
    """Raised for missing atoms or malformed realization input"""


class DerivationError(ToolkitError):
    """Raised for malformed derivation trees"""


class BudgetExceeded(ToolkitError):
    """Raised when proof search exhausts its node budget"""


class UnknownSuite(ToolkitError):
    """Raised for a lemma suite name that is not registered"""
