from typing import Any, Dict, Optional


class MLLError(ValueError):
    """Base class for every domain error raised by the proof-net library."""

    code = 'mll_error'

    def __init__(self, message: str, **context: Any):
        super().__init__(message)
        self.message = message
        self.context = context

    def detail(self) -> Dict[str, Any]:
        """Structured detail used by the CLI error payload."""
        payload = {'message': self.message}
        payload.update(self.context)
        return payload


class FormulaSyntaxError(MLLError):
    code = 'syntax_error'

    def __init__(self, message: str, position: int, text: Optional[str] = None):
        super().__init__(message, position=position)
        self.position = position
        self.text = text

    def __str__(self) -> str:
        return f"{self.message} at position {self.position}"


class UnknownAddress(MLLError):
    code = 'unknown_address'


class NotPerfectMatching(MLLError):
    code = 'not_perfect_matching'


class PolarityMismatch(MLLError):
    code = 'polarity_mismatch'


class NotCorrect(MLLError):
    code = 'not_correct'

    def __init__(self, message: str, witness, reason: Optional[str] = None, cycle=()):
        super().__init__(message, witness=[list(choice) for choice in witness],
                         reason=reason, cycle=[list(edge) for edge in cycle])
        self.witness = tuple(witness)
        self.reason = reason


class SizeBoundExceeded(MLLError):
    code = 'size_bound_exceeded'


class InterfaceMismatch(MLLError):
    code = 'interface_mismatch'


class CutCycle(MLLError):
    code = 'cut_cycle'


class ShapeMismatch(MLLError):
    code = 'shape_mismatch'


class NotInvertible(MLLError):
    code = 'not_invertible'
