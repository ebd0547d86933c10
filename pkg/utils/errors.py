"""
Error types for StarDev.

Every error raised by the library derives from StarDevError and carries the
exit code the CLI reports for it:
- 2: usage or name resolution problems
- 3: malformed input (workspace, CSV, probability weights)
- 4: a numerical precondition of an operation does not hold

They also derive from ValueError, so plain `except ValueError` still works.
"""


class StarDevError(ValueError):
    """Base class for all library errors."""
    exit_code = 1

    def to_dict(self):
        return {'error': type(self).__name__, 'message': str(self)}


# --- Usage / resolution (exit 2) ---

class UsageError(StarDevError):
    exit_code = 2


class UnknownName(UsageError):
    """A variable, functional, curve or G-family name does not resolve."""


class InvalidParameter(UsageError):
    """A scalar parameter is outside its admissible range."""


class InvalidProbability(InvalidParameter):
    """A probability level is outside the interval the operation accepts."""


class InvalidCounterexampleSize(InvalidParameter):
    """The counterexample needs an even atom count of at least 10."""


class SpaceMismatch(UsageError):
    """Two random variables that must share a ProbSpace do not."""


# --- Input format (exit 3) ---

class InputFormatError(StarDevError):
    exit_code = 3


class NonPositiveWeight(InputFormatError):
    pass


class WeightSumMismatch(InputFormatError):
    pass


class EmptySample(InputFormatError):
    pass


class LengthMismatch(InputFormatError):
    pass


class NonFiniteValue(InputFormatError):
    """NaN (or a non-finite input value) reached a place that only takes finite reals."""


class WorkspaceError(InputFormatError):
    pass


class CsvParseError(InputFormatError):
    def __init__(self, message, line=None):
        super().__init__(message)
        self.line = line

    def to_dict(self):
        data = super().to_dict()
        data['line'] = self.line
        return data


# --- Numerical preconditions (exit 4) ---

class NumericalPreconditionError(StarDevError):
    exit_code = 4


class GridTooCoarse(NumericalPreconditionError):
    def __init__(self, message, min_atom_prob=None):
        super().__init__(message)
        self.min_atom_prob = min_atom_prob

    def to_dict(self):
        data = super().to_dict()
        data['min_atom_prob'] = self.min_atom_prob
        return data


class NotStarShapedSet(NumericalPreconditionError):
    pass


class NotUpwardClosed(NumericalPreconditionError):
    pass


class BracketTooSmall(NumericalPreconditionError):
    pass


class ContractViolation(NumericalPreconditionError):
    pass


class InvariantViolation(NumericalPreconditionError):
    pass


class PreconditionFailed(NumericalPreconditionError):
    """A functional failed an audit that the requested command relies on."""
