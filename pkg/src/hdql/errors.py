"""Exception types shared across the library."""


class ConfigError(ValueError):
    """Invalid configuration value or combination of values."""


class DimensionMismatchError(ValueError):
    """Operands whose dimensions must agree do not."""


class EncodingError(ValueError):
    """State cannot be encoded: wrong arity or non-finite entries."""


class ActionError(IndexError):
    """Action index outside the action space."""


class SimilarityUndefinedError(ValueError):
    """Similarity requested against a zero-norm vector."""


class DivergenceError(RuntimeError):
    """Training produced a non-finite error term.

    Carries a ``context`` dict with whatever diagnostic values were at hand
    (action, target, prediction, episode, ...) so a failed trial can be
    reported without a debugger.
    """

    def __init__(self, message, context=None):
        super().__init__(message)
        self.context = dict(context) if context else {}


class EnvError(RuntimeError):
    """Environment protocol violation, e.g. stepping a finished episode."""


class SolverError(RuntimeError):
    """Iterative solver failed to reach its tolerance within its budget."""
