"""Exception types shared across the package."""


class ClearsearchError(Exception):
    """Base class for all library errors."""


class InvalidParameter(ClearsearchError, ValueError):
    """An argument violates an operation's contract."""


class NoRealRoots(ClearsearchError, ValueError):
    """The characteristic polynomial has no real roots: the requested
    competitive ratio is below the optimum for this ray count."""


class InfeasibleBudget(ClearsearchError, ValueError):
    """No nonempty strategy fits within the given budget."""


class DegenerateSystem(ClearsearchError, ArithmeticError):
    """The tight-constraint system produced a non-positive direction,
    signalling a step count outside the feasible range."""


class DisconnectedGraph(ClearsearchError, ValueError):
    """The operation requires a connected (sub)network."""


class TntpParseError(ClearsearchError, ValueError):
    """Malformed TNTP input; carries the offending line number."""

    def __init__(self, lineno: int, message: str):
        super().__init__(f"line {lineno}: {message}")
        self.lineno = lineno
