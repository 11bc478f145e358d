"""Exception hierarchy.

The CLI maps these onto exit codes: input problems are ``ModelError`` (3),
undecidable situations are ``OracleInapplicable`` / ``NonStabilization`` (2).
"""


class ThetaStratError(Exception):
    pass


class RankMismatch(ThetaStratError, ValueError):
    """Operands live on tori of different rank."""


class CocharacterMismatch(ThetaStratError, ValueError):
    """Truncated series graded by different cocharacters."""


class InsufficientTruncation(ThetaStratError):
    """A coefficient was requested below the cutoff of a truncated series."""


class NonConvergentSym(ThetaStratError, ValueError):
    """Sym of a generator with non-negative level has infinite level pieces."""


class ModelError(ThetaStratError, ValueError):
    """Malformed or inconsistent model / complex data."""

    def __init__(self, message, diagnostics=None):
        self.diagnostics = list(diagnostics or [])
        if self.diagnostics:
            message = message + ": " + "; ".join(self.diagnostics)
        super().__init__(message)


class OracleInapplicable(ThetaStratError):
    """The requested oracle's precondition does not hold."""


class NonStabilization(ThetaStratError):
    """A truncation-based computation did not stabilize within its bound."""


class NonUniqueDestabilizer(ThetaStratError):
    """Two distinct cocharacters attain the same maximal instability."""


class SupportLimitExceeded(ThetaStratError):
    """Too many coordinates for exhaustive support enumeration."""
