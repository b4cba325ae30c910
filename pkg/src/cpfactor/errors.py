"""Exception types raised across the package."""


class CpFactorError(Exception):
    """Base class for all errors raised by cpfactor."""


class CapExceeded(CpFactorError):
    pass


class DomainMismatch(CpFactorError):
    pass


class NotNormal(CpFactorError):
    pass


class ParentMismatch(CpFactorError):
    pass


class NotPGroup(CpFactorError):
    pass


class BoundExceeded(CpFactorError):
    pass


class NotSolvable(CpFactorError):
    pass


class NotSimple(CpFactorError):
    pass


class NotRankOne(CpFactorError):
    pass


class UnsupportedParameter(CpFactorError):
    pass


class VerificationFailed(CpFactorError):
    pass


class FixedVector(CpFactorError):
    pass


class NotIrreducible(CpFactorError):
    pass


class NotCoreFree(CpFactorError):
    pass


class HypothesisFailed(CpFactorError):
    """A computational check of a lemma's hypothesis did not hold."""

    def __init__(self, clause, detail=""):
        self.clause = clause
        msg = f"hypothesis failed: {clause}"
        if detail:
            msg += f" ({detail})"
        super().__init__(msg)


class SpecParseError(CpFactorError):
    """Malformed group specification; carries the offending column."""

    def __init__(self, text, pos, message):
        self.text = text
        self.pos = pos
        caret = " " * pos + "^"
        super().__init__(f"{message} at column {pos}\n  {text}\n  {caret}")
