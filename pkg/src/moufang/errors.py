"""Exception hierarchy.

Input problems derive from ``ValueError``; ``CrossCheckError`` signals that an
internal double computation disagreed, which means a bug rather than bad input.
"""


class LoopError(Exception):
    """Base class for every error raised by this package."""

    def __init__(self, message="", witness=None):
        super().__init__(message)
        self.witness = witness


class InputError(LoopError, ValueError):
    pass


class ParseError(InputError):
    def __init__(self, message, line=None, column=None):
        loc = ""
        if line is not None:
            loc = f"line {line}" + (f", column {column}" if column is not None else "")
            message = f"{loc}: {message}"
        super().__init__(message, witness=(line, column))
        self.line = line
        self.column = column


class NotLatinSquare(InputError):
    pass


class NoIdentity(InputError):
    pass


class NotALoop(InputError):
    pass


class NotAGroup(InputError):
    pass


class NotPowerAssociative(InputError):
    pass


class NotMoufang(InputError):
    pass


class NotThreeDivisible(InputError):
    pass


class NotNormal(InputError):
    pass


class NotASubgroup(InputError):
    pass


class NotCommutative(InputError):
    pass


class NotInKernel(InputError):
    pass


class BetaDoesNotFixIdentity(InputError):
    pass


class NotAbelianCongruence(InputError):
    pass


class BadTransversal(InputError):
    pass


class NucleusNotTrivial(InputError):
    pass


class NotSolvable(InputError):
    pass


class NotTriality(InputError):
    pass


class UnknownSuite(InputError):
    pass


class CapExceeded(LoopError):
    """Group enumeration passed the configured element cap."""

    def __init__(self, cap, count, what="group"):
        super().__init__(f"{what}: more than {cap} elements (enumerated {count} so far)")
        self.cap = cap
        self.count = count
        self.what = what


class NotExtendable(LoopError):
    """A generator assignment does not extend to a group automorphism."""


class OrbitTrivial(LoopError):
    pass


class EmptyCore(LoopError):
    pass


class CrossCheckError(LoopError, AssertionError):
    """Two independent computations of the same object disagree."""


class CertificationFailed(CrossCheckError):
    pass


class NoCompanion(CrossCheckError):
    pass
