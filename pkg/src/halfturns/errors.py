"""Exception hierarchy shared by every module."""


class HalfTurnsError(Exception):
    """Base class for domain errors (CLI exit code 1 unless noted)."""


class DegenerateParams(HalfTurnsError):
    """rho0 = +-2: beta^4 = 1 and the representation formulas divide by zero."""


class DegenerateLines(HalfTurnsError):
    """Lines coincide or meet at angle 0/pi, so the complex distance has no positive real part."""


class DegenerateCircle(HalfTurnsError):
    """A half-turn fixes infinity; its invariant circle has no canonical diameter."""


class DegenerateSymbol(HalfTurnsError):
    """An entry of the Hilbert symbol vanishes."""


class NonSquarefree(HalfTurnsError):
    pass


class ScanExhausted(HalfTurnsError):
    pass


class PrecisionExhausted(HalfTurnsError):
    """Certification failed at the configured precision cap (CLI exit code 3)."""
