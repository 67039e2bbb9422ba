"""Arithmeticity and splitting of Kleinian groups generated by three half-turns."""

from .arith import arithmeticity_test, hilbert_entries, invariant_trace_field, trace_field
from .balls import ComplexBall, RealBall, working_precision
from .errors import (
    DegenerateCircle,
    DegenerateLines,
    DegenerateParams,
    DegenerateSymbol,
    HalfTurnsError,
    NonSquarefree,
    PrecisionExhausted,
    ScanExhausted,
)
from .klein import annulus_bounds, circle_disjointness, compute_split_constants, conjecture_scan, splits_by_annulus
from .numberfield import FieldElement, NumberField, minimal_polynomial, subfield_generated
from .rep import HalfTurnTriple, Params, build_regular, build_representation

__version__ = "0.1.0"
