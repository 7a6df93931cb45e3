"""Scales of finite Boolean algebras: orders, partial arithmetic, measures,
divisions, continued fractions, and the non-Archimedean comparison demo."""

from .algebra import (
    Algebra,
    AlgebraError,
    DuplicateLabelError,
    Element,
    MixedAlgebraError,
    OutsideIntervalError,
    SizeError,
    relative_complement,
    two_valued_homomorphisms,
)
from .scaling import (
    BOXTIMES,
    QUESTION,
    AxiomAViolationError,
    AxiomBViolationError,
    CycleInOrderError,
    Scale,
    Scaling,
    ScalingError,
    Undefined,
    VerificationReport,
    build_scaling,
    scaling_from_measures,
    verify_axioms,
    verify_scale_map,
)

__version__ = "0.1.0"
