"""Exact expansion machinery and chord-midpoint experiments for
non-degenerate plane curves in affine arclength.

The symbolic half works over Q(sqrt2) with differential-polynomial
coefficients and proves the structural identities of the expansion
pipeline by exact computation.  The numeric half realizes curves from a
prescribed curvature or a parametric plot and measures flatness and
straightness of the chord-midpoint curve.
"""

from .diffpoly import DiffMonomial, DiffPoly, GradedClass, class_product_bound
from .errors import (
    AffGravError,
    BracketingError,
    DegenerateCurveError,
    MissingAssignmentError,
    VerificationError,
)
from .expansion import (
    FrameCoefficients,
    Lemma4Report,
    Pipeline,
    build_frame,
    build_pipeline,
    h_leading_law,
    lemma4_check,
    theorem1_criterion,
    theorem2_symbolic,
    wronskian_series,
)
from .numcurve import (
    FlatnessResult,
    GravitySample,
    KappaCurveSpec,
    NumCurve,
    ParametricCurveSpec,
    affine_curvature,
    corollary_sweep,
    default_deltas,
    fit_flatness,
    gravity_samples,
    integrate_from_kappa,
    renormalize,
    reparametrize_affine,
    straightness_test,
    wronskian_drift,
)
from .powerseries import ExplicitnessReport, Series, bell, bell_via_conv, conv
from .scalar import QR2Scalar, Rational

__version__ = "0.1.0"
