"""Symbolic expansion pipeline for a curve in affine arclength.

Starting from the frame recursion for the derivative decomposition
``c^(k) = phi_k c' + psi_k c''`` the pipeline produces the component
expansions f, g of the curve, the square root u of g, its compositional
inverse v, the composition h = f(v), and the even part of h, which is
the horizontal component of the chord-midpoint curve at the base point.

All coefficients are exact differential polynomials, so the structure
results (leading coefficient laws, parity grading, the flatness and
straightness criteria) can be checked by identity rather than numerics.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from math import factorial

from .diffpoly import DiffPoly, GradedClass
from .errors import VerificationError
from .powerseries import ExplicitnessReport, Series
from .scalar import QR2Scalar

__all__ = [
    "FrameCoefficients",
    "Pipeline",
    "Lemma4Report",
    "build_frame",
    "build_pipeline",
    "wronskian_series",
    "lemma4_check",
    "h_leading_law",
    "theorem1_criterion",
    "theorem2_symbolic",
    "DEFAULT_ORDER",
    "MIN_ORDER",
    "MAX_ORDER",
]

DEFAULT_ORDER = 10
MIN_ORDER = 6
MAX_ORDER = 14


@dataclass(frozen=True)
class FrameCoefficients:
    """Decomposition coefficients phi_k, psi_k of the k-th derivative
    against the frame (c', c''); index 0 is padding and stays zero."""

    order: int
    phi: tuple[DiffPoly, ...]
    psi: tuple[DiffPoly, ...]


@dataclass(frozen=True)
class Pipeline:
    """All series of the expansion pipeline, truncated at one order."""

    order: int
    f: Series
    g: Series
    u: Series
    v: Series
    h: Series
    gravity_x: Series


def _kappa_or_zero(order: int) -> DiffPoly:
    return DiffPoly.kappa(order) if order >= 0 else DiffPoly.zero()


@lru_cache(maxsize=None)
def build_frame(order: int, corrupt: bool = False) -> FrameCoefficients:
    """Frame coefficients up to the given derivative order (>= 2).

    The recursion is phi[k+1] = phi[k]' - kappa * psi[k] and
    psi[k+1] = psi[k]' + phi[k].  ``corrupt`` flips the kappa sign in
    the phi step; it exists only as a fault-injection hook for the
    verifier self-test.
    """
    if order < 2:
        raise ValueError("frame needs order >= 2")
    zero = DiffPoly.zero()
    one = DiffPoly.constant(1)
    kappa = DiffPoly.kappa(0)
    phi = [zero, one, zero]
    psi = [zero, zero, one]
    sign = 1 if corrupt else -1
    for k in range(2, order):
        phi.append(phi[k].differentiate() + sign * kappa * psi[k])
        psi.append(psi[k].differentiate() + phi[k])
    return FrameCoefficients(order=order, phi=tuple(phi), psi=tuple(psi))


def component_series(frame: FrameCoefficients) -> tuple[Series, Series]:
    """The expansions (f, g) with coefficients phi_k / k! and psi_k / k!."""
    f = Series(
        [frame.phi[k] * Fraction(1, factorial(k)) for k in range(frame.order + 1)]
    )
    g = Series(
        [frame.psi[k] * Fraction(1, factorial(k)) for k in range(frame.order + 1)]
    )
    return f, g


@lru_cache(maxsize=None)
def build_pipeline(order: int = DEFAULT_ORDER) -> Pipeline:
    """Build every pipeline series exactly through the given order.

    Internally the frame is taken one order higher so that the square
    root, which loses one order, still reaches the requested truncation.
    """
    if order < MIN_ORDER:
        raise ValueError(f"pipeline needs order >= {MIN_ORDER}")
    frame = build_frame(order + 1)
    f_full, g_full = component_series(frame)
    u = g_full.sqrt(sign=1)
    v = u.compositional_inverse()
    h = f_full.compose(v)
    return Pipeline(
        order=order,
        f=f_full.truncate(order),
        g=g_full.truncate(order),
        u=u,
        v=v,
        h=h,
        gravity_x=h.even_part(),
    )


def wronskian_series(pipe: Pipeline) -> Series:
    """The series f' g'' - f'' g', the frame determinant along the curve.

    Exact through order N - 2; identically the constant series 1.
    """
    d1f, d1g = pipe.f.s_derivative(), pipe.g.s_derivative()
    d2f, d2g = d1f.s_derivative(), d1g.s_derivative()
    return d1f.mul(d2g) - d2f.mul(d1g)


@dataclass(frozen=True)
class Lemma4Report:
    """Explicitness data of f and g together with the scaled residuals."""

    order: int
    f_report: ExplicitnessReport
    g_report: ExplicitnessReport
    p_residuals: tuple[DiffPoly, ...]   # p[k] = k! f_k + kappa^(k-3)
    q_residuals: tuple[DiffPoly, ...]   # q[k] = k! g_k + (k-3) kappa^(k-4)


def lemma4_check(order: int, frame: FrameCoefficients | None = None) -> Lemma4Report:
    """Verify the explicit shape of f and g.

    Checks, for every k up to the order: the leading laws
    l_f[k] = -1/k! and l_g[k] = -(k-3)/k!, the residual class
    memberships, and the recursion-induced identities between
    consecutive residuals.  Raises VerificationError naming the first
    failing item.
    """
    if frame is None:
        frame = build_frame(order)
    f, g = component_series(frame)
    f_rep = f.explicitness(3)
    g_rep = g.explicitness(4)

    for k in range(3, order + 1):
        expect = QR2Scalar(Fraction(-1, factorial(k)))
        if f_rep.leading[k] != expect:
            raise VerificationError(
                "lemma4.leading.f", f"k={k}: got {f_rep.leading[k]}, want {expect}"
            )
    for k in range(4, order + 1):
        expect = QR2Scalar(Fraction(-(k - 3), factorial(k)))
        if g_rep.leading[k] != expect:
            raise VerificationError(
                "lemma4.leading.g", f"k={k}: got {g_rep.leading[k]}, want {expect}"
            )
    if not f_rep.is_explicit:
        raise VerificationError("lemma4.explicit.f", "f is not 3-explicit")
    if not g_rep.is_explicit:
        raise VerificationError("lemma4.explicit.g", "g is not 4-explicit")

    p = [frame.phi[k] + _kappa_or_zero(k - 3) for k in range(order + 1)]
    q = [
        frame.psi[k] + Fraction(k - 3) * _kappa_or_zero(k - 4)
        for k in range(order + 1)
    ]
    kappa = DiffPoly.kappa(0)
    for k in range(order + 1):
        if not p[k].in_class(GradedClass(k - 5, k + 1)):
            raise VerificationError("lemma4.residual.f", f"p_{k} = {p[k]} not in P^{k-5}")
        if not q[k].in_class(GradedClass(k - 6, k)):
            raise VerificationError("lemma4.residual.g", f"q_{k} = {q[k]} not in P^{k-6}")
    # recursion identities; below k = 4 the vanished negative-order terms
    # make the formal bookkeeping differ, so start where all orders exist
    for k in range(4, order + 1):
        want_p = (
            p[k - 1].differentiate()
            + Fraction(k - 4) * kappa * _kappa_or_zero(k - 5)
            - kappa * q[k - 1]
        )
        if p[k] != want_p:
            raise VerificationError(
                "lemma4.induction.p", f"k={k}: p_k = {p[k]}, recursion gives {want_p}"
            )
    for k in range(3, order + 1):
        want_q = q[k - 1].differentiate() + p[k - 1]
        if q[k] != want_q:
            raise VerificationError(
                "lemma4.induction.q", f"k={k}: q_k = {q[k]}, recursion gives {want_q}"
            )
    return Lemma4Report(
        order=order,
        f_report=f_rep,
        g_report=g_rep,
        p_residuals=tuple(p),
        q_residuals=tuple(q),
    )


def h_leading_law(order: int = DEFAULT_ORDER) -> list[QR2Scalar]:
    """Leading coefficients of h, checked two independent ways.

    Returns the list l_h[0..order] where l_h[k] = -3 sqrt(2)^k / (k+1)!
    for k >= 3.  Verifies the direct extraction from h and the
    composition route through the leading laws of g, u and v; raises
    VerificationError on any mismatch.
    """
    pipe = build_pipeline(order)
    h_rep = pipe.h.explicitness(3)
    u_rep = pipe.u.explicitness(3)
    v_rep = pipe.v.explicitness(3)
    # l_g is needed one index past the pipeline order for the sqrt step
    _, g_ext = component_series(build_frame(order + 1))
    g_lead = g_ext.explicitness(4).leading

    sqrt2 = QR2Scalar.sqrt2()
    u1 = pipe.u[1].constant_value()
    v1 = pipe.v[1].constant_value()
    f1 = pipe.f[1].constant_value()
    if (u1, v1, f1) != (QR2Scalar(0, Fraction(1, 2)), sqrt2, QR2Scalar(1)):
        raise VerificationError("hlaw.setup", f"u1={u1}, v1={v1}, f1={f1}")

    for k in range(3, order + 1):
        expect = QR2Scalar(-3) * sqrt2**k * Fraction(1, factorial(k + 1))
        if h_rep.leading[k] != expect:
            raise VerificationError(
                "hlaw.extracted", f"k={k}: got {h_rep.leading[k]}, want {expect}"
            )
        # square-root step: l_u[k] = l_g[k+1] / sqrt2 since g2 = 1/2
        lu = g_lead[k + 1] / sqrt2
        if u_rep.leading[k] != lu:
            raise VerificationError(
                "hlaw.sqrt_step", f"k={k}: got {u_rep.leading[k]}, want {lu}"
            )
        # inverse step: l_v[k] = -u1^(-k-1) l_u[k]
        lv = -(u1 ** (-k - 1)) * lu
        if v_rep.leading[k] != lv:
            raise VerificationError(
                "hlaw.inverse_step", f"k={k}: got {v_rep.leading[k]}, want {lv}"
            )
        # composition step: l_h[k] = f1 l_v[k] + v1^k l_f[k]
        lf = QR2Scalar(Fraction(-1, factorial(k)))
        lh = f1 * lv + v1**k * lf
        if lh != expect:
            raise VerificationError(
                "hlaw.composed", f"k={k}: composition route gives {lh}, want {expect}"
            )
    return list(h_rep.leading)


def theorem1_criterion(order: int = MIN_ORDER) -> DiffPoly:
    """The quartic coefficient of h, which controls flatness.

    Asserts the exact value -k1/10 and returns it; a base point gives a
    flat chord-midpoint curve exactly when this evaluates to zero, i.e.
    when the curvature has vanishing derivative there.
    """
    pipe = build_pipeline(order)
    expect = DiffPoly.monomial(Fraction(-1, 10), {1: 1})
    if pipe.h[4] != expect:
        raise VerificationError("theorem1.h4", f"h_4 = {pipe.h[4]}, want {expect}")
    return pipe.h[4]


def theorem2_symbolic(order: int = DEFAULT_ORDER) -> bool:
    """Check both directions of the straight-line characterization.

    Structural direction: every even-index coefficient of h consists of
    monomials carrying at least one odd-order derivative, so it dies
    when the curvature is even about the base point.  Induction
    direction: setting the even coefficients to zero successively forces
    each odd derivative to vanish, because h_{2j} is triangular: a
    nonzero constant times k(2j-3) plus terms using only lower odd
    derivatives.  Raises VerificationError with a counterexample on
    failure; returns True otherwise.
    """
    pipe = build_pipeline(order)
    leading = pipe.h.explicitness(3).leading
    for k in range(0, order + 1, 2):
        killed = pipe.h[k].kill_odd_derivatives()
        if not killed.is_zero:
            raise VerificationError(
                "theorem2.structural", f"h_{k} survives killing odd derivatives: {killed}"
            )
        if k < 4:
            if pipe.h[k]:
                raise VerificationError("theorem2.low_order", f"h_{k} = {pipe.h[k]} nonzero")
            continue
        if not leading[k]:
            raise VerificationError("theorem2.leading", f"l_h[{k}] vanishes")
        residual = pipe.h[k] - DiffPoly.monomial(leading[k], {k - 3: 1})
        lower_odd = {o: 0 for o in range(1, k - 3, 2)}
        reduced = residual.substitute_partial(lower_odd)
        if not reduced.is_zero:
            raise VerificationError(
                "theorem2.triangular",
                f"h_{k} residual keeps {reduced} after zeroing lower odd derivatives",
            )
    return True
