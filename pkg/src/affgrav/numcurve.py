"""Numerically realized affine-arclength curves and chord-midpoint sampling.

Curves enter either as a prescribed curvature function (integrated with
classical RK4 through ``c''' = -kappa c'``) or as a parametric plot that
gets reparametrized to affine arclength.  Both produce a uniform grid of
points together with first and second derivative frames, normalized so
the base point sits at the origin with frame (e1, e2).

On top of that sit the desk-scale experiments: locating the two chord
intersections at a given height by bisection, collecting the chord
midpoints, and estimating flatness and straightness of the resulting
midpoint curve.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable, Sequence

import numpy as np

from .errors import BracketingError, DegenerateCurveError, VerificationError

__all__ = [
    "KappaCurveSpec",
    "ParametricCurveSpec",
    "NumCurve",
    "GravitySample",
    "FlatnessResult",
    "integrate_from_kappa",
    "reparametrize_affine",
    "renormalize",
    "affine_curvature",
    "gravity_samples",
    "fit_flatness",
    "straightness_test",
    "corollary_sweep",
    "default_deltas",
    "wronskian_drift",
    "DEFAULT_STEP",
    "DEFAULT_TOL_FLAT",
    "TOL_STRAIGHT_FACTOR",
]

DEFAULT_STEP = 1e-3
DEFAULT_TOL_FLAT = 1e-3
TOL_STRAIGHT_FACTOR = 1e-6
ROOT_TOL = 1e-12

# finite-difference steps per derivative order for O(du^4) central
# stencils.  Kept wide: the white part of the roundoff error, eps/du^n
# from the callable's rounded output, feeds node-to-node jitter of the
# stored frames that the curvature estimator later divides by the grid
# step; truncation stays far below it at these widths.
_DU1 = 2e-3
_DU2 = 1e-2
_DU3 = 1.2e-2


@dataclass(frozen=True)
class KappaCurveSpec:
    """Curve given by its affine curvature along arclength."""

    kappa: Callable[[float], float]
    half_width: float = 1.0


@dataclass(frozen=True)
class ParametricCurveSpec:
    """Curve given as a parametric plot on a parameter interval.

    Must be non-degenerate: det[c_u, c_uu] > 0 throughout the domain.
    """

    xy: Callable[[float], tuple[float, float]]
    domain: tuple[float, float]


@dataclass(frozen=True)
class NumCurve:
    """Affine-arclength curve sampled on a uniform grid.

    ``points[i]`` is the curve at ``grid[i]``; ``d1`` and ``d2`` hold the
    first and second derivative frames.  After normalization the node at
    s = 0 sits at the origin with frame (e1, e2).
    """

    grid: np.ndarray
    points: np.ndarray
    d1: np.ndarray
    d2: np.ndarray
    step: float

    def __len__(self) -> int:
        return len(self.grid)

    def center_index(self) -> int:
        return int(np.argmin(np.abs(self.grid)))

    def index_of(self, s: float) -> int:
        j = int(round((s - self.grid[0]) / self.step))
        if not 0 <= j < len(self.grid):
            raise ValueError(f"s={s} outside grid [{self.grid[0]}, {self.grid[-1]}]")
        return j


@dataclass(frozen=True)
class GravitySample:
    """One chord-midpoint measurement at height delta."""

    delta: float
    s_minus: float
    s_plus: float
    midpoint_x: float


@dataclass(frozen=True)
class FlatnessResult:
    """Least-squares view of the midpoint abscissa as a function of height."""

    fit_coeffs: tuple[float, float, float]
    predicted_b: float
    is_flat: bool
    residual: float


def default_deltas(delta0: float = 1e-3, ratio: float = 1.6, count: int = 8) -> np.ndarray:
    """Geometric schedule of chord heights."""
    return delta0 * ratio ** np.arange(count)


def _cross(a: np.ndarray, b: np.ndarray) -> np.ndarray:
    return a[..., 0] * b[..., 1] - a[..., 1] * b[..., 0]


def wronskian_drift(curve: NumCurve) -> float:
    """Maximum deviation of the frame determinant from 1 over the grid."""
    return float(np.max(np.abs(_cross(curve.d1, curve.d2) - 1.0)))


# -- integration from curvature ---------------------------------------------


def integrate_from_kappa(
    spec: KappaCurveSpec,
    step: float = DEFAULT_STEP,
    half_width: float | None = None,
) -> NumCurve:
    """Integrate c''' = -kappa c' with RK4 from the normalized frame at 0.

    The state (c, c', c'') starts at ((0,0), e1, e2) and is integrated in
    both directions over [-half_width, half_width] with fixed step.
    """
    if step <= 0:
        raise ValueError("step must be positive")
    width = spec.half_width if half_width is None else half_width
    n = int(round(width / step))
    if n < 1:
        raise ValueError("domain narrower than one step")
    kappa = spec.kappa

    def rk4(y: np.ndarray, s: float, h: float) -> np.ndarray:
        def rhs(si, yi):
            return np.array([yi[1], yi[2], -kappa(si) * yi[1]])

        k1 = rhs(s, y)
        k2 = rhs(s + h / 2, y + (h / 2) * k1)
        k3 = rhs(s + h / 2, y + (h / 2) * k2)
        k4 = rhs(s + h, y + h * k3)
        return y + (h / 6) * (k1 + 2 * k2 + 2 * k3 + k4)

    y0 = np.array([[0.0, 0.0], [1.0, 0.0], [0.0, 1.0]])
    states = [None] * (2 * n + 1)
    states[n] = y0
    y = y0
    for i in range(n):
        y = rk4(y, i * step, step)
        states[n + 1 + i] = y
    y = y0
    for i in range(n):
        y = rk4(y, -i * step, -step)
        states[n - 1 - i] = y

    arr = np.array(states)
    grid = np.arange(-n, n + 1) * step
    return NumCurve(grid=grid, points=arr[:, 0], d1=arr[:, 1], d2=arr[:, 2], step=step)


# -- reparametrization of parametric curves -------------------------------------


def _xy_array(fn, us: np.ndarray) -> np.ndarray:
    out = np.empty((len(us), 2))
    for i, u in enumerate(us):
        x, y = fn(float(u))
        out[i, 0] = x
        out[i, 1] = y
    return out


def _fd1(fn, us: np.ndarray) -> np.ndarray:
    du = _DU1
    m2, m1 = _xy_array(fn, us - 2 * du), _xy_array(fn, us - du)
    p1, p2 = _xy_array(fn, us + du), _xy_array(fn, us + 2 * du)
    return (m2 - 8 * m1 + 8 * p1 - p2) / (12 * du)


def _fd2(fn, us: np.ndarray) -> np.ndarray:
    du = _DU2
    c0 = _xy_array(fn, us)
    m2, m1 = _xy_array(fn, us - 2 * du), _xy_array(fn, us - du)
    p1, p2 = _xy_array(fn, us + du), _xy_array(fn, us + 2 * du)
    return (-m2 + 16 * m1 - 30 * c0 + 16 * p1 - p2) / (12 * (du * du))


def _fd3(fn, us: np.ndarray) -> np.ndarray:
    du = _DU3
    m3, m2, m1 = (
        _xy_array(fn, us - 3 * du),
        _xy_array(fn, us - 2 * du),
        _xy_array(fn, us - du),
    )
    p1, p2, p3 = (
        _xy_array(fn, us + du),
        _xy_array(fn, us + 2 * du),
        _xy_array(fn, us + 3 * du),
    )
    return (m3 - 8 * m2 + 13 * m1 - 13 * p1 + 8 * p2 - p3) / (8 * (du * du * du))


def _cumulative_simpson(y: np.ndarray, dx: float) -> np.ndarray:
    """Cumulative integral on a uniform grid, O(dx^4), len(y) odd."""
    n = len(y)
    out = np.zeros(n)
    for i in range(2, n, 2):
        out[i] = out[i - 2] + dx * (y[i - 2] + 4 * y[i - 1] + y[i]) / 3
    for i in range(1, n, 2):
        # quadratic through the surrounding three nodes, first half only
        out[i] = out[i - 1] + dx * (5 * y[i - 1] + 8 * y[i] - y[i + 1]) / 12
    return out


def _lagrange4(xs: np.ndarray, ys: np.ndarray, x: float) -> float:
    total = 0.0
    for j in range(4):
        num, den = 1.0, 1.0
        for m in range(4):
            if m != j:
                num *= x - xs[m]
                den *= xs[j] - xs[m]
        total += ys[j] * (num / den)
    return total


def _window(xs: np.ndarray, x: float) -> int:
    """Start index of the 4-node interpolation window around x."""
    i = int(np.searchsorted(xs, x)) - 1
    return max(0, min(i - 1, len(xs) - 4))


def _interp_table(xs: np.ndarray, ys: np.ndarray, x: float) -> float:
    i = _window(xs, x)
    return _lagrange4(xs[i : i + 4], ys[i : i + 4], x)


def reparametrize_affine(
    spec: ParametricCurveSpec,
    samples: int = 4001,
    step: float = DEFAULT_STEP,
) -> NumCurve:
    """Resample a parametric curve by affine arclength.

    The arclength element is det[c_u, c_uu]^(1/3); its integral is
    accumulated with composite Simpson, inverted monotonically, and the
    curve resampled on a uniform grid.  Frames come from the chain rule
    on finite-difference derivatives of the plot.  The node nearest the
    middle of the parameter interval becomes the normalized base point.
    """
    if samples < 9:
        raise ValueError("need at least 9 samples")
    if samples % 2 == 0:
        samples += 1  # composite Simpson wants an odd node count
    u0, u1 = spec.domain
    if not u1 > u0:
        raise ValueError("empty parameter domain")
    us = np.linspace(u0, u1, samples)
    det = _cross(_fd1(spec.xy, us), _fd2(spec.xy, us))
    bad = np.nonzero(det <= 0)[0]
    if bad.size:
        j = int(bad[0])
        raise DegenerateCurveError(float(us[j]), float(det[j]))
    sigma = _cumulative_simpson(det ** (1.0 / 3.0), float(us[1] - us[0]))
    iref = int(np.argmin(np.abs(us - (u0 + u1) / 2)))
    sigma -= sigma[iref]

    n_neg = int(np.floor(-sigma[0] / step)) - 1
    n_pos = int(np.floor(sigma[-1] / step)) - 1
    if n_neg < 1 or n_pos < 1:
        raise ValueError("parameter domain too short for the requested grid step")
    grid = np.arange(-n_neg, n_pos + 1) * step

    u_of_s = np.array([_interp_table(sigma, us, s) for s in grid])
    u_of_s[n_neg] = us[iref]  # base node is a table node; keep it exact

    pts = _xy_array(spec.xy, u_of_s)
    c1 = _fd1(spec.xy, u_of_s)
    c2 = _fd2(spec.xy, u_of_s)
    c3 = _fd3(spec.xy, u_of_s)
    z = _cross(c1, c2)
    zp = _cross(c1, c3)
    d1 = c1 * (z ** (-1.0 / 3.0))[:, None]
    d2 = c2 * (z ** (-2.0 / 3.0))[:, None] - c1 * (zp / 3.0 * z ** (-5.0 / 3.0))[:, None]

    raw = NumCurve(grid=grid, points=pts, d1=d1, d2=d2, step=step)
    return renormalize(raw, 0.0)


def renormalize(curve: NumCurve, p: float) -> NumCurve:
    """Affinely move the base point to the grid node nearest p.

    The affine map sends (c(p), c'(p), c''(p)) to ((0,0), e1, e2); grid
    values shift so the base point reads s = 0.
    """
    j = curve.index_of(p)
    origin = curve.points[j]
    frame = np.column_stack([curve.d1[j], curve.d2[j]])
    inv = np.linalg.inv(frame)
    return NumCurve(
        grid=curve.grid - curve.grid[j],
        points=(curve.points - origin) @ inv.T,
        d1=curve.d1 @ inv.T,
        d2=curve.d2 @ inv.T,
        step=curve.step,
    )


# -- curvature and chords -----------------------------------------------------


def affine_curvature(curve: NumCurve, s: float) -> float:
    """det[c'', c'''] with c''' by central differences; error O(step^2)."""
    n = len(curve.grid)
    i = int(np.floor((s - curve.grid[0]) / curve.step))
    i = min(i, n - 2)
    if i - 1 < 0 or i + 2 > n - 1:
        raise ValueError(f"s={s} too close to the grid boundary")

    def node_kappa(j: int) -> float:
        c3 = (curve.d2[j + 1] - curve.d2[j - 1]) / (2 * curve.step)
        return float(_cross(curve.d2[j], c3))

    k0, k1 = node_kappa(i), node_kappa(i + 1)
    frac = (s - curve.grid[i]) / curve.step
    return (1 - frac) * k0 + frac * k1


def _chord_root(curve: NumCurve, direction: int, delta: float) -> float:
    g = curve.points[:, 1]
    i = curve.center_index()
    side = "right" if direction > 0 else "left"
    while True:
        j = i + direction
        if j < 0 or j >= len(g):
            raise BracketingError(delta, side)
        if g[j] >= delta:
            break
        i = j

    def gval(s: float) -> float:
        return _interp_table(curve.grid, g, s)

    lo, hi = curve.grid[i], curve.grid[j]
    flo, fhi = gval(lo) - delta, gval(hi) - delta
    if flo == 0.0:
        return float(lo)
    if fhi == 0.0:
        return float(hi)
    if (flo < 0) == (fhi < 0):
        raise BracketingError(delta, side)
    # bisect to bracket collapse; this lands far inside the |g - delta|
    # tolerance and keeps the root itself accurate to machine precision
    mid = 0.5 * (lo + hi)
    for _ in range(200):
        fm = gval(mid) - delta
        if fm == 0.0:
            break
        if (fm < 0) == (flo < 0):
            lo, flo = mid, fm
        else:
            hi, fhi = mid, fm
        nxt = 0.5 * (lo + hi)
        if nxt == mid or abs(hi - lo) <= 1e-17 * max(1.0, abs(mid)):
            break
        mid = nxt
    if abs(gval(mid) - delta) > ROOT_TOL:
        raise BracketingError(delta, side)
    return float(mid)


def gravity_samples(curve: NumCurve, deltas: Sequence[float]) -> list[GravitySample]:
    """Chord-midpoint samples at the given heights.

    The curve must be normalized at its base point.  Each height line is
    intersected with the sampled curve on both sides of the base point;
    roots are located by bisection on the cubic interpolant of the
    vertical component, midpoints from the cubic interpolant of the
    horizontal component.
    """
    f = curve.points[:, 0]
    out = []
    for delta in deltas:
        if delta <= 0:
            raise ValueError("chord height must be positive")
        s_plus = _chord_root(curve, +1, float(delta))
        s_minus = _chord_root(curve, -1, float(delta))
        f_plus = _interp_table(curve.grid, f, s_plus)
        f_minus = _interp_table(curve.grid, f, s_minus)
        out.append(
            GravitySample(
                delta=float(delta),
                s_minus=s_minus,
                s_plus=s_plus,
                midpoint_x=float(0.5 * (f_minus + f_plus)),
            )
        )
    return out


# -- verdicts ------------------------------------------------------------------


def fit_flatness(
    samples: Sequence[GravitySample],
    kappa_prime_p: float,
    tol_flat: float = DEFAULT_TOL_FLAT,
) -> FlatnessResult:
    """Fit midpoint_x(delta) = a delta + b delta^2 + c delta^3.

    The quadratic coefficient estimates the quartic coefficient of the
    underlying expansion, predicted as -kappa'(p)/10; a mismatch beyond
    max(1e-3, 5%) raises VerificationError.
    """
    if len(samples) < 6:
        raise ValueError("flatness fit needs at least 6 samples")
    deltas = np.array([s.delta for s in samples])
    xs = np.array([s.midpoint_x for s in samples])
    design = np.column_stack([deltas, deltas**2, deltas**3])
    coef, _, rank, _ = np.linalg.lstsq(design, xs, rcond=None)
    if rank < 3:
        raise ValueError("rank-deficient flatness fit; vary the heights")
    a, b, c = (float(t) for t in coef)
    predicted = -kappa_prime_p / 10.0
    if abs(b - predicted) > max(1e-3, 0.05 * abs(predicted)):
        raise VerificationError(
            "flatness.prediction", f"fitted b={b:.6g}, predicted {predicted:.6g}"
        )
    residual = float(np.sqrt(np.mean((design @ coef - xs) ** 2)))
    return FlatnessResult(
        fit_coeffs=(a, b, c),
        predicted_b=predicted,
        is_flat=abs(b) <= tol_flat,
        residual=residual,
    )


def straightness_test(
    samples: Sequence[GravitySample],
    tol_straight: float | None = None,
) -> tuple[float, bool]:
    """Maximum midpoint deviation and whether it stays within tolerance."""
    if not samples:
        raise ValueError("no samples")
    max_dev = float(max(abs(s.midpoint_x) for s in samples))
    if tol_straight is None:
        tol_straight = TOL_STRAIGHT_FACTOR * max(s.delta for s in samples)
    return max_dev, max_dev <= tol_straight


def corollary_sweep(
    curve: NumCurve,
    base_points: Sequence[float],
    deltas: Sequence[float] | None = None,
    tol_straight: float | None = None,
    kappa_spread_tol: float = 1e-4,
) -> bool:
    """Straightness at every base point, cross-checked against constant
    curvature.

    Returns True when the midpoint curve is straight at all base points.
    The verdict must agree with numerical constancy of the curvature
    over the same points; disagreement raises VerificationError.
    """
    if deltas is None:
        deltas = default_deltas()
    all_straight = True
    kappas = []
    for p in base_points:
        local = renormalize(curve, p)
        dev, ok = straightness_test(gravity_samples(local, deltas), tol_straight)
        all_straight = all_straight and ok
        kappas.append(affine_curvature(curve, p))
    spread = max(kappas) - min(kappas)
    scale = max(1.0, abs(float(np.mean(kappas))))
    kappa_constant = spread <= kappa_spread_tol * scale
    if kappa_constant != all_straight:
        raise VerificationError(
            "corollary.cross_check",
            f"straight everywhere={all_straight} but curvature spread={spread:.3g}",
        )
    return all_straight
