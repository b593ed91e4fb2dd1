"""Command-line front end: symbolic expansion, identity verification,
and chord-midpoint experiments on built-in curve fixtures."""

from __future__ import annotations

import json
import math
import os
import random
from dataclasses import dataclass

import click
import numpy as np

from . import expansion, numcurve
from .diffpoly import DiffPoly, GradedClass
from .errors import AffGravError, BracketingError, VerificationError
from .expansion import DEFAULT_ORDER, MAX_ORDER, MIN_ORDER, build_pipeline
from .powerseries import bell, bell_via_conv

__all__ = ["main", "Config", "parse_fixture"]

_ORDER_OPTION = click.IntRange(MIN_ORDER, MAX_ORDER)


@dataclass(frozen=True)
class Config:
    """Validated bundle of the numeric experiment parameters."""

    order: int = DEFAULT_ORDER
    step: float = numcurve.DEFAULT_STEP
    delta0: float = 1e-3
    delta_ratio: float = 1.6
    delta_count: int = 8
    tol_flat: float = numcurve.DEFAULT_TOL_FLAT
    tol_straight: float | None = None
    output: str = "text"
    fixture: str = "parabola"
    point: float = 0.0
    sweep: int = 0

    def validate(self) -> None:
        if not MIN_ORDER <= self.order <= MAX_ORDER:
            raise ValueError(f"order must be in [{MIN_ORDER}, {MAX_ORDER}]")
        if self.step <= 0:
            raise ValueError("step must be positive")
        if self.delta0 <= 0 or self.delta_ratio <= 1 or self.delta_count < 1:
            raise ValueError("height schedule needs delta0 > 0, ratio > 1, count >= 1")
        if self.tol_flat <= 0:
            raise ValueError("tol-flat must be positive")
        if self.tol_straight is not None and self.tol_straight <= 0:
            raise ValueError("tol-straight must be positive")

    def deltas(self) -> np.ndarray:
        return numcurve.default_deltas(self.delta0, self.delta_ratio, self.delta_count)


# -- fixtures -------------------------------------------------------------------


def parse_fixture(text: str):
    """Resolve a fixture name into (curve spec, curvature derivative fn).

    Supported: parabola, circle, ellipse[:a,b], hyperbola,
    kappa-poly:c0,c1,...  The second return value maps a base point to
    the analytic derivative of the affine curvature there.
    """
    name, _, argtext = text.partition(":")
    args = [float(v) for v in argtext.split(",") if v] if argtext else []
    if name == "parabola":
        spec = numcurve.ParametricCurveSpec(lambda u: (u, u * u / 2), (-1.0, 1.0))
        return spec, lambda p: 0.0
    if name == "circle":
        spec = numcurve.ParametricCurveSpec(
            lambda u: (math.cos(u), math.sin(u)), (-1.0, 1.0)
        )
        return spec, lambda p: 0.0
    if name == "ellipse":
        a, b = args if args else (2.0, 1.0)
        if len(args) not in (0, 2) or a <= 0 or b <= 0:
            raise ValueError("ellipse takes two positive semi-axes, e.g. ellipse:2,1")
        spec = numcurve.ParametricCurveSpec(
            lambda u: (a * math.cos(u), b * math.sin(u)), (-1.0, 1.0)
        )
        return spec, lambda p: 0.0
    if name == "hyperbola":
        spec = numcurve.ParametricCurveSpec(
            lambda u: (math.cosh(u), -math.sinh(u)), (-1.0, 1.0)
        )
        return spec, lambda p: 0.0
    if name == "kappa-poly":
        if not args:
            raise ValueError("kappa-poly needs coefficients, e.g. kappa-poly:0,1")
        coeffs = list(args)

        def kappa(s: float) -> float:
            total = 0.0
            for c in reversed(coeffs):
                total = total * s + c
            return total

        def kappa_prime(p: float) -> float:
            total = 0.0
            for i in range(len(coeffs) - 1, 0, -1):
                total = total * p + i * coeffs[i]
            return total

        return numcurve.KappaCurveSpec(kappa, half_width=1.0), kappa_prime
    raise ValueError(f"unknown fixture {text!r}")


def build_fixture_curve(cfg: Config) -> tuple[numcurve.NumCurve, object]:
    spec, kprime = parse_fixture(cfg.fixture)
    if isinstance(spec, numcurve.KappaCurveSpec):
        curve = numcurve.integrate_from_kappa(spec, step=cfg.step)
    else:
        curve = numcurve.reparametrize_affine(spec, step=cfg.step)
    return curve, kprime


# -- verification suites -----------------------------------------------------------


def _random_poly_in_class(rng: random.Random, k: int, sigma: int) -> DiffPoly:
    """Random nonzero member of the graded class (k, sigma), k >= 1."""
    poly = DiffPoly.zero()
    for _ in range(rng.randint(1, 3)):
        mono = DiffPoly.constant(rng.randint(1, 5) - 3 or 1)
        for _ in range(rng.randint(0, 3)):
            mono = mono * DiffPoly.kappa(rng.randint(0, k))
        d = sum(m.odd_degree() for m in mono.monomials())
        if d % 2 != sigma % 2:
            mono = mono * DiffPoly.kappa(1 if k >= 1 else 0)
        poly = poly + mono
    if poly.is_zero or not poly.in_class(GradedClass(k, sigma)):
        return DiffPoly.kappa(1) if sigma % 2 else DiffPoly.kappa(0)
    return poly


def _suite_grading_closure(order: int, seed: int) -> None:
    rng = random.Random(seed)
    for case in range(40):
        k1, k2 = rng.randint(1, 4), rng.randint(1, 4)
        s1, s2 = rng.randint(0, 1), rng.randint(0, 1)
        p = _random_poly_in_class(rng, k1, s1)
        q = _random_poly_in_class(rng, k2, s2)
        bound = GradedClass(k1, s1) * GradedClass(k2, s2)
        if not (p * q).in_class(bound):
            raise VerificationError(
                "grading.product", f"case {case}: ({p})*({q}) escapes {bound}"
            )
        if not p.differentiate().in_class(GradedClass(k1 + 1, s1 + 1)):
            raise VerificationError(
                "grading.derivative", f"case {case}: ({p})' escapes class"
            )
        left = (p * q).differentiate()
        right = p.differentiate() * q + p * q.differentiate()
        if left != right:
            raise VerificationError("grading.leibniz", f"case {case}: {p}, {q}")


def _suite_bell_identity(order: int, seed: int) -> None:
    generic = [DiffPoly.zero()] + [DiffPoly.kappa(i) for i in range(10)]
    for k in range(1, 10):
        for l in range(1, k + 1):
            direct = bell(k, l, generic)
            via = bell_via_conv(k, l, generic)
            if direct != via:
                raise VerificationError("bell.identity", f"k={k}, l={l}")


def _suite_wronskian(order: int, seed: int) -> None:
    w = expansion.wronskian_series(build_pipeline(order))
    if w[0] != 1 or any(w[i] for i in range(1, w.order + 1)):
        raise VerificationError("wronskian.series", f"got {w.to_strings()}")


def _suite_lemma4(order: int, seed: int) -> None:
    expansion.lemma4_check(order)


def _suite_h_leading(order: int, seed: int) -> None:
    expansion.h_leading_law(order)


def _suite_theorem1(order: int, seed: int) -> None:
    expansion.theorem1_criterion(order)


def _suite_theorem2(order: int, seed: int) -> None:
    expansion.theorem2_symbolic(order)


_SUITES = [
    ("grading_closure", _suite_grading_closure),
    ("bell_identity", _suite_bell_identity),
    ("wronskian_series", _suite_wronskian),
    ("lemma4", _suite_lemma4),
    ("h_leading_law", _suite_h_leading),
    ("theorem1", _suite_theorem1),
    ("theorem2", _suite_theorem2),
]


def run_verification(order: int, seed: int) -> list[dict]:
    results = []
    for name, fn in _SUITES:
        try:
            fn(order, seed)
            results.append({"name": name, "ok": True, "detail": ""})
        except VerificationError as exc:
            results.append({"name": name, "ok": False, "detail": f"{exc.check}: {exc.detail}"})
    return results


# -- output helpers ------------------------------------------------------------------


def _echo_json(obj) -> None:
    click.echo(json.dumps(obj, sort_keys=True, indent=2))


def _seed_from_env() -> int:
    raw = os.environ.get("AFFGRAV_SEED", "0")
    try:
        return int(raw)
    except ValueError:
        raise click.UsageError(f"AFFGRAV_SEED must be an integer, got {raw!r}")


# -- commands ---------------------------------------------------------------------------


@click.group()
def main() -> None:
    """Exact expansion machinery and chord-midpoint experiments for
    non-degenerate plane curves in affine arclength."""


@main.command("expand")
@click.option("--order", type=_ORDER_OPTION, default=DEFAULT_ORDER, show_default=True)
@click.option(
    "--format", "fmt", type=click.Choice(["text", "json"]), default="text", show_default=True
)
def cmd_expand(order: int, fmt: str) -> None:
    """Print the pipeline series f, g, u, v, h and the midpoint-curve
    abscissa through the given order."""
    pipe = build_pipeline(order)
    series = {
        "f": pipe.f,
        "g": pipe.g,
        "u": pipe.u,
        "v": pipe.v,
        "h": pipe.h,
        "gravity_x": pipe.gravity_x,
    }
    if fmt == "json":
        _echo_json(
            {
                "order": order,
                "series": {name: s.to_json_dict() for name, s in series.items()},
            }
        )
        return
    for name, s in series.items():
        for k in range(s.order + 1):
            click.echo(f"{name}[{k}] = {s[k]}")
        click.echo("")


@main.command("verify")
@click.option("--order", type=_ORDER_OPTION, default=DEFAULT_ORDER, show_default=True)
@click.option(
    "--format", "fmt", type=click.Choice(["text", "json"]), default="text", show_default=True
)
@click.option(
    "--self-test",
    is_flag=True,
    help="Inject a sign fault into the frame recursion and confirm the checks catch it.",
)
@click.pass_context
def cmd_verify(ctx: click.Context, order: int, fmt: str, self_test: bool) -> None:
    """Run the symbolic identity suite; nonzero exit on any failure."""
    seed = _seed_from_env()
    if self_test:
        corrupted = expansion.build_frame(order, corrupt=True)
        try:
            expansion.lemma4_check(order, frame=corrupted)
        except VerificationError as exc:
            click.echo(f"SELF-TEST OK: detected {exc.check}")
            ctx.exit(0)
        click.echo("SELF-TEST FAILED: injected fault was not detected", err=True)
        ctx.exit(1)

    results = run_verification(order, seed)
    ok = all(r["ok"] for r in results)
    if fmt == "json":
        _echo_json({"order": order, "seed": seed, "suites": results, "pass": ok})
    else:
        click.echo(f"seed: {seed}")
        for r in results:
            mark = "PASS" if r["ok"] else "FAIL"
            line = f"{mark} {r['name']}"
            if r["detail"]:
                line += f": {r['detail']}"
            click.echo(line)
        if ok:
            click.echo(f"PASS: {len(results)} suites")
        else:
            failed = sum(not r["ok"] for r in results)
            click.echo(f"FAIL: {failed} of {len(results)} suites")
    ctx.exit(0 if ok else 1)


@main.command("gravity")
@click.option("--fixture", default="parabola", show_default=True)
@click.option("--point", type=float, default=0.0, show_default=True)
@click.option("--sweep", type=int, default=0, help="Number of base points; 0 = single point.")
@click.option("--step", type=float, default=numcurve.DEFAULT_STEP, show_default=True)
@click.option("--delta0", type=float, default=1e-3, show_default=True)
@click.option("--delta-ratio", type=float, default=1.6, show_default=True)
@click.option("--delta-count", type=int, default=8, show_default=True)
@click.option("--tol-flat", type=float, default=numcurve.DEFAULT_TOL_FLAT, show_default=True)
@click.option("--tol-straight", type=float, default=None)
@click.option(
    "--format",
    "fmt",
    type=click.Choice(["text", "json", "csv"]),
    default="text",
    show_default=True,
)
@click.pass_context
def cmd_gravity(
    ctx: click.Context,
    fixture: str,
    point: float,
    sweep: int,
    step: float,
    delta0: float,
    delta_ratio: float,
    delta_count: int,
    tol_flat: float,
    tol_straight: float | None,
    fmt: str,
) -> None:
    """Sample the chord-midpoint curve of a fixture and judge flatness
    and straightness."""
    cfg = Config(
        step=step,
        delta0=delta0,
        delta_ratio=delta_ratio,
        delta_count=delta_count,
        tol_flat=tol_flat,
        tol_straight=tol_straight,
        output=fmt,
        fixture=fixture,
        point=point,
        sweep=sweep,
    )
    try:
        cfg.validate()
        curve, kappa_prime = build_fixture_curve(cfg)
    except (ValueError, AffGravError) as exc:
        raise click.UsageError(str(exc))

    try:
        if sweep > 0:
            _gravity_sweep(cfg, curve)
        else:
            _gravity_single(cfg, curve, kappa_prime)
    except BracketingError as exc:
        click.echo(f"bracketing failure: {exc}", err=True)
        ctx.exit(2)


def _gravity_single(cfg: Config, curve, kappa_prime) -> None:
    local = numcurve.renormalize(curve, cfg.point)
    samples = numcurve.gravity_samples(local, cfg.deltas())
    kp = float(kappa_prime(cfg.point))
    flat = numcurve.fit_flatness(samples, kp, tol_flat=cfg.tol_flat)
    max_dev, straight = numcurve.straightness_test(samples, cfg.tol_straight)
    verdict = {
        "fixture": cfg.fixture,
        "point": cfg.point,
        "fit_coeffs": list(flat.fit_coeffs),
        "predicted_b": flat.predicted_b,
        "is_flat": flat.is_flat,
        "fit_residual": flat.residual,
        "max_dev": max_dev,
        "is_straight": bool(straight),
    }
    if cfg.output == "csv":
        click.echo("delta,s_minus,s_plus,midpoint_x")
        for s in samples:
            click.echo(f"{s.delta!r},{s.s_minus!r},{s.s_plus!r},{s.midpoint_x!r}")
        return
    if cfg.output == "json":
        verdict["samples"] = [
            {
                "delta": s.delta,
                "s_minus": s.s_minus,
                "s_plus": s.s_plus,
                "midpoint_x": s.midpoint_x,
            }
            for s in samples
        ]
        _echo_json(verdict)
        return
    click.echo(f"fixture {cfg.fixture} at point {cfg.point}")
    click.echo("delta          s_minus        s_plus         midpoint_x")
    for s in samples:
        click.echo(f"{s.delta:<14.6g} {s.s_minus:<14.8g} {s.s_plus:<14.8g} {s.midpoint_x: .6e}")
    click.echo(
        f"flat: {flat.is_flat} (b={flat.fit_coeffs[1]:.6g}, predicted {flat.predicted_b:.6g})"
    )
    click.echo(f"straight: {straight} (max_dev={max_dev:.3e})")


def _gravity_sweep(cfg: Config, curve) -> None:
    base_points = np.linspace(-0.5, 0.5, cfg.sweep)
    deltas = cfg.deltas()
    rows = []
    for p in base_points:
        local = numcurve.renormalize(curve, float(p))
        dev, ok = numcurve.straightness_test(
            numcurve.gravity_samples(local, deltas), cfg.tol_straight
        )
        rows.append({"point": float(p), "max_dev": dev, "is_straight": bool(ok)})
    overall = numcurve.corollary_sweep(curve, [float(p) for p in base_points], deltas, cfg.tol_straight)
    if cfg.output == "csv":
        click.echo("point,max_dev,is_straight")
        for r in rows:
            click.echo(f"{r['point']!r},{r['max_dev']!r},{int(r['is_straight'])}")
        return
    if cfg.output == "json":
        _echo_json(
            {
                "fixture": cfg.fixture,
                "sweep": cfg.sweep,
                "points": rows,
                "straight_everywhere": bool(overall),
            }
        )
        return
    click.echo(f"fixture {cfg.fixture}, sweep over {cfg.sweep} base points")
    for r in rows:
        click.echo(
            f"point {r['point']: .4f}: max_dev={r['max_dev']:.3e} straight={r['is_straight']}"
        )
    click.echo(f"straight everywhere: {overall}")


if __name__ == "__main__":
    main()
