import json
import os
from pathlib import Path

import pytest
from click.testing import CliRunner

from affgrav.cli import main, parse_fixture
from affgrav.numcurve import KappaCurveSpec, ParametricCurveSpec

GOLDEN = Path(__file__).parent / "data" / "expand_order8.json"


@pytest.fixture()
def runner():
    return CliRunner()


class TestExpand:
    def test_json_quartic_coefficient(self, runner):
        result = runner.invoke(main, ["expand", "--order", "8", "--format", "json"])
        assert result.exit_code == 0
        data = json.loads(result.output)
        assert data["series"]["h"]["coeffs"][4] == "(-1/10)*k1"

    def test_text_mode_lists_inverse_series(self, runner):
        result = runner.invoke(main, ["expand", "--order", "6"])
        assert result.exit_code == 0
        assert "v[6] = (2/315)*k3 + (11/315)*k0*k1" in result.output

    def test_order_below_minimum_is_usage_error(self, runner):
        result = runner.invoke(main, ["expand", "--order", "5"])
        assert result.exit_code == 2

    def test_golden_file(self, runner):
        result = runner.invoke(main, ["expand", "--order", "8", "--format", "json"])
        assert result.exit_code == 0
        if os.environ.get("AFFGRAV_REGEN_GOLDEN") == "1":
            GOLDEN.write_text(result.output)
        assert result.output == GOLDEN.read_text()

    def test_json_is_byte_deterministic(self, runner):
        one = runner.invoke(main, ["expand", "--order", "7", "--format", "json"]).output
        two = runner.invoke(main, ["expand", "--order", "7", "--format", "json"]).output
        assert one == two


class TestVerify:
    def test_default_run_passes(self, runner):
        result = runner.invoke(main, ["verify", "--order", "8"])
        assert result.exit_code == 0
        assert "PASS: 7 suites" in result.output
        assert "seed: 0" in result.output

    def test_order_twelve_leading_law(self, runner):
        result = runner.invoke(main, ["verify", "--order", "12", "--format", "json"])
        assert result.exit_code == 0
        data = json.loads(result.output)
        assert data["pass"] is True
        assert {s["name"] for s in data["suites"]} >= {"h_leading_law", "theorem2"}

    def test_self_test_detects_injected_fault(self, runner):
        result = runner.invoke(main, ["verify", "--order", "8", "--self-test"])
        assert result.exit_code == 0
        assert "SELF-TEST OK: detected lemma4.leading.f" in result.output

    def test_seed_env_is_reported(self, runner):
        result = runner.invoke(main, ["verify", "--order", "8"], env={"AFFGRAV_SEED": "7"})
        assert result.exit_code == 0
        assert "seed: 7" in result.output


class TestGravity:
    def test_parabola_is_straight(self, runner):
        result = runner.invoke(
            main, ["gravity", "--fixture", "parabola", "--format", "json"]
        )
        assert result.exit_code == 0
        data = json.loads(result.output)
        assert data["is_straight"] is True
        assert data["is_flat"] is True
        assert abs(data["max_dev"]) < 1e-12

    def test_linear_curvature_quadratic_coefficient(self, runner):
        result = runner.invoke(
            main,
            ["gravity", "--fixture", "kappa-poly:0,1", "--point", "0", "--format", "json"],
        )
        assert result.exit_code == 0
        data = json.loads(result.output)
        assert data["fit_coeffs"][1] == pytest.approx(-0.1, abs=0.005)
        assert data["predicted_b"] == -0.1

    def test_ellipse_sweep(self, runner):
        result = runner.invoke(
            main,
            ["gravity", "--fixture", "ellipse:2,1", "--sweep", "8", "--format", "json"],
        )
        assert result.exit_code == 0
        data = json.loads(result.output)
        assert data["straight_everywhere"] is True
        assert len(data["points"]) == 8

    def test_csv_output_shape(self, runner):
        result = runner.invoke(
            main, ["gravity", "--fixture", "parabola", "--format", "csv"]
        )
        assert result.exit_code == 0
        lines = result.output.strip().splitlines()
        assert lines[0] == "delta,s_minus,s_plus,midpoint_x"
        assert len(lines) == 9
        first = lines[1].split(",")
        assert float(first[0]) == 1e-3
        assert float(first[1]) == pytest.approx(-float(first[2]), abs=1e-14)

    def test_csv_is_deterministic(self, runner):
        args = ["gravity", "--fixture", "circle", "--format", "csv"]
        assert runner.invoke(main, args).output == runner.invoke(main, args).output

    def test_bracketing_failure_exit_code(self, runner):
        result = runner.invoke(
            main, ["gravity", "--fixture", "parabola", "--delta0", "0.4"]
        )
        assert result.exit_code == 2

    def test_unknown_fixture(self, runner):
        result = runner.invoke(main, ["gravity", "--fixture", "nosuch"])
        assert result.exit_code == 2

    def test_invalid_schedule(self, runner):
        result = runner.invoke(
            main, ["gravity", "--fixture", "parabola", "--delta-ratio", "0.5"]
        )
        assert result.exit_code == 2


class TestFixtureParsing:
    def test_kappa_poly(self):
        spec, kprime = parse_fixture("kappa-poly:1,0,2")
        assert isinstance(spec, KappaCurveSpec)
        assert spec.kappa(0.5) == pytest.approx(1.5)   # 1 + 2 s^2
        assert kprime(0.5) == pytest.approx(2.0)       # 4 s

    def test_ellipse_defaults(self):
        spec, _ = parse_fixture("ellipse")
        assert isinstance(spec, ParametricCurveSpec)
        x, y = spec.xy(0.0)
        assert (x, y) == (2.0, 0.0)

    def test_rejects_garbage(self):
        with pytest.raises(ValueError):
            parse_fixture("kappa-poly:")
        with pytest.raises(ValueError):
            parse_fixture("ellipse:-1,1")
