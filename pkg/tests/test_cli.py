"""End-to-end tests of the command-line interface.

Operator and function inputs are literal JSON strings on purpose: the
accepted wire schema is part of the contract, so drift breaks here.
"""

import json
import math
import subprocess
import sys

import pytest
from click.testing import CliRunner

from fracpde.cli import main, run_cli
from fracpde.functions import step
from fracpde.sobolev import estimate_regularity
from fracpde.spectral import BoxGrid, sample_field, solve_elliptic
from fracpde.symbols import FracSymbol

MONO_07 = '{"dim": 1, "terms": [{"c": [1.0, 0.0], "alpha": [0.7]}]}'
MONO_05 = '{"dim": 1, "terms": [{"c": [1.0, 0.0], "alpha": [0.5]}]}'
FRAC_LAP_2D = (
    '{"dim": 2, "terms": [{"c": [1.0, 0.0], "alpha": [0.5, 0.0]},'
    ' {"c": [1.0, 0.0], "alpha": [0.0, 0.5]}]}'
)
SADDLE_2D = (
    '{"dim": 2, "terms": [{"c": [1.0, 0.0], "alpha": [0.5, 0.0]},'
    ' {"c": [-1.0, 0.0], "alpha": [0.0, 0.5]}]}'
)

# D^{1/2} x at x = 1 is 2/sqrt(pi).
TWO_OVER_ROOT_PI = 1.1283791670955126


@pytest.fixture()
def runner():
    return CliRunner()


def _significant_digits(token: str) -> int:
    mantissa = token.split("e")[0].split("E")[0].replace("-", "").replace(".", "")
    return len(mantissa.lstrip("0"))


class TestDifferint:
    def test_power_half_derivative_at_one(self, runner):
        result = runner.invoke(main, ["differint", "--func", "power", "--nu", "0.5", "--at", "1"])
        assert result.exit_code == 0
        value = float(result.output.strip())
        assert value == pytest.approx(TWO_OVER_ROOT_PI, rel=1e-6)
        assert _significant_digits(result.output.strip()) >= 12

    def test_grid_output_is_csv(self, runner):
        args = ["-m", "64", "-L", "20", "-N", "128",
                "differint", "--func", "gaussian", "--nu", "0.5", "--c", "-inf", "--grid"]
        result = runner.invoke(main, args)
        assert result.exit_code == 0
        lines = result.output.strip().splitlines()
        assert lines[0] == "x,re,im"
        assert len(lines) == 65
        x, re, im = map(float, lines[40].split(","))
        assert math.isfinite(re) and abs(im) < 1e-10

    def test_fourier_agrees_with_quadrature_on_a_grid_point(self, runner):
        # x = 2.5 lies exactly on the 4096-point axis of [-20, 20), so the
        # comparison sees engine error only, not interpolation error.
        base = ["differint", "--func", "gaussian", "--nu", "0.5", "--c", "-inf", "--at", "2.5"]
        quad = runner.invoke(main, base + ["--method", "quadrature"])
        four = runner.invoke(main, base + ["--method", "fourier"])
        assert quad.exit_code == 0 and four.exit_code == 0
        assert abs(float(quad.output) - float(four.output)) < 2e-4

    def test_both_targets_is_usage_error(self, runner):
        result = runner.invoke(
            main, ["differint", "--func", "power", "--nu", "0.5", "--at", "1", "--grid"])
        assert result.exit_code == 2

    def test_no_target_is_usage_error(self, runner):
        result = runner.invoke(main, ["differint", "--func", "power", "--nu", "0.5"])
        assert result.exit_code == 2

    def test_fourier_needs_infinite_base(self, runner):
        result = runner.invoke(
            main,
            ["differint", "--func", "gaussian", "--nu", "0.5", "--method", "fourier", "--at", "1"],
        )
        assert result.exit_code == 2

    def test_unknown_function_reports_error_class(self, runner):
        result = runner.invoke(
            main, ["differint", "--func", "nosuch", "--nu", "0.5", "--at", "1"])
        assert result.exit_code == 1
        assert "UnknownCatalogEntry" in result.stderr


class TestSymbol:
    def test_fractional_laplacian_report(self, runner):
        result = runner.invoke(main, ["symbol", "--op", FRAC_LAP_2D])
        assert result.exit_code == 0
        doc = json.loads(result.output)
        assert doc["elliptic"] is True
        assert doc["order"] == pytest.approx(0.5)
        assert doc["homogeneous"] is True
        assert doc["min_modulus"] == pytest.approx(1.0)
        assert doc["bounds"]["C"] > 0
        assert doc["bounds"]["R"] > 0

    def test_saddle_is_not_elliptic(self, runner):
        result = runner.invoke(main, ["symbol", "--op", SADDLE_2D])
        assert result.exit_code == 0
        doc = json.loads(result.output)
        assert doc["elliptic"] is False
        assert doc["bounds"] is None

    def test_malformed_symbol_exits_one(self, runner):
        result = runner.invoke(main, ["symbol", "--op", '{"dim": 1}'])
        assert result.exit_code == 1
        assert "ValueError" in result.stderr


class TestSolveAndSobolev:
    def test_field_file_roundtrip_is_bit_exact(self, runner, tmp_path):
        solve = runner.invoke(
            main,
            ["--outdir", str(tmp_path), "-R", "4",
             "solve", "--op", MONO_07, "--forcing", "step", "--output", "u.field"],
        )
        assert solve.exit_code == 0
        report = json.loads(solve.output)
        assert report["confined"] is True
        assert report["cutoff_radius"] == pytest.approx(4.0)
        field_file = tmp_path / "u.field"
        assert field_file.exists()

        est_cli = runner.invoke(
            main, ["sobolev", "--field", str(field_file), "--min-radius", "10"])
        assert est_cli.exit_code == 0

        grid = BoxGrid(1, 4096, 40.0)
        f = sample_field(grid, step(-1.0, 1.0).value)
        res = solve_elliptic(FracSymbol.from_json(MONO_07), f, 4.0)
        expected = estimate_regularity(res.u, bands_per_octave=3, min_radius=10.0)
        assert est_cli.output.strip() == expected.to_json()

    def test_sobolev_norm_of_catalog_function(self, runner):
        result = runner.invoke(
            main, ["-m", "256", "-L", "20", "sobolev", "--func", "gaussian", "--s", "0"])
        assert result.exit_code == 0
        # Plancherel in the integral-transform normalization: the H^0 norm
        # is sqrt(2 pi) times the L2 norm, so sqrt(2 pi) * pi^(1/4) here.
        expected = math.sqrt(2.0 * math.pi) * math.pi ** 0.25
        assert float(result.output) == pytest.approx(expected, rel=1e-6)
        assert _significant_digits(result.output.strip()) >= 12

    def test_solve_dimension_mismatch_is_usage_error(self, runner):
        result = runner.invoke(main, ["solve", "--op", FRAC_LAP_2D, "--forcing", "gaussian"])
        assert result.exit_code == 2

    def test_sobolev_needs_exactly_one_input(self, runner):
        result = runner.invoke(main, ["sobolev"])
        assert result.exit_code == 2


class TestVerifyCommand:
    def test_subset_green_and_report_written(self, runner, tmp_path):
        result = runner.invoke(
            main,
            ["--outdir", str(tmp_path), "verify",
             "--only", "osler_product,power_rule", "--report", "checks.json"],
        )
        assert result.exit_code == 0
        lines = result.output.strip().splitlines()
        assert lines[0].startswith("osler_product: pass")
        assert lines[1].startswith("power_rule: pass")
        doc = json.loads((tmp_path / "checks.json").read_text())
        assert [entry["check_id"] for entry in doc] == ["osler_product", "power_rule"]
        assert all(set(entry) == {"check_id", "max_error", "tolerance", "pass"} for entry in doc)
        assert all(entry["pass"] for entry in doc)

    def test_unknown_check_id_exits_one(self, runner):
        result = runner.invoke(main, ["verify", "--only", "no_such_check"])
        assert result.exit_code == 1
        assert "UnknownCheckId" in result.stderr


class TestExperimentCommand:
    def test_single_row_matrix(self, runner, tmp_path):
        matrix = json.dumps({
            "operators": [json.loads(MONO_05)],
            "forcings": ["step"],
        })
        result = runner.invoke(
            main,
            ["--outdir", str(tmp_path), "experiment", "regularity",
             "--matrix", matrix, "--csv", "gains.csv"],
        )
        assert result.exit_code == 0

        table = (tmp_path / "gains.csv").read_text().strip().splitlines()
        assert table[0] == "operator_id,nu,s_f,s_u,gain,expected_gain,pass"
        assert len(table) == 2
        cells = table[1].split(",")
        assert cells[0] == "D^0.5"
        assert float(cells[4]) == pytest.approx(0.5, abs=0.15)
        assert cells[6] == "true"

        plots = sorted(tmp_path.glob("bands_*.dat"))
        assert len(plots) == 1
        lines = plots[0].read_text().strip().splitlines()
        assert lines[0] == "# shell_center forcing_energy solution_energy"
        assert len(lines) > 10
        assert all(len(line.split()) == 3 for line in lines[1:])

    def test_outdir_env_var(self, runner, tmp_path):
        matrix = json.dumps({"operators": [json.loads(MONO_05)], "forcings": ["step"]})
        result = runner.invoke(
            main,
            ["experiment", "regularity", "--matrix", matrix],
            env={"FRACPDE_OUTDIR": str(tmp_path)},
        )
        assert result.exit_code == 0
        assert (tmp_path / "regularity_gains.csv").exists()


class TestTopLevel:
    def test_module_entry_point(self):
        proc = subprocess.run(
            [sys.executable, "-m", "fracpde", "--help"],
            capture_output=True, text=True, timeout=120,
        )
        assert proc.returncode == 0
        assert "Usage" in proc.stdout

    def test_bad_grid_size_is_usage_error(self, runner):
        result = runner.invoke(main, ["-m", "17", "verify"])
        assert result.exit_code == 2

    def test_bad_dimension_is_usage_error(self, runner):
        result = runner.invoke(main, ["-n", "4", "verify"])
        assert result.exit_code == 2

    def test_run_cli_returns_exit_codes(self, capsys):
        assert run_cli(["differint", "--func", "power", "--nu", "0.5", "--at", "1"]) == 0
        assert run_cli(["differint", "--func", "nosuch", "--nu", "0.5", "--at", "1"]) == 1
        assert run_cli(["differint", "--func", "power", "--nu", "0.5"]) == 2
        out = capsys.readouterr().out
        assert float(out.strip().splitlines()[0]) == pytest.approx(TWO_OVER_ROOT_PI, rel=1e-6)
