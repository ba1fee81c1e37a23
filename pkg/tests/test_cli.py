import json

import numpy as np
import pytest

from implicitreg import SimulationConfig, generate, write_csv
from implicitreg.cli import main


def run_cli(capsys, *argv):
    code = main(list(argv))
    captured = capsys.readouterr()
    return code, captured.out, captured.err


def sim_csv(tmp_path, sigma=5.0, seed=12345, n=50):
    path = tmp_path / f"sim_{sigma}_{seed}.csv"
    path.write_bytes(write_csv(generate(SimulationConfig(n=n, sigma=sigma, seed=seed)), decimals=12))
    return path


def noiseless_csv(tmp_path):
    path = tmp_path / "exact.csv"
    t = np.arange(1.0, 11.0)
    rows = "\n".join(f"{200.0 / ti:.12f},{20.0 * ti:.12f}" for ti in t)
    path.write_text("x,y\n" + rows + "\n")
    return path


class TestSimulateCommand:
    def test_writes_file_and_reports_constancy(self, tmp_path, capsys):
        out = tmp_path / "d.csv"
        code, stdout, _ = run_cli(
            capsys, "simulate", "--n", "50", "--sigma", "5", "--seed", "7",
            "--out", str(out),
        )
        assert code == 0
        assert len(out.read_text().splitlines()) == 51
        assert "constancy(x) = " in stdout
        assert "constancy(xy) = " in stdout

    def test_noiseless_constancy_is_one(self, tmp_path, capsys):
        code, stdout, _ = run_cli(
            capsys, "simulate", "--n", "50", "--sigma", "0", "--seed", "1"
        )
        assert code == 0
        assert "constancy(xy) = 1.000000" in stdout

    def test_negative_sigma_is_usage_error(self, capsys):
        with pytest.raises(SystemExit) as excinfo:
            main(["simulate", "--sigma", "-1"])
        assert excinfo.value.code == 2

    def test_same_seed_same_file(self, tmp_path, capsys):
        a, b = tmp_path / "a.csv", tmp_path / "b.csv"
        run_cli(capsys, "simulate", "--seed", "3", "--out", str(a))
        run_cli(capsys, "simulate", "--seed", "3", "--out", str(b))
        assert a.read_bytes() == b.read_bytes()


class TestFitCommand:
    def test_noiseless_inverse_coefficient(self, tmp_path, capsys):
        data = noiseless_csv(tmp_path)
        code, stdout, _ = run_cli(
            capsys, "fit", "--model", "1 ~ x*y", "--data", str(data),
            "--format", "json",
        )
        assert code == 0
        payload = json.loads(stdout)
        (coef,) = payload["coefficients"]
        assert coef["term"] == "x*y"
        assert coef["estimate"] == pytest.approx(1.0 / 4000.0, abs=1e-8)

    def test_reduce_drops_interaction(self, tmp_path, capsys):
        data = sim_csv(tmp_path)
        code, stdout, _ = run_cli(
            capsys, "fit", "--model", "y ~ 1 + x + x*y", "--data", str(data),
            "--reduce",
        )
        assert code == 0
        assert "dropped x*y" in stdout
        assert "model: y ~ 1 + x" in stdout

    def test_reduction_trace_in_json(self, tmp_path, capsys):
        data = sim_csv(tmp_path)
        code, stdout, _ = run_cli(
            capsys, "fit", "--model", "y ~ 1 + x + x*y", "--data", str(data),
            "--reduce", "--format", "json",
        )
        payload = json.loads(stdout)
        assert payload["reduced"] == "y ~ 1 + x"
        assert payload["reduction"][0]["dropped"] == "x*y"
        assert payload["reduction"][0]["p_value"] > 0.05

    def test_bad_model_text_is_usage_error(self, tmp_path, capsys):
        with pytest.raises(SystemExit) as excinfo:
            main(["fit", "--model", "z ~ x", "--data", "whatever.csv"])
        assert excinfo.value.code == 2

    def test_missing_data_file_is_runtime_error(self, capsys):
        code, _, stderr = run_cli(
            capsys, "fit", "--model", "y ~ 1 + x", "--data", "no_such_file.csv"
        )
        assert code == 1
        assert "error" in stderr

    def test_text_output_has_metrics(self, tmp_path, capsys):
        data = sim_csv(tmp_path)
        code, stdout, _ = run_cli(
            capsys, "fit", "--model", "1 ~ x + y + x*y", "--data", str(data)
        )
        assert code == 0
        for token in ("R^2 =", "SE_y =", "theta_T =", "undefined solves"):
            assert token in stdout


class TestCompareCommand:
    def test_markdown_default(self, tmp_path, capsys):
        data = sim_csv(tmp_path)
        code, stdout, _ = run_cli(capsys, "compare", "--data", str(data))
        assert code == 0
        assert stdout.count("|") > 20
        assert "1 ~ x + y + x*y" in stdout

    def test_json_rank_sums(self, tmp_path, capsys):
        data = sim_csv(tmp_path)
        code, stdout, _ = run_cli(
            capsys, "compare", "--data", str(data), "--format", "json"
        )
        payload = json.loads(stdout)
        assert len(payload["models"]) == 7
        for metric in ("r_squared", "se_y", "se_x", "theta_t", "height"):
            assert sum(m["ranks"][metric] for m in payload["models"]) == pytest.approx(28.0)

    def test_csv_format(self, tmp_path, capsys):
        data = sim_csv(tmp_path)
        code, stdout, _ = run_cli(
            capsys, "compare", "--data", str(data), "--format", "csv"
        )
        assert code == 0
        assert stdout.splitlines()[0].startswith("model,reduced,")


class TestBoyleCommand:
    def test_constancy_and_geometry(self, capsys):
        code, stdout, _ = run_cli(capsys, "boyle")
        assert code == 0
        assert "constancy(volume*pressure) = 0.9999878" in stdout
        assert "1 ~ x + y + x*y" in stdout
        assert "height variant: projection" in stdout

    def test_json_payload(self, capsys):
        code, stdout, _ = run_cli(capsys, "boyle", "--format", "json")
        payload = json.loads(stdout)
        assert payload["constancy"]["product"] == pytest.approx(0.9999878, abs=1e-4)
        models = {m["model"]: m for m in payload["models"]}
        assert models["y ~ 1 + x + x^2"]["complex_x"] == 3

    def test_plot_data_dir(self, tmp_path, capsys):
        plot_dir = tmp_path / "plots"
        code, _, _ = run_cli(capsys, "boyle", "--plot-data-dir", str(plot_dir))
        assert code == 0
        names = sorted(p.name for p in plot_dir.iterdir())
        assert names == [
            "hist_pressure.csv",
            "hist_product.csv",
            "hist_volume.csv",
            "overlay_inverse.csv",
            "overlay_nonresponse.csv",
            "overlay_quadratic.csv",
        ]
        overlay = (plot_dir / "overlay_nonresponse.csv").read_text().splitlines()
        assert overlay[0] == "volume,pressure,estimated_pressure"
        assert len(overlay) == 26


class TestConstancyCommand:
    def test_noiseless_product(self, tmp_path, capsys):
        data = noiseless_csv(tmp_path)
        code, stdout, _ = run_cli(
            capsys, "constancy", "--data", str(data), "--vars", "xy"
        )
        assert code == 0
        assert "xy: constancy_index = 1.000000" in stdout
        assert "self_weighting_mean = 4000.000000" in stdout

    def test_all_three_vars_by_default(self, tmp_path, capsys):
        data = sim_csv(tmp_path)
        code, stdout, _ = run_cli(capsys, "constancy", "--data", str(data))
        assert code == 0
        for name in ("x:", "y:", "xy:"):
            assert name in stdout

    def test_unknown_var_is_usage_error(self, tmp_path, capsys):
        with pytest.raises(SystemExit) as excinfo:
            main(["constancy", "--data", "d.csv", "--vars", "t"])
        assert excinfo.value.code == 2
