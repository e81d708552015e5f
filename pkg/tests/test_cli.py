import json

import numpy as np
import pytest

from espider import __version__
from espider.cli import RunConfig, run


def out_lines(capsys):
    return capsys.readouterr().out.splitlines()


class TestCLI:
    def test_stationary_cell(self, capsys):
        assert run(["stationary", "--N", "100", "--rho", "0.25", "--k", "0"]) == 0
        lines = out_lines(capsys)
        assert lines[0] == f"# espider {__version__}"
        assert lines[1].startswith("# config: ")
        assert lines[2].startswith("N,rho,k,rho_k,rho_k_approx")
        assert round(float(lines[3].split(",")[3]), 6) == 0.754044

    def test_extreme_value_columns(self, capsys):
        assert run(["stationary", "--N", "1000", "--rho", "0.25", "--k", "1000"]) == 0
        row = out_lines(capsys)[3].split(",")
        assert row[3].startswith("3.191157888") and row[3].endswith("e-1203")
        assert float(row[5]) == pytest.approx(-1202.49605, abs=1e-5)

    def test_transient_header_and_digits(self, capsys):
        assert run(["transient", "--N", "2", "--t", "0,1"]) == 0
        lines = out_lines(capsys)
        assert lines[2] == "t,p0,p1,p2"
        assert all(len(v.replace(".", "").lstrip("0")) <= 12 for v in lines[4].split(","))

    def test_transient_oracle_for_unequal_rates(self, capsys):
        assert run(["transient", "--lambda", "2", "--N", "2", "--t", "1"]) == 0
        cfg = json.loads(out_lines(capsys)[1][len("# config: "):])
        assert cfg["options"]["method"] == "oracle"

    def test_usage_errors(self, capsys):
        assert run(["nope"]) == 2
        assert run(["stationary", "--N", "x"]) == 2
        assert run(["transient", "--lambda", "2", "--N", "2", "--t", "1", "--method", "closed"]) == 2
        assert run(["transient", "--N", "2"]) == 2
        assert run(["simulate", "--t", "1"]) == 2

    def test_compare_table3(self, capsys):
        code = run(["compare", "table3", "--preset", "paper"])
        lines = out_lines(capsys)
        assert code == 0
        assert lines[2] == "N,k,w_eps,rho_k,delta"
        assert len(lines) == 3 + 33

    def test_compare_check_reports_misses(self, capsys):
        assert run(["compare", "table2", "--check"]) == 0
        # one reference cell of the diffusion table does not reproduce
        assert run(["compare", "table3", "--check"]) == 1
        assert "MISS N=15000 k=10 w_eps" in capsys.readouterr().err

    def test_json_format(self, capsys):
        assert run(["entropy", "--N", "2", "--argmax", "--format", "json"]) == 0
        doc = json.loads(capsys.readouterr().out)
        assert doc["columns"][:2] == ["N", "m"]
        assert abs(doc["rows"][0][1] - 2.45) < 0.01

    def test_byte_identical(self, tmp_path):
        a, b = tmp_path / "a.csv", tmp_path / "b.csv"
        argv = ["simulate", "--N", "3", "--t", "1,2", "--runs", "500", "--seed", "11"]
        assert run(argv + ["--out", str(a)]) == 0
        assert run(argv + ["--out", str(b)]) == 0
        assert a.read_bytes() == b.read_bytes()
        manifest = json.loads((tmp_path / "a.csv.manifest.json").read_text())
        assert manifest["options"]["seed"] == 11

    def test_config_file(self, tmp_path, capsys):
        cfg = tmp_path / "m.json"
        cfg.write_text(json.dumps({"lambda": 2, "mu": 1, "N": 3, "d": 2,
                                   "switch": {"kind": "cyclic"}}))
        assert run(["transient", "--config", str(cfg), "--t", "1"]) == 0
        doc = json.loads(out_lines(capsys)[1][len("# config: "):])
        assert doc["options"]["model"]["d"] == 2

    def test_runconfig_roundtrip_and_replay(self, capsys):
        assert run(["stationary", "--N", "10,20", "--rho", "0.5", "--moments"]) == 0
        first = capsys.readouterr().out
        rc = RunConfig.from_json(first.splitlines()[1][len("# config: "):])
        assert RunConfig.from_json(rc.to_json()) == rc
        assert run(rc.to_argv()) == 0
        assert capsys.readouterr().out == first

    def test_diffusion_modes(self, capsys):
        assert run(["diffusion", "moments", "--alpha", "2", "--nu", "50"]) == 0
        row = out_lines(capsys)[3].split(",")
        np.testing.assert_allclose(float(row[3]), 10 / np.sqrt(2 * np.pi))
        assert run(["diffusion", "density", "--lambda", "1", "--mu", "1", "--N", "5000",
                    "--epsilon", "0.1"]) == 0
        assert out_lines(capsys)[2] == "x,w"
        assert run(["diffusion", "fp", "--alpha", "1", "--nu", "1", "--cells", "20", "--t", "0,1"]) == 0
        assert len(out_lines(capsys)) == 3 + 40
        assert run(["diffusion", "sde", "--alpha", "4", "--nu", "1", "--d", "2", "--t", "1",
                    "--runs", "20", "--bins", "5"]) == 0
        assert out_lines(capsys)[2] == "x_bin,count,ray"
        assert run(["diffusion", "sde", "--alpha", "400", "--nu", "1", "--t", "1", "--dt", "0.01"]) == 2
