import json

import pytest

from qgibbs.cli import main


def run(capsys, *args):
    code = main(list(args))
    out = capsys.readouterr()
    return code, out.out, out.err


def test_pressure_runs(capsys, tmp_path):
    code, out, _ = run(capsys, "pressure", "--preset", "classical_ising", "--beta", "1", "--boxes", "2,3,4",
                       "--output-dir", str(tmp_path))
    assert code == 0 and "pressure: ok" in out
    assert (tmp_path / "pressure_summary.json").exists()


def test_set_override_and_json(capsys):
    code, out, _ = run(capsys, "verify-gibbs-product", "--no-write", "--json", "--set", "gibbs_product.betas=[0.2, 2.0]")
    data = json.loads(out)
    assert code == 0 and data["status"] == "pass" and len(data["results"]["rows"]) == 2


@pytest.mark.parametrize("args", [
    ["pressure", "--beta", "abc"],
    ["pressure", "--set", "beta=-2"],
    ["pressure", "--set", "novalue"],
    ["pressure", "--config", "/nonexistent.yaml"],
])
def test_config_errors_exit_2(capsys, args):
    code, _, err = run(capsys, *args, "--no-write")
    assert code == 2 and "config error" in err


def test_usage_error_exit_2(capsys):
    assert main(["not-a-command"]) == 2


def test_resource_error_exit_1(capsys):
    code, _, err = run(capsys, "pressure", "--boxes", "4,30", "--no-write")
    assert code == 1 and "dimension" in err


def test_inconclusive_exit_3(capsys):
    code, out, _ = run(capsys, "verify-theorem1", "--boxes", "2,3", "--buffer", "0", "--no-write")
    assert code == 3 and "inconclusive" in out


def test_config_file(capsys, tmp_path):
    f = tmp_path / "run.yaml"
    f.write_text("model: {preset: classical_ising}\nbeta: 1.0\nboxes: [2, 3, 4]\nomega: {kind: tracial}\n")
    code, out, _ = run(capsys, "info-rate", "--config", str(f), "--no-write")
    assert code == 0 and "info-rate: pass" in out
