import csv
import json

import numpy as np
import pytest

from qgibbs import __version__
from qgibbs.errors import ConfigError
from qgibbs.harness import (
    DEFAULTS,
    cfg_omega,
    drift_levels,
    load_config,
    mcmillan_check,
    mcmillan_series,
    resolve_config,
    run_suite,
    verify_theorem1,
)
from qgibbs.lattice import Region
from qgibbs.states import StateFamily


def small(**extra):
    base = {"boxes": [2, 3, 4], "buffer": 2, "output": {"write": False}}
    base.update(extra)
    return resolve_config(base)


def test_defaults_validate():
    cfg = resolve_config({})
    assert cfg["model"]["preset"] == DEFAULTS["model"]["preset"]


@pytest.mark.parametrize("raw,path", [
    ({"beta": -1}, "beta"),
    ({"boxes": [4, 4]}, "boxes"),
    ({"omega": {"kind": "nope"}}, "omega.kind"),
    ({"model": {"preset": "tfi", "couplings": {"Q": 1}}}, "model"),
    ({"tolerances": {"unknown": 1}}, "tolerances"),
    ({"omega": {"kind": "product", "diag": [0.5, 0.6]}}, "omega.diag"),
    ({"typo": 1}, "<root>"),
])
def test_schema_errors_name_the_field(raw, path):
    with pytest.raises(ConfigError) as err:
        resolve_config(raw)
    assert str(err.value).startswith(path)


def test_yaml_loading(tmp_path):
    f = tmp_path / "c.yaml"
    f.write_text("model:\n  preset: classical_ising\n  couplings: {J: 0.5}\nbeta: 1.5\n")
    cfg = load_config(str(f), {"boxes": [3, 5]})
    assert cfg["model"]["couplings"] == {"J": 0.5} and cfg["beta"] == 1.5 and cfg["boxes"] == [3, 5]
    bad = tmp_path / "bad.yaml"
    bad.write_text("beta: [1,\n")
    with pytest.raises(ConfigError):
        load_config(str(bad))
    with pytest.raises(ConfigError):
        load_config(str(tmp_path / "missing.yaml"))


def test_omega_table_replaces_default():
    cfg = resolve_config({"omega": {"kind": "product", "bloch": [0, 0, 0.5]}})
    assert "diag" not in cfg["omega"]
    np.testing.assert_allclose(cfg_omega(cfg).rho0, np.diag([0.75, 0.25]))


def test_drift_levels():
    assert drift_levels(3) == (2, 3)
    assert drift_levels(0) == (0, 1)


def test_comparison_psi_itself():
    cfg = small(omega={"kind": "buffered_gibbs"})
    rep = verify_theorem1(cfg)
    assert rep.status == "pass"
    for row in rep.rows:
        assert abs(row["rel_psi_per_site"]) < 1e-9


def test_comparison_one_site_potential():
    cfg = small(model={"preset": "tfi", "couplings": {"J": 0}})
    rep = verify_theorem1(cfg)
    assert all(abs(r["difference_per_site"]) < 1e-12 for r in rep.rows)
    assert rep.status == "pass"


def test_comparison_difference_column_identity():
    rep = verify_theorem1(small())
    for r in rep.rows:
        assert abs(r["difference_per_site"] - r["expectation_per_site"]) <= 1e-9


def test_comparison_gate_trips():
    rep = verify_theorem1(small(buffer=0))
    assert rep.status == "inconclusive"


def test_mcmillan_tracial_and_product():
    boxes = [Region.centered_box(n) for n in (2, 3, 4, 5)]
    rows = mcmillan_series(StateFamily.tracial(), boxes)
    assert all(r["variance"] < 1e-15 and r["mean"] == pytest.approx(np.log(2)) for r in rows)
    p = 0.3
    rows = mcmillan_series(StateFamily.product([p, 1 - p]), boxes)
    for r in rows:
        expected = p * (1 - p) * np.log(p / (1 - p)) ** 2 / r["volume"]
        assert r["variance"] == pytest.approx(expected, abs=1e-12)


def test_mcmillan_check_on_config():
    res = mcmillan_check(small(boxes=[2, 4, 6]))
    v = [r["variance"] for r in res.results["rows"]]
    assert all(b < a for a, b in zip(v, v[1:]))
    assert res.status == "pass"


def test_run_suite_writes_outputs(tmp_path):
    cfg = resolve_config({"boxes": [2, 3, 4], "output": {"directory": str(tmp_path), "prefix": "t"}})
    code, results = run_suite(cfg, ["pressure", "info-rate"])
    assert code == 0
    summary = json.loads((tmp_path / "t_summary.json").read_text())
    assert summary["artifact_version"] == __version__
    assert summary["config"]["boxes"] == [2, 3, 4]
    assert summary["schema_version"] == "1"
    with open(tmp_path / "t_pressure.csv") as fh:
        rows = list(csv.reader(fh))
    assert rows[0] == ["volume", "value"] and [int(r[0]) for r in rows[1:]] == [2, 3, 4]


def test_run_suite_is_deterministic(tmp_path):
    outs = []
    d = tmp_path / "out"
    for _ in range(2):
        cfg = resolve_config({"boxes": [2, 3], "output": {"directory": str(d), "prefix": "x"},
                              "pb_gt": {"pairs": 10}})
        run_suite(cfg, ["pb-gt", "verify-theorem1"])
        outs.append(sorted(p.read_bytes() for p in d.iterdir()))
    assert outs[0] == outs[1]


def test_inf_serialized_as_string(tmp_path):
    cfg = resolve_config({"boxes": [1, 2], "omega": {"kind": "tracial"},
                          "model": {"preset": "classical_ising"}, "beta": 1.0,
                          "output": {"directory": str(tmp_path), "prefix": "r"}})
    from qgibbs.harness import COMMANDS, write_outputs
    from qgibbs.series import extrapolate
    res = COMMANDS["pressure"](cfg)
    res.series["diverging"] = extrapolate([1, 2], [1.0, float("inf")])
    write_outputs(res, cfg)
    assert (tmp_path / "r_diverging.csv").read_text().splitlines()[-1] == "2,inf"
    assert json.loads((tmp_path / "r_summary.json").read_text())["series"]["diverging"]["limit_estimate"] == "inf"


def test_unknown_command():
    with pytest.raises(ConfigError):
        run_suite(small(), ["bogus"])
