"""Experiment configuration, verification runners and report files.

A run is described by one YAML document (see ``DEFAULTS`` for every key).
It is merged over the defaults, validated against ``SCHEMA``, and then each
subcommand reads the fields it needs.  Results are written as one CSV per
series plus a JSON summary that embeds the resolved configuration.
"""

from __future__ import annotations

import copy
import json
import math
import os
from dataclasses import dataclass, field
from typing import Any, Callable

import jsonschema
import numpy as np
import yaml

from . import __version__
from .entropy import entropy_density, entropy_variance, relative_entropy, relative_entropy_density, von_neumann_entropy
from .errors import ConfigError, ValidationError
from .lattice import ModelSpec, Potential, Region
from .operators import LocalOperator
from .perturbation import gibbs_product_check, log_density_gap, pb_gt_check
from .series import ExtrapolationSeries, extrapolate
from .states import StateFamily, buffered_drift, marginal, random_density, random_product_state
from .thermo import (
    bloch_grid,
    free_energy_functional,
    information_rate,
    mean_field_scan,
    pressure,
    relative_entropy_identity,
)

SCHEMA_VERSION = "1"
CSV_VERSION = "1"

PASS, FAIL, INCONCLUSIVE, OK = "pass", "fail", "inconclusive", "ok"
EXIT_CODES = {PASS: 0, OK: 0, FAIL: 1, INCONCLUSIVE: 3}

DEFAULTS: dict = {
    "model": {"preset": "tfi", "couplings": {}, "nu": 1},
    "beta": 0.8,
    "boxes": [4, 6, 8, 10],
    "buffer": 3,
    "boundary": "open",
    "method": "auto",
    "omega": {"kind": "product", "diag": [0.3, 0.7]},
    "extrapolation_points": 4,
    "max_dim": 4096,
    "seed": 20240611,
    "tolerances": {
        "identity": 1e-9,
        "drift_gate": 0.02,
        "final_gap": 0.05,
        "mcmillan_mean": 0.05,
        "product_gap": 1e-9,
        "slack": 1e-10,
        "variational": 1e-6,
    },
    "gibbs_product": {"inner": [2, 4], "ambient": [0, 6]},
    "pb_gt": {"pairs": 100, "min_dim": 4, "max_dim": 16},
    "mean_field": {"radii": 5, "tol": 1e-6},
    "mcmillan": {"state": "psi"},
    "selftest": {"klein_pairs": 200, "ssa_states": 100, "roundtrip": 100},
    "output": {"directory": "qgibbs-out", "prefix": None, "write": True},
}

_num = {"type": "number"}
_pos = {"type": "number", "exclusiveMinimum": 0}
_nonneg = {"type": "number", "minimum": 0}
_posint = {"type": "integer", "minimum": 1}

SCHEMA: dict = {
    "type": "object",
    "additionalProperties": False,
    "properties": {
        "model": {
            "type": "object",
            "additionalProperties": False,
            "required": ["preset"],
            "properties": {
                "preset": {"type": "string"},
                "couplings": {"type": "object", "additionalProperties": _num},
                "nu": _posint,
            },
        },
        "beta": _nonneg,
        "boxes": {"type": "array", "minItems": 1, "items": _posint},
        "buffer": {"type": "integer", "minimum": 0},
        "boundary": {"enum": ["open", "periodic"]},
        "method": {"enum": ["auto", "dense", "gaussian"]},
        "omega": {
            "type": "object",
            "additionalProperties": False,
            "required": ["kind"],
            "properties": {
                "kind": {"enum": ["product", "random_product", "tracial", "internal_gibbs", "buffered_gibbs"]},
                "diag": {"type": "array", "items": _nonneg, "minItems": 2},
                "bloch": {"type": "array", "items": _num, "minItems": 3, "maxItems": 3},
                "beta": _nonneg,
                "buffer": {"type": "integer", "minimum": 0},
            },
        },
        "extrapolation_points": _posint,
        "max_dim": {"type": "integer", "minimum": 2},
        "seed": {"type": "integer", "minimum": 0},
        "tolerances": {
            "type": "object",
            "additionalProperties": False,
            "properties": {k: _nonneg for k in DEFAULTS["tolerances"]},
        },
        "gibbs_product": {
            "type": "object",
            "additionalProperties": False,
            "properties": {
                "inner": {"type": "array", "items": {"type": "integer"}, "minItems": 2, "maxItems": 2},
                "ambient": {"type": "array", "items": {"type": "integer"}, "minItems": 2, "maxItems": 2},
                "betas": {"type": "array", "items": _nonneg},
            },
        },
        "pb_gt": {
            "type": "object",
            "additionalProperties": False,
            "properties": {"pairs": _posint, "min_dim": {"type": "integer", "minimum": 2},
                           "max_dim": {"type": "integer", "minimum": 2}},
        },
        "mean_field": {
            "type": "object",
            "additionalProperties": False,
            "properties": {"radii": _posint, "tol": _pos},
        },
        "mcmillan": {
            "type": "object",
            "additionalProperties": False,
            "properties": {"state": {"enum": ["psi", "omega"]}},
        },
        "selftest": {
            "type": "object",
            "additionalProperties": False,
            "properties": {"klein_pairs": _posint, "ssa_states": _posint, "roundtrip": _posint},
        },
        "output": {
            "type": "object",
            "additionalProperties": False,
            "properties": {
                "directory": {"type": "string"},
                "prefix": {"type": ["string", "null"]},
                "write": {"type": "boolean"},
            },
        },
    },
}


# tables whose user value replaces the default instead of merging into it
_REPLACE_WHOLE = {"couplings", "omega"}


def _merge(base: dict, over: dict) -> dict:
    out = copy.deepcopy(base)
    for k, v in over.items():
        if isinstance(v, dict) and isinstance(out.get(k), dict) and k not in _REPLACE_WHOLE:
            out[k] = _merge(out[k], v)
        else:
            out[k] = copy.deepcopy(v)
    return out


def set_path(tree: dict, dotted: str, value: Any) -> None:
    """Assign ``value`` at a dotted key path, creating intermediate tables."""
    keys = dotted.split(".")
    node = tree
    for k in keys[:-1]:
        nxt = node.setdefault(k, {})
        if not isinstance(nxt, dict):
            raise ConfigError("cannot set a key below a non-table value", keys)
        node = nxt
    node[keys[-1]] = value


def resolve_config(raw: dict | None = None, overrides: dict | None = None) -> dict:
    """Defaults merged with ``raw`` and dotted ``overrides``, then schema-validated."""
    raw = {} if raw is None else raw
    if not isinstance(raw, dict):
        raise ConfigError("configuration must be a mapping")
    merged = _merge(DEFAULTS, raw)
    for key, val in (overrides or {}).items():
        set_path(merged, key, val)
    try:
        jsonschema.validate(merged, SCHEMA)
    except jsonschema.ValidationError as err:
        raise ConfigError(err.message, err.absolute_path) from None
    _semantic_checks(merged)
    return merged


def _semantic_checks(cfg: dict) -> None:
    boxes = cfg["boxes"]
    if any(b <= a for a, b in zip(boxes, boxes[1:])):
        raise ConfigError("box sides must be strictly increasing", ["boxes"])
    try:
        cfg_model(cfg)
    except (ValidationError, ValueError) as err:
        raise ConfigError(str(err), ["model"]) from None
    om = cfg["omega"]
    if om["kind"] == "product":
        if "diag" in om and "bloch" in om:
            raise ConfigError("give either diag or bloch, not both", ["omega"])
        if "diag" in om and abs(sum(om["diag"]) - 1) > 1e-12:
            raise ConfigError("diagonal entries must sum to 1", ["omega", "diag"])
        if "bloch" in om and np.linalg.norm(om["bloch"]) > 1 + 1e-12:
            raise ConfigError("Bloch vector must have norm <= 1", ["omega", "bloch"])
    pg = cfg["pb_gt"]
    if pg["min_dim"] > pg["max_dim"]:
        raise ConfigError("min_dim exceeds max_dim", ["pb_gt"])


def load_config(path: str | None = None, overrides: dict | None = None) -> dict:
    raw: dict = {}
    if path is not None:
        try:
            with open(path) as fh:
                raw = yaml.safe_load(fh) or {}
        except OSError as err:
            raise ConfigError(f"cannot read config file: {err}") from None
        except yaml.YAMLError as err:
            raise ConfigError(f"malformed YAML: {err}") from None
    return resolve_config(raw, overrides)


# building objects from a resolved config

def cfg_model(cfg: dict) -> Potential:
    m = cfg["model"]
    return ModelSpec(m["preset"], m.get("couplings", {}), cfg["beta"], m.get("nu", 1)).potential()


def cfg_boxes(cfg: dict) -> list[Region]:
    nu = cfg["model"].get("nu", 1)
    return [Region.centered_box(n, nu) for n in cfg["boxes"]]


def cfg_psi(cfg: dict, buffer: int | None = None) -> StateFamily:
    b = cfg["buffer"] if buffer is None else buffer
    return StateFamily.buffered_gibbs(cfg_model(cfg), cfg["beta"], b, boundary=cfg["boundary"],
                                      method=cfg["method"], max_dim=cfg["max_dim"])


def cfg_omega(cfg: dict) -> StateFamily:
    om = cfg["omega"]
    pot = cfg_model(cfg)
    nu = pot.nu
    kind = om["kind"]
    if kind == "tracial":
        return StateFamily.tracial(pot.site_dim, nu, max_dim=cfg["max_dim"])
    if kind == "product":
        if "bloch" in om:
            from .thermo import bloch_density
            rho0 = bloch_density(om["bloch"])
        else:
            rho0 = om.get("diag", [0.5, 0.5])
        return StateFamily.product(rho0, nu=nu, max_dim=cfg["max_dim"])
    if kind == "random_product":
        fam = random_product_state(np.random.default_rng(cfg["seed"]), pot.site_dim, nu)
        return StateFamily.product(fam.rho0, nu=nu, max_dim=cfg["max_dim"])
    if kind == "internal_gibbs":
        return StateFamily.internal_gibbs(pot, om.get("beta", cfg["beta"]), max_dim=cfg["max_dim"])
    return StateFamily.buffered_gibbs(pot, om.get("beta", cfg["beta"]), om.get("buffer", cfg["buffer"]),
                                      boundary=cfg["boundary"], method=cfg["method"], max_dim=cfg["max_dim"])


# reports

@dataclass
class RunResult:
    """Outcome of one subcommand: status, scalar results and named series."""

    command: str
    status: str
    results: dict = field(default_factory=dict)
    series: dict = field(default_factory=dict)
    messages: list = field(default_factory=list)

    @property
    def exit_code(self) -> int:
        return EXIT_CODES[self.status]


@dataclass
class TheoremReport:
    """Per-volume comparison of S(w|rho^IG) and S(w|psi).

    ``rows`` hold, for each box, the two per-site relative entropies, their
    difference, the expectation w(log psi - log rho^IG)/|L| evaluated
    independently, the residual between those two, and the buffer drift.
    """

    rows: list
    h_ig: ExtrapolationSeries
    h_psi: ExtrapolationSeries
    difference: ExtrapolationSeries
    final_gap: float
    max_drift: float
    max_identity_residual: float
    status: str
    reasons: list

    def to_dict(self) -> dict:
        return {
            "rows": self.rows,
            "h_ig": self.h_ig.to_dict(),
            "h_psi": self.h_psi.to_dict(),
            "difference": self.difference.to_dict(),
            "final_gap": self.final_gap,
            "max_drift": self.max_drift,
            "max_identity_residual": self.max_identity_residual,
            "status": self.status,
            "reasons": self.reasons,
        }


def strictly_decreasing(values) -> bool:
    v = list(values)
    return all(b < a for a, b in zip(v, v[1:]))


def drift_levels(buffer: int) -> tuple[int, int]:
    """Buffer pair compared by the drift gate: (b-1, b), or (0, 1) when b = 0."""
    return (buffer - 1, buffer) if buffer >= 1 else (0, 1)


def verify_theorem1(cfg: dict) -> TheoremReport:
    pot = cfg_model(cfg)
    beta = cfg["beta"]
    tol = cfg["tolerances"]
    psi = cfg_psi(cfg)
    omega = cfg_omega(cfg)
    k = cfg["extrapolation_points"]
    rows = []
    for box in cfg_boxes(cfg):
        n = box.volume
        gap = log_density_gap(pot, beta, box, marginal(psi, box), cfg["max_dim"])
        w = marginal(omega, box)
        rel_ig = relative_entropy(w, gap.rho_ig)
        rel_psi = relative_entropy(w, gap.psi)
        expct = gap.expectation(w)
        b1, b2 = drift_levels(cfg["buffer"])
        drift = buffered_drift(psi, box, b1, b2)
        rows.append({
            "volume": n,
            "rel_ig_per_site": rel_ig / n,
            "rel_psi_per_site": rel_psi / n,
            "difference_per_site": (rel_ig - rel_psi) / n,
            "expectation_per_site": expct / n,
            "identity_residual": abs((rel_ig - rel_psi) - expct),
            "drift": drift,
        })
    vols = [r["volume"] for r in rows]
    h_ig = extrapolate(vols, [r["rel_ig_per_site"] for r in rows], k)
    h_psi = extrapolate(vols, [r["rel_psi_per_site"] for r in rows], k)
    diffs = [abs(r["difference_per_site"]) for r in rows]
    diff_series = extrapolate(vols, diffs, k)
    max_drift = max(r["drift"] for r in rows)
    max_res = max(r["identity_residual"] for r in rows)
    reasons = []
    if max_drift >= tol["drift_gate"]:
        status = INCONCLUSIVE
        reasons.append(f"buffer drift {max_drift:.3e} >= gate {tol['drift_gate']}")
    else:
        status = PASS
        exact_zero = all(d <= tol["identity"] for d in diffs)
        if not exact_zero and not strictly_decreasing(diffs):
            status = FAIL
            reasons.append("per-site difference is not strictly decreasing in volume")
        if diffs[-1] >= tol["final_gap"]:
            status = FAIL
            reasons.append(f"final per-site difference {diffs[-1]:.3e} >= {tol['final_gap']}")
        if max_res > tol["identity"]:
            status = FAIL
            reasons.append(f"difference identity residual {max_res:.3e} > {tol['identity']}")
    return TheoremReport(rows, h_ig, h_psi, diff_series, diffs[-1], max_drift, max_res, status, reasons)


def mcmillan_series(state: StateFamily, boxes) -> list[dict]:
    """Per box: mean S(phi_L)/|L| and variance Var_phi(-log D)/|L|^2."""
    out = []
    for box in boxes:
        rho = marginal(state, box)
        n = box.volume
        out.append({"volume": n, "mean": von_neumann_entropy(rho) / n,
                    "variance": entropy_variance(rho) / n**2})
    return out


def mcmillan_check(cfg: dict) -> RunResult:
    state = cfg_psi(cfg) if cfg["mcmillan"]["state"] == "psi" else cfg_omega(cfg)
    rows = mcmillan_series(state, cfg_boxes(cfg))
    vols = [r["volume"] for r in rows]
    k = cfg["extrapolation_points"]
    means = extrapolate(vols, [r["mean"] for r in rows], k)
    var = extrapolate(vols, [r["variance"] for r in rows], k)
    variances = [r["variance"] for r in rows]
    tol = cfg["tolerances"]
    msgs = []
    status = PASS
    # a scalar density has zero variance at every volume
    flat_zero = all(v <= tol["identity"] for v in variances)
    if not flat_zero and not strictly_decreasing(variances):
        status = FAIL
        msgs.append("variance is not strictly decreasing in volume")
    mean_dev = abs(rows[-1]["mean"] - means.limit_estimate)
    if mean_dev > tol["mcmillan_mean"]:
        status = FAIL
        msgs.append(f"final mean deviates from the entropy-density limit by {mean_dev:.3e}")
    return RunResult("mcmillan", status,
                     {"rows": rows, "entropy_density_limit": means.limit_estimate, "mean_deviation": mean_dev},
                     {"mcmillan_mean": means, "mcmillan_variance": var}, msgs)


# subcommands

def _run_pressure(cfg):
    s = pressure(cfg_model(cfg), cfg["beta"], cfg_boxes(cfg), cfg["extrapolation_points"], cfg["max_dim"])
    return RunResult("pressure", OK, {"limit_estimate": s.limit_estimate}, {"pressure": s})


def _run_entropy_density(cfg):
    s = entropy_density(cfg_omega(cfg), cfg_boxes(cfg), cfg["extrapolation_points"])
    return RunResult("entropy-density", OK, {"limit_estimate": s.limit_estimate}, {"entropy_density": s})


def _run_info_rate(cfg):
    pot, beta, boxes = cfg_model(cfg), cfg["beta"], cfg_boxes(cfg)
    omega = cfg_omega(cfg)
    s = information_rate(pot, beta, omega, boxes, cfg["extrapolation_points"], cfg["max_dim"])
    f = free_energy_functional(pot, beta, omega, boxes, cfg["extrapolation_points"], cfg["max_dim"])
    res = [relative_entropy_identity(pot, beta, omega, b, cfg["max_dim"]).residual for b in boxes]
    tol = cfg["tolerances"]["identity"]
    worst = max(res)
    negative = min(s.values) < -tol
    status = PASS if worst <= tol and not negative else FAIL
    msgs = [] if status == PASS else [f"identity residual {worst:.3e} or negative rate point"]
    return RunResult("info-rate", status,
                     {"limit_estimate": s.limit_estimate, "identity_residuals": res,
                      "free_energy_limit": f.limit_estimate},
                     {"information_rate": s, "free_energy": f}, msgs)


def _run_rel_ent_density(cfg):
    s = relative_entropy_density(cfg_omega(cfg), cfg_psi(cfg), cfg_boxes(cfg), cfg["extrapolation_points"])
    return RunResult("rel-ent-density", OK, {"limit_estimate": s.limit_estimate}, {"relative_entropy_density": s})


def _run_mean_field(cfg):
    pot, beta, boxes = cfg_model(cfg), cfg["beta"], cfg_boxes(cfg)
    mf = cfg["mean_field"]
    r = mean_field_scan(pot, beta, bloch_grid(mf["radii"]), boxes, cfg["extrapolation_points"], mf["tol"])
    p = pressure(pot, beta, boxes, cfg["extrapolation_points"], cfg["max_dim"])
    slack = p.limit_estimate + cfg["tolerances"]["variational"] - r.value
    status = PASS if slack >= 0 else FAIL
    return RunResult("mean-field", status,
                     {"value": r.value, "params": [float(x) for x in np.ravel(r.params).real],
                      "pressure_limit": p.limit_estimate, "slack": slack},
                     {"mean_field": r.series, "pressure": p},
                     [] if status == PASS else ["mean-field value exceeds the pressure estimate"])


def _interval(pair):
    return Region.interval(pair[0], pair[1])


def _run_gibbs_product(cfg):
    pot = cfg_model(cfg)
    gp = cfg["gibbs_product"]
    betas = gp.get("betas") or [cfg["beta"]]
    rows = []
    for b in betas:
        c = gibbs_product_check(pot, b, _interval(gp["inner"]), _interval(gp["ambient"]), cfg["max_dim"])
        rows.append({"beta": b, "marginal_gap": c.marginal_gap, "factorization_gap": c.factorization_gap})
    tol = cfg["tolerances"]["product_gap"]
    worst = max(max(r["marginal_gap"], r["factorization_gap"]) for r in rows)
    status = PASS if worst <= tol else FAIL
    return RunResult("verify-gibbs-product", status, {"rows": rows, "worst_gap": worst})


def random_hermitian(dim: int, rng: np.random.Generator, scale: float = 1.0) -> np.ndarray:
    g = rng.normal(size=(dim, dim)) + 1j * rng.normal(size=(dim, dim))
    return scale * 0.5 * (g + g.conj().T) / np.sqrt(dim)


def random_pair(rng: np.random.Generator, dim: int):
    """Random full-rank density and Hermitian perturbation of dimension ``dim`` on generic sites."""
    support = ((0,),)
    rho = random_density(dim, rng, support=support, site_dim=dim)
    h = LocalOperator(support, dim, random_hermitian(dim, rng), True)
    return rho, h


def _run_pb_gt(cfg):
    rng = np.random.default_rng(cfg["seed"])
    pg = cfg["pb_gt"]
    worst = {"pb": math.inf, "gt": math.inf, "norm_lower": math.inf, "norm_upper": math.inf}
    for _ in range(pg["pairs"]):
        dim = int(rng.integers(pg["min_dim"], pg["max_dim"] + 1))
        rho, h = random_pair(rng, dim)
        s = pb_gt_check(rho, h)
        for key, val in zip(worst, s):
            worst[key] = min(worst[key], val)
    tol = cfg["tolerances"]["slack"]
    status = PASS if min(worst.values()) >= -tol else FAIL
    return RunResult("pb-gt", status, {"min_slacks": worst, "pairs": pg["pairs"]})


def _run_log_gap(cfg):
    pot, beta = cfg_model(cfg), cfg["beta"]
    psi, omega = cfg_psi(cfg), cfg_omega(cfg)
    rows = []
    for box in cfg_boxes(cfg):
        g = log_density_gap(pot, beta, box, marginal(psi, box), cfg["max_dim"])
        rows.append({"volume": box.volume, "gap_norm": g.gap_norm, "per_site": g.per_site,
                     "ratio": g.ratio, "surface_norm": g.surface_norm,
                     "identity_residual": g.identity_residual(marginal(omega, box))})
    tol = cfg["tolerances"]["identity"]
    per_site = [r["per_site"] for r in rows]
    ratios = [r["ratio"] for r in rows]
    msgs = []
    if not (all(p <= tol for p in per_site) or strictly_decreasing(per_site)):
        msgs.append("per-site log-density gap is not decreasing")
    running = np.maximum.accumulate(ratios)
    if any(b > a * (1 + 1e-9) + 1e-12 for a, b in zip(ratios, ratios[1:])):
        msgs.append("gap ratio grows with volume")
    if max(r["identity_residual"] for r in rows) > tol:
        msgs.append("difference identity residual above tolerance")
    vols = [r["volume"] for r in rows]
    k = cfg["extrapolation_points"]
    return RunResult("log-gap", FAIL if msgs else PASS,
                     {"rows": rows, "max_ratio": float(running[-1])},
                     {"log_gap_per_site": extrapolate(vols, per_site, k)}, msgs)


def _run_theorem1(cfg):
    rep = verify_theorem1(cfg)
    return RunResult("verify-theorem1", rep.status, rep.to_dict(),
                     {"h_ig": rep.h_ig, "h_psi": rep.h_psi, "difference": rep.difference}, rep.reasons)


def _run_selftest(cfg):
    from .selftest import run_property_suite
    results = run_property_suite(cfg["seed"], **cfg["selftest"])
    failed = [name for name, r in results.items() if not r["passed"]]
    return RunResult("selftest", FAIL if failed else PASS, results, {},
                     [f"{name} failed" for name in failed])


COMMANDS: dict[str, Callable[[dict], RunResult]] = {
    "pressure": _run_pressure,
    "entropy-density": _run_entropy_density,
    "info-rate": _run_info_rate,
    "rel-ent-density": _run_rel_ent_density,
    "mean-field": _run_mean_field,
    "verify-gibbs-product": _run_gibbs_product,
    "pb-gt": _run_pb_gt,
    "log-gap": _run_log_gap,
    "verify-theorem1": _run_theorem1,
    "mcmillan": mcmillan_check,
    "selftest": _run_selftest,
}


def jsonable(obj):
    """Recursively convert numpy scalars and infinities into JSON-safe values."""
    if isinstance(obj, dict):
        return {str(k): jsonable(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [jsonable(v) for v in obj]
    if isinstance(obj, (bool, np.bool_)):
        return bool(obj)
    if isinstance(obj, (int, np.integer)):
        return int(obj)
    if isinstance(obj, (float, np.floating)):
        x = float(obj)
        if math.isinf(x):
            return "inf" if x > 0 else "-inf"
        if math.isnan(x):
            return "nan"
        return x
    if isinstance(obj, ExtrapolationSeries):
        return obj.to_dict()
    return obj


def write_outputs(result: RunResult, cfg: dict) -> list[str]:
    out = cfg["output"]
    os.makedirs(out["directory"], exist_ok=True)
    prefix = out["prefix"] or result.command
    files = []
    for name, s in result.series.items():
        path = os.path.join(out["directory"], f"{prefix}_{name}.csv")
        s.to_csv(path)
        files.append(path)
    summary = {
        "schema_version": SCHEMA_VERSION,
        "csv_version": CSV_VERSION,
        "artifact_version": __version__,
        "command": result.command,
        "status": result.status,
        "seed": cfg["seed"],
        "config": cfg,
        "results": result.results,
        "series": {k: v.to_dict() for k, v in result.series.items()},
        "messages": result.messages,
        "files": [os.path.basename(f) for f in files],
    }
    path = os.path.join(out["directory"], f"{prefix}_summary.json")
    with open(path, "w") as fh:
        json.dump(jsonable(summary), fh, indent=2, sort_keys=True)
    files.append(path)
    return files


def run_suite(cfg: dict, commands: list[str] | str) -> tuple[int, list[RunResult]]:
    """Run the named subcommands and write their outputs; exit status is the worst outcome."""
    if isinstance(commands, str):
        commands = [commands]
    results = []
    for name in commands:
        if name not in COMMANDS:
            raise ConfigError(f"unknown command {name!r}")
        res = COMMANDS[name](cfg)
        if cfg["output"]["write"]:
            res.results["files"] = write_outputs(res, cfg)
        results.append(res)
    codes = [r.exit_code for r in results]
    # fail outranks inconclusive
    code = 1 if 1 in codes else (3 if 3 in codes else 0)
    return code, results
