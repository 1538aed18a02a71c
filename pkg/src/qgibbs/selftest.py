"""Seeded randomized property suite behind the ``selftest`` subcommand.

Each check returns the worst observed value of its slack or residual, so a
report shows how close every property came to failing.
"""

from __future__ import annotations

import numpy as np
from scipy.linalg import expm

from .entropy import relative_entropy, von_neumann_entropy
from .lattice import Region, preset_potential
from .operators import LocalOperator, embed, matrix_function, partial_trace, trace_distance
from .perturbation import pb_gt_check, perturb
from .states import DensityMatrix, StateFamily, marginal, random_density


def _qubits(k: int) -> tuple:
    return tuple((i,) for i in range(k))


def klein(rng, pairs: int = 200) -> dict:
    """S(r1|r2) >= 0 on random pairs, and zero exactly when the states coincide."""
    worst = np.inf
    eq_worst = 0.0
    for _ in range(pairs):
        k = int(rng.integers(1, 4))
        a = random_density(2**k, rng)
        b = random_density(2**k, rng)
        worst = min(worst, relative_entropy(a, b))
        eq_worst = max(eq_worst, abs(relative_entropy(a, a)))
    return {"passed": bool(worst >= -1e-10 and eq_worst < 1e-9),
            "min_relative_entropy": float(worst), "max_self_entropy": eq_worst}


def _ssa_slack(rho: LocalOperator, a, b, c) -> float:
    def s(keep):
        return von_neumann_entropy(DensityMatrix.from_operator(partial_trace(rho, keep), validate=False))
    return s(a + b) + s(b + c) - s(a + b + c) - s(b)


def strong_subadditivity(rng, states: int = 100) -> dict:
    """S(AB)+S(BC)-S(ABC)-S(B) >= 0 on random tripartite states and on model marginals."""
    sites = _qubits(3)
    a, b, c = [sites[0]], [sites[1]], [sites[2]]
    worst = np.inf
    for _ in range(states):
        rank = int(rng.integers(1, 9))
        rho = random_density(8, rng, rank=rank)
        worst = min(worst, _ssa_slack(rho, a, b, c))
    model_worst = np.inf
    for name in ("tfi", "heisenberg", "xy", "classical_ising"):
        fam = StateFamily.buffered_gibbs(preset_potential(name), 0.8, 2, method="dense")
        rho = marginal(fam, Region.interval(0, 5))
        s = rho.support
        model_worst = min(model_worst, _ssa_slack(rho, list(s[:2]), list(s[2:4]), list(s[4:])))
    return {"passed": bool(min(worst, model_worst) >= -1e-9),
            "min_slack_random": float(worst), "min_slack_model": float(model_worst)}


def monotonicity(rng, pairs: int = 50) -> dict:
    """S(r1|r2) on a subsystem never exceeds the value on the whole system."""
    worst = np.inf
    for _ in range(pairs):
        a = random_density(8, rng)
        b = random_density(8, rng)
        big = relative_entropy(a, b)
        small = relative_entropy(a.reduce([(0,), (1,)]), b.reduce([(0,), (1,)]))
        worst = min(worst, big - small)
    fam_a = StateFamily.product([0.3, 0.7])
    fam_b = StateFamily.buffered_gibbs(preset_potential("tfi"), 0.8, 2)
    model = np.inf
    for n in (2, 3, 4):
        small_r, big_r = Region.interval(0, n - 1), Region.interval(0, n)
        model = min(model, relative_entropy(marginal(fam_a, big_r), marginal(fam_b, big_r))
                    - relative_entropy(marginal(fam_a, small_r), marginal(fam_b, small_r)))
    return {"passed": bool(min(worst, model) >= -1e-9),
            "min_slack_random": float(worst), "min_slack_model": float(model)}


def adjointness(rng, trials: int = 50) -> dict:
    """Tr(partial_trace(X) B) = Tr(X embed(B))."""
    worst = 0.0
    sites = _qubits(3)
    for _ in range(trials):
        x = LocalOperator(sites, 2, rng.normal(size=(8, 8)) + 1j * rng.normal(size=(8, 8)))
        keep = [sites[i] for i in sorted(rng.choice(3, size=int(rng.integers(1, 3)), replace=False))]
        bmat = rng.normal(size=(2 ** len(keep),) * 2) + 1j * rng.normal(size=(2 ** len(keep),) * 2)
        bop = LocalOperator(tuple(keep), 2, bmat)
        lhs = np.trace(partial_trace(x, keep).matrix @ bmat)
        rhs = np.trace(x.matrix @ embed(bop, sites).matrix)
        worst = max(worst, abs(lhs - rhs))
    return {"passed": bool(worst <= 1e-10), "max_residual": float(worst)}


def exp_log_roundtrip(rng, trials: int = 100) -> dict:
    """exp(log D) = D for random full-rank densities of dimension 4 to 16."""
    worst = 0.0
    for _ in range(trials):
        k = int(rng.integers(2, 5))
        d = random_density(2**k, rng)
        back = matrix_function(matrix_function(d, "log_on_support"), "exp")
        worst = max(worst, float(np.max(np.abs(back.matrix - d.matrix))))
    return {"passed": bool(worst <= 1e-10), "max_residual": worst}


def perturbation_bounds(rng, pairs: int = 100) -> dict:
    """Slacks of the exponential trace bounds and the perturbation involution."""
    worst = np.inf
    inv = 0.0
    for _ in range(pairs):
        dim = int(rng.integers(4, 17))
        rho = random_density(dim, rng, support=((0,),), site_dim=dim)
        g = rng.normal(size=(dim, dim)) + 1j * rng.normal(size=(dim, dim))
        h = LocalOperator(((0,),), dim, 0.5 * (g + g.conj().T) / np.sqrt(dim), True)
        worst = min(worst, min(pb_gt_check(rho, h)))
        un = perturb(rho, h).unnormalized
        back = expm(matrix_function(un, "log").matrix - h.matrix)
        inv = max(inv, float(np.max(np.abs(back - rho.matrix))))
    return {"passed": bool(worst >= -1e-10 and inv <= 1e-9), "min_slack": float(worst),
            "max_involution_residual": inv}


def run_property_suite(seed: int, klein_pairs: int = 200, ssa_states: int = 100,
                       roundtrip: int = 100) -> dict:
    """Run every property check from one seeded generator; results include the seed."""
    rng = np.random.default_rng(seed)
    out = {
        "klein": klein(rng, klein_pairs),
        "strong_subadditivity": strong_subadditivity(rng, ssa_states),
        "monotonicity": monotonicity(rng),
        "adjointness": adjointness(rng),
        "exp_log_roundtrip": exp_log_roundtrip(rng, roundtrip),
        "perturbation_bounds": perturbation_bounds(rng),
    }
    for r in out.values():
        r["seed"] = seed
    return out
