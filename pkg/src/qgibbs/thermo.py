"""Pressure, energy density, information rate and the free-energy functional.

Every function evaluates a finite-volume quantity on each box of a sequence
and returns an :class:`ExtrapolationSeries` whose limit is the 1/|L| fit.
"""

from __future__ import annotations

import itertools
from typing import NamedTuple, Sequence

import numpy as np

from .entropy import relative_entropy, von_neumann_entropy
from .errors import ValidationError
from .lattice import Potential, Region, internal_energy
from .operators import SIGMA_X, SIGMA_Y, SIGMA_Z, kron_all
from .series import DEFAULT_FIT_POINTS, ExtrapolationSeries, extrapolate
from .states import StateFamily, gibbs_density, marginal

PAULIS = (SIGMA_X, SIGMA_Y, SIGMA_Z)


def _check_boxes(boxes: Sequence[Region]):
    boxes = list(boxes)
    if not boxes:
        raise ValidationError("empty box sequence")
    vols = [b.volume for b in boxes]
    if any(b <= a for a, b in zip(vols, vols[1:])):
        raise ValidationError(f"boxes must strictly increase in volume, got {vols}")
    return boxes


def log_partition(pot: Potential, beta: float, region: Region, max_dim: int | None = None) -> float:
    """log Tr exp(-beta U_region), from the spectrum of U alone."""
    u = internal_energy(pot, region, max_dim).matrix
    u = 0.5 * (u + u.conj().T)
    w = np.linalg.eigvalsh(u.real if not np.any(u.imag) else u)
    return float(np.logaddexp.reduce(-beta * w))


def energy_expectation(pot: Potential, state: StateFamily, region: Region,
                       max_dim: int | None = None) -> float:
    """omega(U_region) for the state's marginal on ``region``."""
    rho = marginal(state, region)
    return rho.expect(internal_energy(pot, region, max_dim))


def pressure(pot: Potential, beta: float, boxes: Sequence[Region], k: int = DEFAULT_FIT_POINTS,
             max_dim: int | None = None) -> ExtrapolationSeries:
    boxes = _check_boxes(boxes)
    vals = [log_partition(pot, beta, b, max_dim) / b.volume for b in boxes]
    return extrapolate([b.volume for b in boxes], vals, k)


def energy_density(pot: Potential, state: StateFamily, boxes: Sequence[Region],
                   k: int = DEFAULT_FIT_POINTS, max_dim: int | None = None) -> ExtrapolationSeries:
    boxes = _check_boxes(boxes)
    vals = [energy_expectation(pot, state, b, max_dim) / b.volume for b in boxes]
    return extrapolate([b.volume for b in boxes], vals, k)


def information_rate(pot: Potential, beta: float, state: StateFamily, boxes: Sequence[Region],
                     k: int = DEFAULT_FIT_POINTS, max_dim: int | None = None) -> ExtrapolationSeries:
    """Series of S(omega_L | rho^IG_L)/|L| against the internal Gibbs states."""
    boxes = _check_boxes(boxes)
    vals = []
    for b in boxes:
        rho_ig = gibbs_density(pot, beta, b, max_dim)[0]
        vals.append(relative_entropy(marginal(state, b), rho_ig) / b.volume)
    return extrapolate([b.volume for b in boxes], vals, k)


def free_energy_functional(pot: Potential, beta: float, state: StateFamily, boxes: Sequence[Region],
                           k: int = DEFAULT_FIT_POINTS, max_dim: int | None = None) -> ExtrapolationSeries:
    """Series of (S(omega_L) - beta omega(U_L)) / |L|."""
    boxes = _check_boxes(boxes)
    vals = []
    for b in boxes:
        s = von_neumann_entropy(marginal(state, b))
        vals.append((s - beta * energy_expectation(pot, state, b, max_dim)) / b.volume)
    return extrapolate([b.volume for b in boxes], vals, k)


class IdentityCheck(NamedTuple):
    relative_entropy: float
    entropy: float
    energy: float
    log_partition: float
    residual: float


def relative_entropy_identity(pot: Potential, beta: float, state: StateFamily, region: Region,
                              max_dim: int | None = None) -> IdentityCheck:
    """Both sides of S(w|rho^IG) = -S(w) + beta w(U) + log Tr exp(-beta U) on one region.

    The relative entropy is evaluated directly from the two density matrices,
    independently of the right-hand side.
    """
    rho_ig, log_z = gibbs_density(pot, beta, region, max_dim)
    omega = marginal(state, region)
    rel = relative_entropy(omega, rho_ig)
    s = von_neumann_entropy(omega)
    e = omega.expect(internal_energy(pot, region, max_dim))
    return IdentityCheck(rel, s, e, log_z, abs(rel + s - beta * e - log_z))


# mean-field scan over product states

def bloch_density(r) -> np.ndarray:
    """(I + r.sigma)/2 for a Bloch vector with |r| <= 1."""
    r = np.asarray(r, dtype=float)
    return 0.5 * (np.eye(2) + sum(c * p for c, p in zip(r, PAULIS)))


def bloch_grid(n_radii: int = 5) -> np.ndarray:
    """Bloch vectors on the 26 cube directions at ``n_radii`` radii in (0, 1], plus the origin."""
    dirs = np.array([d for d in itertools.product((-1, 0, 1), repeat=3) if any(d)], dtype=float)
    dirs /= np.linalg.norm(dirs, axis=1)[:, None]
    radii = np.linspace(0, 1, n_radii + 1)[1:]
    pts = [np.zeros(3)] + [r * d for r in radii for d in dirs]
    return np.array(pts)


def _translate_counts(pot: Potential, region: Region) -> list[int]:
    inside = region._set
    counts = []
    for t in pot.terms:
        c = 0
        for x in region.sites:
            if all(tuple(a + b for a, b in zip(s, x)) in inside for s in t.support):
                c += 1
        counts.append(c)
    return counts


def _entropy_of(rho0: np.ndarray) -> float:
    w = np.clip(np.linalg.eigvalsh(0.5 * (rho0 + rho0.conj().T)), 0.0, None)
    w = w[w > 0]
    return float(-np.sum(w * np.log(w)))


class MeanFieldResult(NamedTuple):
    params: np.ndarray
    rho0: np.ndarray
    series: ExtrapolationSeries
    value: float


def mean_field_scan(pot: Potential, beta: float, grid=None, boxes: Sequence[Region] = (),
                    k: int = DEFAULT_FIT_POINTS, tol: float = 1e-6) -> MeanFieldResult:
    """Best product state for the free-energy functional over a grid plus local refinement.

    ``grid`` is an array of Bloch vectors (site dimension 2) or a list of
    single-site density matrices.  The best grid point is refined by
    coordinate descent on its Bloch vector with step halving down to ``tol``.
    The result is a lower bound on the pressure.  Product-state values are
    evaluated in closed form: S(w_L) = |L| S(rho0) and w(U_L) is the sum of
    term expectations weighted by their translate counts, so no large
    matrices are built.
    """
    boxes = _check_boxes(boxes)
    n = pot.site_dim
    if grid is None:
        if n != 2:
            raise ValidationError("default grid needs site dimension 2; pass explicit densities")
        grid = bloch_grid()
    grid = list(grid)
    if not grid:
        raise ValidationError("empty mean-field grid")
    as_bloch = np.ndim(grid[0]) == 1
    if as_bloch and n != 2:
        raise ValidationError("Bloch-vector grids need site dimension 2")
    counts = [_translate_counts(pot, b) for b in boxes]
    vols = [b.volume for b in boxes]

    def series_for(rho0):
        s = _entropy_of(rho0)
        term_e = [float(np.einsum("ij,ji->", kron_all([rho0] * len(t.support)), t.matrix).real)
                  for t in pot.terms]
        vals = [s - beta * float(np.dot(c, term_e)) / v for c, v in zip(counts, vols)]
        return extrapolate(vols, vals, k)

    def density(p):
        if as_bloch:
            return bloch_density(p)
        r = np.array(p, dtype=complex)
        if r.shape != (n, n):
            raise ValidationError(f"grid density has shape {r.shape}, expected {(n, n)}")
        return r

    scored = [(series_for(density(p)).limit_estimate, i) for i, p in enumerate(grid)]
    best_val, best_i = max(scored, key=lambda t: (t[0], -t[1]))
    best = grid[best_i]
    if as_bloch or n == 2:
        r = np.asarray(best, dtype=float) if as_bloch else _to_bloch(density(best))
        r, best_val = _coordinate_descent(lambda q: series_for(bloch_density(q)).limit_estimate,
                                          r, best_val, tol)
        rho0 = bloch_density(r)
        params = r
    else:
        rho0 = density(best)
        params = rho0
    return MeanFieldResult(params, rho0, series_for(rho0), best_val)


def _to_bloch(rho: np.ndarray) -> np.ndarray:
    return np.array([float(np.trace(rho @ p).real) for p in PAULIS])


def _coordinate_descent(f, r, val, tol):
    step = 0.25
    r = np.array(r, dtype=float)
    while step >= tol:
        improved = False
        for axis in range(3):
            for sign in (1.0, -1.0):
                cand = r.copy()
                cand[axis] += sign * step
                if np.linalg.norm(cand) > 1.0:
                    continue
                v = f(cand)
                if v > val:
                    r, val, improved = cand, v, True
                    break
        if not improved:
            step *= 0.5
    return r, val
