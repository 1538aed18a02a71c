"""Finite-dimensional perturbation of states by Hermitian operators.

A full-rank density rho perturbed by a Hermitian h is the positive operator
exp(log rho + h); its trace is the weight and dividing by it gives the
perturbed state.  The checks below exercise the inequalities and identities
that connect internal Gibbs states, buffered marginals and relative entropies.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import NamedTuple

import numpy as np

from .entropy import relative_entropy
from .errors import DomainError, ValidationError
from .lattice import Potential, Region, surface_energy, surface_norm
from .operators import (
    DEFAULT_CUTOFF,
    LocalOperator,
    embed,
    operator_norm,
    partial_trace,
    trace_distance,
)
from .states import DensityMatrix, check_density, gibbs_density


class Perturbed(NamedTuple):
    unnormalized: LocalOperator
    weight: float
    normalized: DensityMatrix
    log_weight: float


def _log_of(rho: DensityMatrix, support_cutoff: float) -> np.ndarray:
    if not rho.is_full_rank(support_cutoff):
        raise DomainError("perturbation needs a full-rank density matrix")
    return rho.log(support_cutoff).matrix


def perturb(rho: LocalOperator, h: LocalOperator, support_cutoff: float = DEFAULT_CUTOFF) -> Perturbed:
    """exp(log rho + h), its trace, and the normalized state."""
    rho = check_density(rho)
    if not h.hermitian:
        raise ValidationError("perturbation h must be Hermitian-flagged")
    rho._same_frame(h)
    k = _log_of(rho, support_cutoff) + h.matrix
    k = 0.5 * (k + k.conj().T)
    w, v = np.linalg.eigh(k)
    log_weight = float(np.logaddexp.reduce(w))
    unnorm = (v * np.exp(w)) @ v.conj().T
    p = np.exp(w - log_weight)
    normalized = DensityMatrix(rho.support, rho.site_dim, (v * p) @ v.conj().T,
                               log_matrix=k - log_weight * np.eye(len(w)), validate=False)
    normalized.__dict__["_eigh"] = (p, v)
    return Perturbed(LocalOperator(rho.support, rho.site_dim, unnorm, True),
                     float(np.exp(log_weight)), normalized, log_weight)


class PbGtSlacks(NamedTuple):
    pb_slack: float
    gt_slack: float
    norm_lower_slack: float
    norm_upper_slack: float


def pb_gt_check(rho: LocalOperator, h: LocalOperator, support_cutoff: float = DEFAULT_CUTOFF) -> PbGtSlacks:
    """Slacks of exp(rho(h)) <= Tr exp(log rho + h) <= rho(exp h) and of exp(-||h||) <= weight <= exp(||h||)."""
    rho = check_density(rho)
    weight = perturb(rho, h, support_cutoff).weight
    mean_h = rho.expect(h)
    wh, vh = h._eigh
    exp_h = (vh * np.exp(wh)) @ vh.conj().T
    gt_bound = float(np.einsum("ij,ji->", rho.matrix, exp_h).real)
    nh = operator_norm(h)
    return PbGtSlacks(float(weight - np.exp(mean_h)), float(gt_bound - weight),
                      float(weight - np.exp(-nh)), float(np.exp(nh) - weight))


class ProductCheck(NamedTuple):
    marginal_gap: float
    factorization_gap: float


def gibbs_product_check(pot: Potential, beta: float, inner: Region, ambient: Region,
                        max_dim: int | None = None) -> ProductCheck:
    """Perturbing the ambient Gibbs state by beta W_inner must give rho^IG_inner (x) rho^IG_outer.

    Both gaps are trace distances.
    """
    psi, _ = gibbs_density(pot, beta, ambient, max_dim)
    h = beta * surface_energy(pot, inner, ambient, max_dim)
    pert = perturb(psi, LocalOperator(h.support, h.site_dim, h.matrix, True)).normalized
    rho_in, _ = gibbs_density(pot, beta, inner, max_dim)
    outer = ambient.difference(inner)
    reduced = partial_trace(pert, inner.sites)
    marginal_gap = trace_distance(LocalOperator(reduced.support, reduced.site_dim, reduced.matrix, True), rho_in)
    if outer.volume:
        rho_out, _ = gibbs_density(pot, beta, outer, max_dim)
        prod = embed(rho_in, ambient.sites, max_dim).matrix @ embed(rho_out, ambient.sites, max_dim).matrix
    else:
        prod = rho_in.matrix
    fact_gap = trace_distance(pert, LocalOperator(pert.support, pert.site_dim, prod, True))
    return ProductCheck(marginal_gap, fact_gap)


@dataclass(frozen=True, eq=False)
class LogDensityGap:
    """Comparison of log rho^IG and log psi on one region.

    ``ratio`` is gap_norm / (beta ||W||), an empirical stand-in for the
    constant bounding the gap (0 when both vanish, inf when only W does).
    """

    region: Region
    gap_norm: float
    per_site: float
    ratio: float
    surface_norm: float
    rho_ig: DensityMatrix
    psi: DensityMatrix

    def difference(self, omega: LocalOperator) -> float:
        """S(w|rho^IG) - S(w|psi), evaluated directly from the two relative entropies."""
        return relative_entropy(omega, self.rho_ig) - relative_entropy(omega, self.psi)

    def expectation(self, omega: LocalOperator) -> float:
        """w(log psi - log rho^IG)."""
        omega = check_density(omega)
        diff = self.psi.log().matrix - self.rho_ig.log().matrix
        return float(np.einsum("ij,ji->", omega.matrix, diff).real)

    def identity_residual(self, omega: LocalOperator) -> float:
        return abs(self.difference(omega) - self.expectation(omega))


def log_density_gap(pot: Potential, beta: float, region: Region, psi_marginal: LocalOperator,
                    max_dim: int | None = None) -> LogDensityGap:
    psi = check_density(psi_marginal)
    if psi.support != tuple(region.sites):
        raise ValidationError("psi marginal does not live on the region")
    if not psi.is_full_rank():
        raise DomainError("psi marginal is rank deficient")
    rho_ig, _ = gibbs_density(pot, beta, region, max_dim)
    diff = rho_ig.log().matrix - psi.log().matrix
    diff = 0.5 * (diff + diff.conj().T)
    gap = operator_norm(LocalOperator(region.sites, pot.site_dim, diff, True))
    wn = surface_norm(pot, region, max_dim)
    denom = beta * wn
    if denom > 0:
        ratio = gap / denom
    else:
        ratio = 0.0 if gap < 1e-12 else float("inf")
    return LogDensityGap(region, gap, gap / region.volume, ratio, wn, rho_ig, psi)
