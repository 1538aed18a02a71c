"""Von Neumann entropy, Umegaki relative entropy and their densities."""

from __future__ import annotations

from typing import Sequence

import numpy as np

from .errors import ValidationError
from .lattice import Region
from .operators import DEFAULT_CUTOFF, LocalOperator, herm_eig
from .states import StateFamily, check_density, marginal
from .series import ExtrapolationSeries, extrapolate

# Threshold on ||(I - P2) P1|| for support containment.
CONTAINMENT_TOL = 1e-8


def von_neumann_entropy(rho: LocalOperator) -> float:
    """S = -sum p log p over the spectrum, with 0 log 0 = 0."""
    rho = check_density(rho)
    w = np.clip(rho._eigh[0], 0.0, None)
    w = w[w > 0]
    s = float(-np.sum(w * np.log(w)))
    return min(max(s, 0.0), float(np.log(rho.dim)))


def _support_projector(rho, cutoff):
    w, v, rank = herm_eig(rho, cutoff)
    return v[:, w.size - rank:]


def support_contained(rho1: LocalOperator, rho2: LocalOperator,
                      support_cutoff: float = DEFAULT_CUTOFF) -> bool:
    """Whether supp rho1 lies inside supp rho2, via ||(I - P2) P1|| <= 1e-8."""
    v1 = _support_projector(rho1, support_cutoff)
    v2 = _support_projector(rho2, support_cutoff)
    if v1.shape[1] == 0:
        return True
    resid = v1 - v2 @ (v2.conj().T @ v1)
    return float(np.linalg.norm(resid, 2)) <= CONTAINMENT_TOL


def relative_entropy(rho1: LocalOperator, rho2: LocalOperator,
                     support_cutoff: float = DEFAULT_CUTOFF) -> float:
    """Tr rho1 (log rho1 - log rho2), or +inf when supp rho1 is not inside supp rho2."""
    rho1 = check_density(rho1)
    rho2 = check_density(rho2)
    if rho1.dim != rho2.dim:
        raise ValidationError(f"dimension mismatch: {rho1.dim} vs {rho2.dim}")
    if not (rho2.log_matrix is not None or support_contained(rho1, rho2, support_cutoff)):
        return float("inf")
    log2 = rho2.log(support_cutoff).matrix
    cross = float(np.einsum("ij,ji->", rho1.matrix, log2).real)
    return -von_neumann_entropy(rho1) - cross


def entropy_density(state: StateFamily, boxes: Sequence[Region], k: int = 4) -> ExtrapolationSeries:
    """Series of S(omega_L)/|L| with its 1/|L| extrapolation."""
    vols, vals = [], []
    for box in boxes:
        vols.append(box.volume)
        vals.append(von_neumann_entropy(marginal(state, box)) / box.volume)
    return extrapolate(vols, vals, k)


def relative_entropy_density(state: StateFamily, reference: StateFamily,
                             boxes: Sequence[Region], k: int = 4) -> ExtrapolationSeries:
    """Series of S(omega_L | psi_L)/|L|; infinite points make the series divergent."""
    vols, vals = [], []
    for box in boxes:
        vols.append(box.volume)
        vals.append(relative_entropy(marginal(state, box), marginal(reference, box)) / box.volume)
    return extrapolate(vols, vals, k)


def entropy_variance(rho: LocalOperator) -> float:
    """Variance of X = -log rho in the state rho: sum p (log p)^2 - S^2."""
    rho = check_density(rho)
    w = np.clip(rho._eigh[0], 0.0, None)
    w = w[w > 0]
    lw = np.log(w)
    mean = -float(np.sum(w * lw))
    return max(float(np.sum(w * (lw + mean) ** 2)), 0.0)
