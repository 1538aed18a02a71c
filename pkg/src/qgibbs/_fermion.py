"""Exact Gaussian reduction for spin chains that are quadratic in Jordan-Wigner fermions.

A one-dimensional spin-1/2 potential whose terms, possibly after a Hadamard
rotation of every site, are linear combinations of Majorana bilinears has a
Gaussian Gibbs state.  Its reduced state on an interval is again Gaussian and
is fixed by the Majorana covariance restricted to that interval, so a buffered
marginal costs O(L^3) plus the dense reconstruction on the interval itself.

Conventions: for sites 0..m-1 in Kronecker order,
gamma_{2j} = Z...Z X_j and gamma_{2j+1} = Z...Z Y_j.  A quadratic Hamiltonian
is H = (i/4) sum_kl A_kl gamma_k gamma_l + const with A real antisymmetric,
and the covariance is Gamma_kl = i <gamma_k gamma_l> for k != l.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache

import numpy as np
import scipy.sparse as sp

from .operators import SIGMA_X, SIGMA_Y, SIGMA_Z, embed, kron_all, LocalOperator

HADAMARD = np.array([[1, 1], [1, -1]], dtype=float) / np.sqrt(2)
_PROJ_TOL = 1e-10


@lru_cache(maxsize=16)
def majoranas(m: int) -> tuple:
    """Sparse Jordan-Wigner Majorana operators on m sites."""
    z, x, y = (sp.csr_matrix(a) for a in (SIGMA_Z, SIGMA_X, SIGMA_Y))
    out = []
    for j in range(m):
        for p in (x, y):
            factors = [z] * j + [p] + [sp.identity(2, format="csr")] * (m - j - 1)
            op = factors[0]
            for f in factors[1:]:
                op = sp.kron(op, f, format="csr")
            out.append(op)
    return tuple(out)


@dataclass(frozen=True)
class QuadraticForm:
    """Per-term Majorana coefficient blocks: (first site offset, A_local)."""

    frame: str
    blocks: tuple


def _hadamard_all(m: int) -> np.ndarray:
    return kron_all([HADAMARD] * m) if m else np.ones((1, 1))


def _project_term(mat: np.ndarray, m: int):
    gam = [g.toarray() for g in majoranas(m)]
    d = 2**m
    a = np.zeros((2 * m, 2 * m))
    recon = np.trace(mat) / d * np.eye(d, dtype=complex)
    for k in range(2 * m):
        for l in range(k + 1, 2 * m):
            p = gam[k] @ gam[l]
            c = np.trace(p.conj().T @ mat) / d
            if abs(c) < 1e-15:
                continue
            recon = recon + c * p
            if abs(c.real) > _PROJ_TOL * max(1.0, abs(c)):
                return None
            a[k, l] = 2 * c.imag
            a[l, k] = -a[k, l]
    scale = max(1.0, np.linalg.norm(mat))
    if np.linalg.norm(recon - mat) > _PROJ_TOL * scale:
        return None
    return a


def quadratic_form(pot) -> QuadraticForm | None:
    """Majorana coefficients of a 1D spin-1/2 potential, or None if it is not quadratic."""
    if pot.nu != 1 or pot.site_dim != 2:
        return None
    for frame in ("identity", "hadamard"):
        blocks = []
        for t in pot.terms:
            pos = [s[0] for s in t.support]
            lo, hi = min(pos), max(pos)
            m = hi - lo + 1
            block = [(i,) for i in range(lo, hi + 1)]
            mat = embed(t, block).matrix
            if frame == "hadamard":
                h = _hadamard_all(m)
                mat = h @ mat @ h
            a = _project_term(mat, m)
            if a is None:
                break
            blocks.append((lo, a))
        else:
            return QuadraticForm(frame, tuple(blocks))
    return None


def coupling_matrix(form: QuadraticForm, length: int) -> np.ndarray:
    """A for the open chain of ``length`` sites carrying every fully contained term."""
    a = np.zeros((2 * length, 2 * length))
    for lo, blk in form.blocks:
        m = blk.shape[0] // 2
        for start in range(0, length - m + 1):
            i = 2 * start
            a[i:i + 2 * m, i:i + 2 * m] += blk
    return a


def thermal_covariance(a: np.ndarray, beta: float) -> np.ndarray:
    """Gamma = i tanh(i beta A / 2) for the Gibbs state of (i/4) gamma^T A gamma."""
    e, w = np.linalg.eigh(1j * a)
    g = 1j * (w * np.tanh(0.5 * beta * e)) @ w.conj().T
    g = g.real
    return 0.5 * (g - g.T)


def _combine(coeffs, gam) -> np.ndarray:
    out = sp.csr_matrix(gam[0].shape, dtype=complex)
    for c, g in zip(coeffs, gam):
        if c != 0:
            out = out + c * g
    return out.toarray()


def gaussian_density(gamma: np.ndarray, frame: str = "identity", mode_tol: float = 1e-14):
    """Spin density matrix and its exact logarithm for a Majorana covariance on m sites.

    Returns ``(rho, log_rho)``; ``log_rho`` is None when some mode is pure.
    """
    m = gamma.shape[0] // 2
    d = 2**m
    e, w = np.linalg.eigh(1j * gamma)
    gam = majoranas(m)
    rho = np.eye(d, dtype=complex) / d
    log_rho = np.zeros((d, d), dtype=complex)
    log_const = 0.0
    full_rank = True
    n_modes = 0
    for nu, vec in zip(e, w.T):
        if nu <= mode_tol:
            continue
        n_modes += 1
        u = np.sqrt(2) * vec.real
        v = np.sqrt(2) * vec.imag
        bv = _combine(v, gam)
        bu = _combine(u, gam)
        xj = 1j * (bv @ bu)
        rho = rho + nu * (rho @ xj)
        if nu >= 1.0 - 1e-15:
            full_rank = False
            continue
        log_rho += np.arctanh(nu) * xj
        log_const += 0.5 * (np.log1p(nu) + np.log1p(-nu)) - np.log(2.0)
    log_const += (m - n_modes) * np.log(0.5)
    log_rho += log_const * np.eye(d)
    if frame == "hadamard":
        h = _hadamard_all(m)
        rho = h @ rho @ h
        log_rho = h @ log_rho @ h
    rho = 0.5 * (rho + rho.conj().T)
    log_rho = 0.5 * (log_rho + log_rho.conj().T)
    return rho, (log_rho if full_rank else None)
