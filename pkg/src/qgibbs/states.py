"""Density matrices and families of reduced states on finite regions."""

from __future__ import annotations

from dataclasses import InitVar, dataclass, field
from typing import Iterable

import numpy as np

from . import _fermion
from .errors import DomainError, ResourceError, ValidationError
from .lattice import Potential, Region, internal_energy
from .operators import (
    DEFAULT_CUTOFF,
    MAX_DIM,
    LocalOperator,
    herm_eig,
    kron_all,
    matrix_function,
    partial_trace,
    trace_distance,
)

TRACE_TOL = 1e-12
POSITIVITY_TOL = 1e-12


@dataclass(frozen=True, eq=False)
class DensityMatrix(LocalOperator):
    """Positive semidefinite, unit-trace Hermitian operator.

    ``log_matrix`` may carry the exact logarithm when the state was built
    from an exponential (Gibbs or Gaussian) form; it is then used instead of
    a numerical logarithm of the spectrum.
    """

    log_matrix: np.ndarray | None = field(default=None, repr=False)
    validate: InitVar[bool] = True

    def __post_init__(self, validate):
        object.__setattr__(self, "hermitian", True)
        super().__post_init__()
        tr = np.trace(self.matrix)
        if abs(tr - 1) > TRACE_TOL:
            raise ValidationError(f"density matrix trace is {tr}, not 1")
        if self.log_matrix is not None:
            lm = np.array(self.log_matrix, dtype=complex)
            if lm.shape != self.matrix.shape:
                raise ValidationError("log_matrix shape does not match")
            lm.setflags(write=False)
            object.__setattr__(self, "log_matrix", lm)
        if validate:
            w = self._eigh[0]
            if w.size and w[0] < -POSITIVITY_TOL:
                raise ValidationError(f"density matrix has eigenvalue {w[0]:.3e} < 0")

    @classmethod
    def from_operator(cls, op: LocalOperator, log_matrix=None, validate=True) -> "DensityMatrix":
        return cls(op.support, op.site_dim, op.matrix, True, log_matrix=log_matrix, validate=validate)

    def expect(self, op: LocalOperator | np.ndarray) -> float:
        """Tr(rho A) for an operator on the same support (real part for Hermitian A)."""
        a = op.matrix if isinstance(op, LocalOperator) else np.asarray(op)
        val = np.einsum("ij,ji->", self.matrix, a)
        return float(val.real) if not isinstance(op, LocalOperator) or op.hermitian else val

    def log(self, support_cutoff: float = DEFAULT_CUTOFF) -> LocalOperator:
        """Natural logarithm on the support (zero off the support)."""
        if self.log_matrix is not None:
            return LocalOperator(self.support, self.site_dim, self.log_matrix, True,
                                 support_rank=self.dim)
        return matrix_function(self, "log_on_support", support_cutoff)

    def is_full_rank(self, support_cutoff: float = DEFAULT_CUTOFF) -> bool:
        if self.log_matrix is not None:
            return True
        return herm_eig(self, support_cutoff).support_rank == self.dim

    def reduce(self, keep: Iterable) -> "DensityMatrix":
        return DensityMatrix.from_operator(partial_trace(self, keep), validate=False)


def _set_spectrum(op: LocalOperator, w: np.ndarray, v: np.ndarray):
    op.__dict__["_eigh"] = (w, v)


def _check_single_site(rho0, n=None) -> np.ndarray:
    r = np.array(rho0, dtype=complex)
    if r.ndim == 1:
        r = np.diag(r)
    if r.ndim != 2 or r.shape[0] != r.shape[1]:
        raise ValidationError("single-site density must be a square matrix or a diagonal vector")
    if n is not None and r.shape[0] != n:
        raise ValidationError(f"single-site density has dimension {r.shape[0]}, expected {n}")
    DensityMatrix(((0,),), r.shape[0], r)  # validates
    return r


KINDS = ("product", "internal_gibbs", "buffered_gibbs", "tracial")


@dataclass(frozen=True, eq=False)
class StateFamily:
    """Rule producing reduced density matrices for requested regions.

    product          the product of a fixed single-site density ``rho0``
    tracial          the normalized identity
    internal_gibbs   exp(-beta U_region) / Tr exp(-beta U_region)
    buffered_gibbs   internal Gibbs state on ``region.collar(buffer)``, traced down to ``region``

    Buffered marginals are computed densely when the enlarged region fits the
    dimension cap; for one-dimensional potentials that are quadratic in
    Jordan-Wigner fermions an exact Gaussian reduction is used, which lifts
    the cap on the enlarged region (``method="auto"`` prefers it).
    """

    kind: str
    site_dim: int = 2
    nu: int = 1
    rho0: np.ndarray | None = None
    potential: Potential | None = None
    beta: float | None = None
    buffer: int = 0
    boundary: str = "open"
    method: str = "auto"
    max_dim: int | None = None

    def __post_init__(self):
        if self.kind not in KINDS:
            raise ValidationError(f"unknown state kind {self.kind!r}; choose one of {KINDS}")
        if self.kind == "product":
            r = _check_single_site(self.rho0)
            object.__setattr__(self, "rho0", r)
            object.__setattr__(self, "site_dim", r.shape[0])
        if self.kind in ("internal_gibbs", "buffered_gibbs"):
            if self.potential is None or self.beta is None:
                raise ValidationError(f"{self.kind} needs a potential and beta")
            if not np.isfinite(self.beta) or self.beta < 0:
                raise ValidationError("beta must be finite and >= 0")
            object.__setattr__(self, "site_dim", self.potential.site_dim)
            object.__setattr__(self, "nu", self.potential.nu)
        if self.buffer < 0:
            raise ValidationError("buffer must be >= 0")
        if self.boundary not in ("open", "periodic"):
            raise ValidationError("boundary must be 'open' or 'periodic'")
        if self.method not in ("auto", "dense", "gaussian"):
            raise ValidationError("method must be 'auto', 'dense' or 'gaussian'")
        object.__setattr__(self, "_cache", {})

    @classmethod
    def product(cls, rho0, nu: int = 1, **kw) -> "StateFamily":
        return cls("product", rho0=rho0, nu=nu, **kw)

    @classmethod
    def tracial(cls, site_dim: int = 2, nu: int = 1, **kw) -> "StateFamily":
        return cls("tracial", site_dim=site_dim, nu=nu, **kw)

    @classmethod
    def internal_gibbs(cls, potential: Potential, beta: float, **kw) -> "StateFamily":
        return cls("internal_gibbs", potential=potential, beta=beta, **kw)

    @classmethod
    def buffered_gibbs(cls, potential: Potential, beta: float, buffer: int, **kw) -> "StateFamily":
        return cls("buffered_gibbs", potential=potential, beta=beta, buffer=buffer, **kw)

    def with_buffer(self, buffer: int) -> "StateFamily":
        if self.kind != "buffered_gibbs":
            raise ValidationError("with_buffer applies to buffered_gibbs families")
        return StateFamily("buffered_gibbs", potential=self.potential, beta=self.beta, buffer=buffer,
                           boundary=self.boundary, method=self.method, max_dim=self.max_dim)

    def describe(self) -> dict:
        out = {"kind": self.kind, "site_dim": self.site_dim, "nu": self.nu}
        if self.kind == "product":
            out["rho0"] = [[complex(x).real if complex(x).imag == 0 else str(complex(x)) for x in row]
                           for row in self.rho0]
        if self.kind in ("internal_gibbs", "buffered_gibbs"):
            out["potential"] = self.potential.name
            out["beta"] = self.beta
        if self.kind == "buffered_gibbs":
            out.update(buffer=self.buffer, boundary=self.boundary, method=self.method)
        return out


def gibbs_density(pot: Potential, beta: float, region: Region, max_dim: int | None = None,
                  periodic: bool = False) -> tuple[DensityMatrix, float]:
    """Internal Gibbs state on ``region`` and log Tr exp(-beta U_region)."""
    u = internal_energy(pot, region, max_dim, periodic=periodic)
    w, v = u._eigh
    if w.size == 0:
        raise ValidationError("empty region")
    shifted = -beta * (w - w[0])
    log_z_shift = np.logaddexp.reduce(shifted)
    log_p = shifted - log_z_shift
    p = np.exp(log_p)
    mat = u.matrix
    if np.count_nonzero(mat - np.diag(np.diagonal(mat))) == 0:
        # diagonal energy: v is a permutation, avoid dense products
        inv = np.argmax(np.abs(v), axis=1)
        rho, logm = np.diag(p[inv]), np.diag(log_p[inv])
    else:
        rho = (v * p) @ v.conj().T
        logm = (v * log_p) @ v.conj().T
    dm = DensityMatrix(region.sites, pot.site_dim, rho / np.trace(rho).real, log_matrix=logm,
                       validate=False)
    order = np.argsort(p, kind="stable")
    _set_spectrum(dm, p[order], v[:, order])
    return dm, float(-beta * w[0] + log_z_shift)


def _product_marginal(state: StateFamily, region: Region, cap) -> DensityMatrix:
    n = state.site_dim
    k = region.volume
    if n**k > cap:
        raise ResourceError(f"product marginal on {k} sites exceeds the dimension cap {cap}")
    r = state.rho0
    w0, v0 = np.linalg.eigh(0.5 * (r + r.conj().T))
    rho = kron_all([r] * k)
    w = np.ones(1)
    for _ in range(k):
        w = np.kron(w, w0)
    v = kron_all([v0] * k)
    order = np.argsort(w, kind="stable")
    logm = None
    if np.all(w0 > 0):
        lw = np.zeros(1)
        for _ in range(k):
            lw = np.add.outer(lw, np.log(w0)).ravel()
        logm = (v * lw) @ v.conj().T
    dm = DensityMatrix(region.sites, n, rho, log_matrix=logm, validate=False)
    _set_spectrum(dm, np.clip(w[order], 0.0, None), v[:, order])
    return dm


def _buffered_marginal(state: StateFamily, region: Region, cap) -> DensityMatrix:
    pot = state.potential
    amb = region.collar(state.buffer)
    dense_ok = pot.site_dim ** amb.volume <= cap
    form = None
    if state.method != "dense" and state.boundary == "open" and region.is_interval():
        form = _fermion.quadratic_form(pot)
    use_gauss = form is not None and (state.method == "gaussian" or (state.method == "auto"))
    if state.method == "gaussian" and form is None:
        raise ValidationError("gaussian method needs an open 1D interval and a quadratic potential")
    if use_gauss:
        if pot.site_dim ** region.volume > cap:
            raise ResourceError(f"marginal on {region!r} exceeds the dimension cap {cap}")
        length = amb.volume
        a = _fermion.coupling_matrix(form, length)
        gam = _fermion.thermal_covariance(a, state.beta)
        off = 2 * state.buffer
        m = region.volume
        sub = gam[off:off + 2 * m, off:off + 2 * m]
        rho, logm = _fermion.gaussian_density(sub, form.frame)
        return DensityMatrix(region.sites, pot.site_dim, rho / np.trace(rho).real, log_matrix=logm)
    if not dense_ok:
        raise ResourceError(
            f"buffered marginal on {region!r} needs the enlarged region of {amb.volume} sites "
            f"(dimension {pot.site_dim ** amb.volume}), above the cap {cap}"
        )
    full, _ = gibbs_density(pot, state.beta, amb, cap, periodic=state.boundary == "periodic")
    return full.reduce(region.sites)


def marginal(state: StateFamily, region: Region) -> DensityMatrix:
    """Reduced density matrix of ``state`` on ``region``."""
    if region.nu != state.nu:
        raise ValidationError(f"region has nu={region.nu}, state family has nu={state.nu}")
    key = region
    cache = state._cache
    if key in cache:
        return cache[key]
    cap = MAX_DIM if state.max_dim is None else state.max_dim
    n = state.site_dim
    if state.kind == "tracial":
        if n**region.volume > cap:
            raise ResourceError(f"tracial marginal on {region.volume} sites exceeds the cap {cap}")
        d = n**region.volume
        dm = DensityMatrix(region.sites, n, np.eye(d) / d, log_matrix=-np.log(d) * np.eye(d),
                           validate=False)
        _set_spectrum(dm, np.full(d, 1.0 / d), np.eye(d))
    elif state.kind == "product":
        dm = _product_marginal(state, region, cap)
    elif state.kind == "internal_gibbs":
        dm, _ = gibbs_density(state.potential, state.beta, region, cap)
    else:
        dm = _buffered_marginal(state, region, cap)
    cache[key] = dm
    return dm


def buffered_drift(state: StateFamily, region: Region, b1: int, b2: int) -> float:
    """Trace distance between the buffered marginals at buffer widths ``b1`` and ``b2``."""
    if state.kind != "buffered_gibbs":
        raise ValidationError("buffered_drift needs a buffered_gibbs family")
    if b1 > b2:
        raise ValidationError("buffered_drift expects b1 <= b2")
    if b1 == b2:
        return 0.0
    r1 = marginal(state.with_buffer(b1), region)
    r2 = marginal(state.with_buffer(b2), region)
    return trace_distance(r1, r2)


def translation_drift(state: StateFamily, region: Region, shift) -> float:
    """Trace distance between the marginals on ``region`` and on its translate.

    Translation preserves the canonical site order, so the two matrices are
    compared entry by entry.
    """
    a = marginal(state, region)
    b = marginal(state, region.translate(shift))
    return trace_distance(a, LocalOperator(a.support, a.site_dim, b.matrix, True))


def check_density(rho: LocalOperator) -> DensityMatrix:
    """Validate an arbitrary operator as a density matrix."""
    if isinstance(rho, DensityMatrix):
        return rho
    return DensityMatrix.from_operator(rho)


def random_density(dim: int, rng: np.random.Generator, rank: int | None = None,
                   support=None, site_dim: int = 2) -> DensityMatrix:
    """Random density matrix G G* / Tr(G G*) with complex Gaussian G of the given rank."""
    rank = dim if rank is None else rank
    g = rng.normal(size=(dim, rank)) + 1j * rng.normal(size=(dim, rank))
    rho = g @ g.conj().T
    rho /= np.trace(rho).real
    if support is None:
        k = int(round(np.log(dim) / np.log(site_dim)))
        if site_dim**k != dim:
            raise ValidationError("dim is not a power of site_dim; pass support explicitly")
        support = tuple((i,) for i in range(k))
    return DensityMatrix(support, site_dim, rho)


def random_product_state(rng: np.random.Generator, site_dim: int = 2, nu: int = 1) -> StateFamily:
    r = random_density(site_dim, rng, support=((0,) * nu,), site_dim=site_dim)
    return StateFamily.product(r.matrix, nu=nu)


def is_density(rho: LocalOperator, tol: float = POSITIVITY_TOL) -> bool:
    try:
        check_density(rho)
    except (ValidationError, DomainError):
        return False
    return True
