"""Dense linear algebra on tensor products of identical site spaces.

Sites are integer coordinate tuples.  Every multi-site operator orders its
Kronecker factors by the lexicographic order of its support, so the first
site in ``sorted(support)`` is the most significant tensor factor.  All
logarithms are natural.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import cached_property, reduce
from typing import Iterable, NamedTuple

import numpy as np

from .errors import ContainmentError, DomainError, HermiticityError, ResourceError, ValidationError

DEFAULT_CUTOFF = 1e-12
# Largest dense matrix dimension any builder will allocate.
MAX_DIM = 2**12
HERMITIAN_TOL = 1e-12

SIGMA_X = np.array([[0, 1], [1, 0]], dtype=complex)
SIGMA_Y = np.array([[0, -1j], [1j, 0]], dtype=complex)
SIGMA_Z = np.array([[1, 0], [0, -1]], dtype=complex)
IDENTITY2 = np.eye(2, dtype=complex)


def as_site(site) -> tuple[int, ...]:
    if isinstance(site, (int, np.integer)):
        return (int(site),)
    return tuple(int(c) for c in site)


def canonical_sites(sites: Iterable) -> tuple[tuple[int, ...], ...]:
    """Sites as sorted, distinct coordinate tuples of equal length."""
    out = tuple(sorted(as_site(s) for s in sites))
    if len(set(out)) != len(out):
        raise ValidationError(f"support contains repeated sites: {out}")
    if out and len({len(s) for s in out}) != 1:
        raise ValidationError("sites have inconsistent lattice dimension")
    return out


def _permute_factors(matrix: np.ndarray, n: int, perm: list[int]) -> np.ndarray:
    # new factor j is old factor perm[j]
    k = len(perm)
    if perm == list(range(k)):
        return matrix
    d = n**k
    t = matrix.reshape([n] * (2 * k))
    t = t.transpose(perm + [k + p for p in perm])
    return np.ascontiguousarray(t.reshape(d, d))


def check_dimension(n: int, n_sites: int, max_dim: int | None, what: str = "operator") -> int:
    d = n**n_sites
    cap = MAX_DIM if max_dim is None else max_dim
    if d > cap:
        raise ResourceError(
            f"{what} on {n_sites} sites needs dimension {n}^{n_sites} = {d}, above the cap {cap}"
        )
    return d


@dataclass(frozen=True, eq=False)
class LocalOperator:
    """A matrix together with the lattice sites it acts on.

    ``matrix`` has dimension ``site_dim ** len(support)``.  An unsorted
    support is accepted and the tensor factors are permuted into canonical
    order.  Instances are read-only; the stored matrix is a private copy.
    """

    support: tuple
    site_dim: int
    matrix: np.ndarray
    hermitian: bool = False
    support_rank: int | None = None

    def __post_init__(self):
        raw = [as_site(s) for s in self.support]
        support = canonical_sites(raw)
        n = int(self.site_dim)
        if n < 2:
            raise ValidationError(f"site_dim must be >= 2, got {n}")
        m = np.array(self.matrix, dtype=complex)
        d = n ** len(support)
        if m.shape != (d, d):
            raise ValidationError(
                f"matrix shape {m.shape} does not match site_dim^|support| = {d}"
            )
        if raw != list(support):
            perm = [raw.index(s) for s in support]
            m = _permute_factors(m, n, perm)
        if self.hermitian:
            scale = np.linalg.norm(m)
            if np.linalg.norm(m - m.conj().T) > HERMITIAN_TOL * max(scale, 1e-300) and scale > 0:
                raise HermiticityError("operator flagged Hermitian but A != A*")
        m.setflags(write=False)
        object.__setattr__(self, "support", support)
        object.__setattr__(self, "site_dim", n)
        object.__setattr__(self, "matrix", m)

    @property
    def dim(self) -> int:
        return self.matrix.shape[0]

    @property
    def n_sites(self) -> int:
        return len(self.support)

    def trace(self) -> complex:
        return complex(np.trace(self.matrix))

    def dagger(self) -> "LocalOperator":
        return LocalOperator(self.support, self.site_dim, self.matrix.conj().T, self.hermitian)

    def translate(self, shift) -> "LocalOperator":
        """The same matrix carried by the translated support."""
        x = as_site(shift)
        support = [tuple(a + b for a, b in zip(s, x)) for s in self.support]
        return LocalOperator(tuple(support), self.site_dim, self.matrix, self.hermitian)

    def _same_frame(self, other: "LocalOperator"):
        if other.support != self.support or other.site_dim != self.site_dim:
            raise ValidationError("operators act on different supports; embed them first")

    def __add__(self, other):
        self._same_frame(other)
        return LocalOperator(self.support, self.site_dim, self.matrix + other.matrix,
                             self.hermitian and other.hermitian)

    def __sub__(self, other):
        self._same_frame(other)
        return LocalOperator(self.support, self.site_dim, self.matrix - other.matrix,
                             self.hermitian and other.hermitian)

    def __mul__(self, c):
        c = complex(c)
        herm = self.hermitian and c.imag == 0
        return LocalOperator(self.support, self.site_dim, self.matrix * c, herm)

    __rmul__ = __mul__

    def __neg__(self):
        return self * -1.0

    def __matmul__(self, other):
        self._same_frame(other)
        return LocalOperator(self.support, self.site_dim, self.matrix @ other.matrix)

    @cached_property
    def _eigh(self):
        return _hermitian_eigh(self.matrix)

    def __repr__(self):
        flag = ", hermitian" if self.hermitian else ""
        return f"LocalOperator(support={list(self.support)}, site_dim={self.site_dim}, dim={self.dim}{flag})"


class SpectralDecomposition(NamedTuple):
    eigenvalues: np.ndarray
    eigenvectors: np.ndarray
    support_rank: int

    def reconstruct(self) -> np.ndarray:
        v = self.eigenvectors
        return (v * self.eigenvalues) @ v.conj().T


def _hermitian_eigh(a: np.ndarray):
    a = 0.5 * (a + a.conj().T)
    d = a.shape[0]
    if d == 0:
        return np.zeros(0), np.zeros((0, 0))
    diag = np.diagonal(a)
    if np.count_nonzero(a - np.diag(diag)) == 0:
        w = diag.real.copy()
        order = np.argsort(w, kind="stable")
        vecs = np.zeros((d, d))
        vecs[order, np.arange(d)] = 1.0
        return w[order], vecs
    if not np.any(a.imag):
        return np.linalg.eigh(a.real)
    return np.linalg.eigh(a)


def herm_eig(op: LocalOperator, support_cutoff: float = DEFAULT_CUTOFF) -> SpectralDecomposition:
    """Eigendecomposition of a Hermitian-flagged operator, eigenvalues ascending.

    ``support_rank`` counts eigenvalues above ``support_cutoff * max(1, ||op||)``.
    """
    if not op.hermitian:
        raise HermiticityError("herm_eig needs a Hermitian-flagged operator")
    if support_cutoff < 0:
        raise ValidationError("support_cutoff must be non-negative")
    w, v = op._eigh
    norm = float(np.max(np.abs(w))) if w.size else 0.0
    rank = int(np.count_nonzero(w > support_cutoff * max(1.0, norm)))
    return SpectralDecomposition(w, v, rank)


def matrix_function(op: LocalOperator, fn: str, support_cutoff: float = DEFAULT_CUTOFF) -> LocalOperator:
    """Apply ``exp`` or ``log_on_support`` to a Hermitian operator through its spectrum.

    ``log_on_support`` takes the logarithm on the span of eigenvectors whose
    eigenvalue exceeds the cutoff and is zero on the orthogonal complement;
    the returned operator records the rank of that span in ``support_rank``.
    """
    w, v, rank = herm_eig(op, support_cutoff)
    if fn == "exp":
        f = np.exp(w)
        rank = None
    elif fn in ("log_on_support", "log"):
        norm = float(np.max(np.abs(w))) if w.size else 0.0
        thresh = support_cutoff * max(1.0, norm)
        if w.size and w[0] < -thresh:
            raise DomainError(f"log of an operator with eigenvalue {w[0]:.3e} < 0")
        mask = w > thresh
        f = np.zeros_like(w)
        f[mask] = np.log(w[mask])
    else:
        raise ValidationError(f"unknown matrix function {fn!r}")
    m = (v * f) @ v.conj().T
    return LocalOperator(op.support, op.site_dim, m, hermitian=True, support_rank=rank)


def operator_norm(op: LocalOperator) -> float:
    """Largest singular value."""
    if op.dim == 0:
        return 0.0
    if op.hermitian:
        w = op._eigh[0]
        return float(np.max(np.abs(w)))
    return float(np.linalg.norm(op.matrix, 2))


def trace_distance(a: LocalOperator, b: LocalOperator) -> float:
    """Half the trace norm of ``a - b``."""
    a._same_frame(b)
    diff = 0.5 * (a.matrix - b.matrix)
    diff = 0.5 * (diff + diff.conj().T)
    if not np.any(diff.imag):
        diff = diff.real
    return float(np.sum(np.abs(np.linalg.eigvalsh(diff))))


def embed(op: LocalOperator, ambient: Iterable, max_dim: int | None = None) -> LocalOperator:
    """Extend ``op`` by the identity on the sites of ``ambient`` outside its support."""
    amb = canonical_sites(ambient)
    sup = op.support
    pos = {s: i for i, s in enumerate(amb)}
    missing = [s for s in sup if s not in pos]
    if missing:
        raise ContainmentError(f"sites {missing} of the operator support are not in the ambient region")
    n = op.site_dim
    check_dimension(n, len(amb), max_dim, "embedding")
    if len(amb) == len(sup):
        return op
    idx = [pos[s] for s in sup]
    m = len(amb)
    if not idx:
        mat = op.matrix[0, 0] * np.eye(n**m, dtype=complex)
    elif idx == list(range(idx[0], idx[0] + len(idx))):
        left = n ** idx[0]
        right = n ** (m - len(idx) - idx[0])
        mat = np.kron(np.kron(np.eye(left), op.matrix), np.eye(right))
    else:
        rest = [i for i in range(m) if i not in idx]
        mat = np.kron(op.matrix, np.eye(n ** len(rest)))
        current = idx + rest  # ambient position of each current factor
        perm = [current.index(j) for j in range(m)]
        mat = _permute_factors(mat, n, perm)
    return LocalOperator(amb, n, mat, op.hermitian)


def add_embedded(acc: np.ndarray, op: LocalOperator, ambient: tuple) -> None:
    """In place ``acc += embed(op, ambient).matrix`` without building the full Kronecker product.

    ``ambient`` must already be canonical (sorted, distinct).
    """
    pos = {s: i for i, s in enumerate(ambient)}
    try:
        idx = [pos[s] for s in op.support]
    except KeyError as err:
        raise ContainmentError(f"site {err.args[0]} of the operator support is not in the ambient region") from None
    n = op.site_dim
    m = len(ambient)
    if idx and idx == list(range(idx[0], idx[0] + len(idx))):
        left = n ** idx[0]
        right = n ** (m - len(idx) - idx[0])
        k = op.dim
        view = acc.reshape(left, k, right, left, k, right)
        for i in range(left):
            for r in range(right):
                view[i, :, r, i, :, r] += op.matrix
        return
    acc += embed(op, ambient).matrix


def partial_trace(op: LocalOperator, keep: Iterable) -> LocalOperator:
    """Trace out every site of ``op.support`` not in ``keep``."""
    keep = canonical_sites(keep)
    sup = op.support
    pos = {s: i for i, s in enumerate(sup)}
    missing = [s for s in keep if s not in pos]
    if missing:
        raise ContainmentError(f"sites {missing} are not in the operator support")
    if len(keep) == len(sup):
        return op
    n = op.site_dim
    k = len(sup)
    ik = [pos[s] for s in keep]
    it = [i for i in range(k) if i not in ik]
    dk, dt = n ** len(ik), n ** len(it)
    t = op.matrix.reshape([n] * (2 * k))
    order = ik + it
    t = t.transpose(order + [k + i for i in order]).reshape(dk, dt, dk, dt)
    mat = np.einsum("ajbj->ab", t)
    return LocalOperator(keep, n, mat, op.hermitian)


def kron_all(mats: Iterable[np.ndarray]) -> np.ndarray:
    mats = list(mats)
    if not mats:
        return np.ones((1, 1), dtype=complex)
    return reduce(np.kron, mats)
