"""Lattice regions, translation-covariant finite-range potentials, and energies."""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from functools import cached_property
from typing import Iterable, Iterator, Mapping

import numpy as np

from .errors import ContainmentError, GeometryError, ValidationError
from .operators import (
    SIGMA_X,
    SIGMA_Y,
    SIGMA_Z,
    LocalOperator,
    add_embedded,
    as_site,
    canonical_sites,
    check_dimension,
    embed,
    operator_norm,
)


@dataclass(frozen=True)
class Region:
    """A finite set of sites of the cubic lattice Z^nu, stored in canonical order."""

    sites: tuple = ()
    nu: int | None = None

    def __post_init__(self):
        sites = canonical_sites(self.sites)
        nu = self.nu
        if sites:
            dims = len(sites[0])
            if nu is not None and nu != dims:
                raise GeometryError(f"sites have dimension {dims}, region declared nu={nu}")
            nu = dims
        nu = 1 if nu is None else int(nu)
        if nu < 1:
            raise GeometryError("lattice dimension must be >= 1")
        object.__setattr__(self, "sites", sites)
        object.__setattr__(self, "nu", nu)

    @classmethod
    def interval(cls, a: int, b: int) -> "Region":
        """Sites a, a+1, ..., b of Z (inclusive)."""
        return cls(tuple((i,) for i in range(a, b + 1)), 1)

    @classmethod
    def box(cls, lower, upper) -> "Region":
        """The box [a_1, b_1] x ... x [a_nu, b_nu], bounds inclusive."""
        lower, upper = as_site(lower), as_site(upper)
        if len(lower) != len(upper):
            raise GeometryError("box bounds have different dimensions")
        ranges = [range(a, b + 1) for a, b in zip(lower, upper)]
        return cls(tuple(itertools.product(*ranges)), len(lower))

    @classmethod
    def centered_box(cls, side: int, nu: int = 1) -> "Region":
        """Box of the given side with lower corner at -(side // 2) on every axis."""
        lo = -(side // 2)
        return cls.box((lo,) * nu, (lo + side - 1,) * nu)

    @property
    def volume(self) -> int:
        return len(self.sites)

    def __len__(self):
        return len(self.sites)

    def __iter__(self) -> Iterator[tuple[int, ...]]:
        return iter(self.sites)

    def __contains__(self, site) -> bool:
        return as_site(site) in self._set

    @cached_property
    def _set(self) -> frozenset:
        return frozenset(self.sites)

    def issubset(self, other: Iterable) -> bool:
        other = other._set if isinstance(other, Region) else {as_site(s) for s in other}
        return self._set <= other

    def translate(self, shift) -> "Region":
        x = as_site(shift)
        if len(x) != self.nu:
            raise GeometryError("shift dimension does not match region")
        return Region(tuple(tuple(a + b for a, b in zip(s, x)) for s in self.sites), self.nu)

    def union(self, other: "Region") -> "Region":
        return Region(tuple(self._set | other._set), self.nu)

    def difference(self, other: Iterable) -> "Region":
        drop = other._set if isinstance(other, Region) else {as_site(s) for s in other}
        return Region(tuple(s for s in self.sites if s not in drop), self.nu)

    def intersection(self, other: "Region") -> "Region":
        return Region(tuple(self._set & other._set), self.nu)

    __or__ = union
    __sub__ = difference
    __and__ = intersection

    def collar(self, r: int) -> "Region":
        """All sites within sup-norm distance ``r`` of the region (the region included)."""
        if r < 0:
            raise GeometryError("collar width must be non-negative")
        offsets = list(itertools.product(range(-r, r + 1), repeat=self.nu))
        out = {tuple(a + b for a, b in zip(s, o)) for s in self.sites for o in offsets}
        return Region(tuple(out), self.nu)

    def is_interval(self) -> bool:
        if self.nu != 1 or not self.sites:
            return False
        lo, hi = self.sites[0][0], self.sites[-1][0]
        return hi - lo + 1 == len(self.sites)

    def __repr__(self):
        if self.is_interval():
            return f"Region.interval({self.sites[0][0]}, {self.sites[-1][0]})"
        return f"Region({len(self.sites)} sites, nu={self.nu})"


def _diameter(sites) -> int:
    if len(sites) < 2:
        return 0
    arr = np.array(sites)
    return int(np.max(arr.max(axis=0) - arr.min(axis=0)))


@dataclass(frozen=True, eq=False)
class Potential:
    """Translation-covariant interaction given by representative terms.

    Each term is a Hermitian ``LocalOperator`` whose support contains the
    origin; the interaction on ``X + x`` is the same matrix carried by the
    translated support.  The inverse temperature is never stored here.
    """

    site_dim: int
    nu: int
    terms: tuple = ()
    name: str = "custom"
    couplings: Mapping = field(default_factory=dict)

    def __post_init__(self):
        terms = tuple(self.terms)
        origin = (0,) * self.nu
        for t in terms:
            if not t.hermitian:
                raise ValidationError("potential terms must be Hermitian-flagged")
            if t.site_dim != self.site_dim:
                raise ValidationError("term site_dim does not match potential")
            if any(len(s) != self.nu for s in t.support):
                raise GeometryError("term support has wrong lattice dimension")
            if origin not in t.support:
                raise ValidationError(f"representative support {list(t.support)} must contain the origin")
        object.__setattr__(self, "terms", terms)
        object.__setattr__(self, "couplings", dict(self.couplings))

    @property
    def range(self) -> int:
        """Largest sup-norm diameter over the representative supports."""
        return max((_diameter(t.support) for t in self.terms), default=0)

    def translates_within(self, region: Region) -> Iterator[LocalOperator]:
        """Every translate of every term whose support lies inside ``region``."""
        inside = region._set
        for t in self.terms:
            for x in region.sites:
                shifted = [tuple(a + b for a, b in zip(s, x)) for s in t.support]
                if all(s in inside for s in shifted):
                    yield LocalOperator(tuple(shifted), self.site_dim, t.matrix, True)

    def translates_crossing(self, region: Region) -> Iterator[LocalOperator]:
        """Translates meeting both ``region`` and its complement."""
        inside = region._set
        for t in self.terms:
            shifts = {tuple(a - b for a, b in zip(lam, s)) for lam in region.sites for s in t.support}
            for x in sorted(shifts):
                shifted = [tuple(a + b for a, b in zip(s, x)) for s in t.support]
                flags = [s in inside for s in shifted]
                if any(flags) and not all(flags):
                    yield LocalOperator(tuple(shifted), self.site_dim, t.matrix, True)


def _sum_embedded(ops: Iterable[LocalOperator], region: Region, n: int, max_dim) -> LocalOperator:
    d = check_dimension(n, region.volume, max_dim, "energy operator")
    acc = np.zeros((d, d), dtype=complex)
    for op in ops:
        add_embedded(acc, op, region.sites)
    return LocalOperator(region.sites, n, acc, hermitian=True)


def internal_energy(pot: Potential, region: Region, max_dim: int | None = None,
                    periodic: bool = False) -> LocalOperator:
    """Sum of all interaction terms supported inside ``region``.

    With ``periodic=True`` (one-dimensional intervals only) the interval is
    closed into a ring and terms are wrapped around its ends.
    """
    if region.nu != pot.nu:
        raise GeometryError(f"region has nu={region.nu}, potential has nu={pot.nu}")
    if not periodic:
        return _sum_embedded(pot.translates_within(region), region, pot.site_dim, max_dim)
    if not region.is_interval():
        raise GeometryError("periodic energies are defined for one-dimensional intervals only")
    length = region.volume
    if length <= 2 * pot.range:
        raise GeometryError(f"ring of {length} sites is too short for interaction range {pot.range}")
    start = region.sites[0][0]

    def wrapped():
        for t in pot.terms:
            for x in range(length):
                sup = [((s[0] + x) % length + start,) for s in t.support]
                yield LocalOperator(tuple(sup), pot.site_dim, t.matrix, True)

    return _sum_embedded(wrapped(), region, pot.site_dim, max_dim)


def surface_energy(pot: Potential, region: Region, ambient: Region,
                   max_dim: int | None = None) -> LocalOperator:
    """Sum of the terms crossing the boundary of ``region``, as an operator on ``ambient``."""
    if not region.issubset(ambient):
        raise ContainmentError("region is not contained in the ambient region")
    crossing = list(pot.translates_crossing(region))
    for op in crossing:
        if not all(s in ambient for s in op.support):
            raise GeometryError(
                f"ambient region misses sites of the crossing term on {list(op.support)}; "
                f"enlarge it to at least region.collar({pot.range})"
            )
    return _sum_embedded(crossing, ambient, pot.site_dim, max_dim)


def surface_norm(pot: Potential, region: Region, max_dim: int | None = None) -> float:
    """||W_region||, evaluated on the union of the crossing supports only."""
    crossing = list(pot.translates_crossing(region))
    if not crossing:
        return 0.0
    sites = {s for op in crossing for s in op.support}
    return operator_norm(_sum_embedded(crossing, Region(tuple(sites), region.nu),
                                       pot.site_dim, max_dim))


def big_banach_norm(pot: Potential) -> float:
    """Sum over regions X containing the origin of ||Phi(X)|| / |X|."""
    by_region: dict[tuple, np.ndarray] = {}
    for t in pot.terms:
        for s in t.support:
            op = t.translate(tuple(-c for c in s))
            if op.support in by_region:
                by_region[op.support] = by_region[op.support] + op.matrix
            else:
                by_region[op.support] = np.array(op.matrix)
    total = 0.0
    for sup, mat in by_region.items():
        total += operator_norm(LocalOperator(sup, pot.site_dim, mat, True)) / len(sup)
    return total


# ---------------------------------------------------------------------------
# presets

PRESETS = ("classical_ising", "tfi", "xy", "heisenberg")
_ALIASES = {"ising": "classical_ising", "transverse_ising": "tfi", "transverse_field_ising": "tfi"}

_DEFAULT_COUPLINGS = {
    "classical_ising": {"J": 1.0, "h": 0.0},
    "tfi": {"J": 1.0, "g": 1.0},
    "xy": {"J": 1.0, "gamma": 0.0, "g": 0.0},
    "heisenberg": {"J": 1.0, "delta": 1.0, "h": 0.0},
}


def _bond_axes(nu):
    for k in range(nu):
        e = [0] * nu
        e[k] = 1
        yield ((0,) * nu, tuple(e))


def preset_potential(name: str, couplings: Mapping | None = None, nu: int = 1) -> Potential:
    """Nearest-neighbour spin-1/2 models on Z^nu.

    classical_ising  -J sz sz - h sz
    tfi              -J sz sz - g sx
    xy               -J [(1+gamma)/2 sx sx + (1-gamma)/2 sy sy] - g sz
    heisenberg       J (sx sx + sy sy + delta sz sz) - h sz

    Terms with a zero coefficient are dropped, so e.g. ``tfi`` with ``J=0``
    is a one-site potential of range 0.
    """
    key = _ALIASES.get(name, name)
    if key not in _DEFAULT_COUPLINGS:
        raise ValidationError(f"unknown preset {name!r}; choose one of {PRESETS}")
    c = dict(_DEFAULT_COUPLINGS[key])
    for k, v in (couplings or {}).items():
        if k not in c:
            raise ValidationError(f"preset {key!r} has no coupling {k!r}; known: {sorted(c)}")
        c[k] = float(v)

    zz, xx, yy = np.kron(SIGMA_Z, SIGMA_Z), np.kron(SIGMA_X, SIGMA_X), np.kron(SIGMA_Y, SIGMA_Y)
    if key == "classical_ising":
        bond, site = -c["J"] * zz, -c["h"] * SIGMA_Z
    elif key == "tfi":
        bond, site = -c["J"] * zz, -c["g"] * SIGMA_X
    elif key == "xy":
        g = c["gamma"]
        bond = -c["J"] * (0.5 * (1 + g) * xx + 0.5 * (1 - g) * yy)
        site = -c["g"] * SIGMA_Z
    else:
        bond = c["J"] * (xx + yy + c["delta"] * zz)
        site = -c["h"] * SIGMA_Z

    terms = []
    if np.any(site):
        terms.append(LocalOperator(((0,) * nu,), 2, site, True))
    if np.any(bond):
        for pair in _bond_axes(nu):
            terms.append(LocalOperator(pair, 2, bond, True))
    return Potential(2, nu, tuple(terms), key, c)


@dataclass(frozen=True)
class ModelSpec:
    """A named preset with couplings, inverse temperature and lattice dimension."""

    preset: str
    couplings: Mapping = field(default_factory=dict)
    beta: float = 1.0
    nu: int = 1

    def __post_init__(self):
        if not np.isfinite(self.beta) or self.beta < 0:
            raise ValidationError(f"beta must be finite and >= 0, got {self.beta}")
        object.__setattr__(self, "couplings", dict(self.couplings))

    def potential(self) -> Potential:
        return preset_potential(self.preset, self.couplings, self.nu)
