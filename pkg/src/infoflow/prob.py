"""Exact information quantities on finite alphabets.

Everything is in nats. Distributions are dense numpy arrays validated once at
construction and frozen afterwards, so they can be shared freely between
threads and sweep workers.
"""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import ConsistencyError, DimensionError, EmptySliceError

SUM_TOL = 1e-12
CLAMP_TOL = 1e-12


def _frozen(mass, ndim: int, name: str) -> np.ndarray:
    arr = np.array(mass, dtype=float)
    if arr.ndim != ndim:
        raise DimensionError(f"{name} needs a {ndim}-d mass array, got shape {arr.shape}")
    if arr.size == 0:
        raise DimensionError(f"{name} has an empty alphabet")
    # two reductions instead of four: a NaN poisons the min, an inf the sum
    low = arr.min()
    total = arr.sum()
    if np.isnan(low) or not np.isfinite(total):
        raise ValueError(f"{name} has non-finite masses")
    if low < 0:
        raise ValueError(f"{name} has negative masses")
    if abs(total - 1.0) > SUM_TOL:
        raise ValueError(f"{name} masses sum to {total!r}, not 1")
    arr.setflags(write=False)
    return arr


def _normalize_counts(counts) -> np.ndarray:
    c = np.asarray(counts, dtype=float)
    total = c.sum()
    if total <= 0:
        raise ValueError("cannot normalize an all-zero count array")
    return c / total


@dataclass(frozen=True, eq=False)
class DiscreteDist:
    mass: np.ndarray

    def __post_init__(self):
        object.__setattr__(self, "mass", _frozen(self.mass, 1, "DiscreteDist"))

    @classmethod
    def from_counts(cls, counts) -> "DiscreteDist":
        return cls(_normalize_counts(counts))

    @classmethod
    def uniform(cls, size: int) -> "DiscreteDist":
        return cls(np.full(size, 1.0 / size))

    @property
    def alphabet_size(self) -> int:
        return self.mass.shape[0]


@dataclass(frozen=True, eq=False)
class JointDist2:
    """Joint mass indexed ``mass[x, y]``."""

    mass: np.ndarray

    def __post_init__(self):
        object.__setattr__(self, "mass", _frozen(self.mass, 2, "JointDist2"))

    @classmethod
    def from_counts(cls, counts) -> "JointDist2":
        return cls(_normalize_counts(counts))

    @classmethod
    def diagonal(cls, p: DiscreteDist) -> "JointDist2":
        return cls(np.diag(p.mass))

    @classmethod
    def product(cls, p: DiscreteDist, q: DiscreteDist) -> "JointDist2":
        return cls(np.outer(p.mass, q.mass))

    @property
    def dims(self) -> tuple[int, int]:
        return self.mass.shape

    def marginal_x(self) -> DiscreteDist:
        return DiscreteDist(self.mass.sum(axis=1))

    def marginal_y(self) -> DiscreteDist:
        return DiscreteDist(self.mass.sum(axis=0))

    def transpose(self) -> "JointDist2":
        return JointDist2(self.mass.T)


@dataclass(frozen=True, eq=False)
class JointDist3:
    """Joint mass indexed ``mass[x, y, z]``; z is the conditioning variable."""

    mass: np.ndarray

    def __post_init__(self):
        object.__setattr__(self, "mass", _frozen(self.mass, 3, "JointDist3"))

    @classmethod
    def from_counts(cls, counts) -> "JointDist3":
        return cls(_normalize_counts(counts))

    @property
    def dims(self) -> tuple[int, int, int]:
        return self.mass.shape

    def marginal_z(self) -> np.ndarray:
        return self.mass.sum(axis=(0, 1))

    def marginal_xz(self) -> np.ndarray:
        return self.mass.sum(axis=1)

    def marginal_yz(self) -> np.ndarray:
        return self.mass.sum(axis=0)


@dataclass(frozen=True)
class InfoValue:
    """An information quantity in nats, or a flagged infinity.

    When ``is_infinite`` is set, ``value`` carries no meaning (it is stored as
    ``inf`` so that ``float()`` does the obvious thing).
    """

    value: float
    is_infinite: bool = False

    @classmethod
    def infinite(cls) -> "InfoValue":
        return cls(math.inf, True)

    def __float__(self) -> float:
        return math.inf if self.is_infinite else self.value


def _finite(value: float) -> InfoValue:
    if value < 0:
        if value < -CLAMP_TOL:
            raise ConsistencyError(f"information quantity came out negative: {value!r}")
        value = 0.0
    return InfoValue(float(value))


def _kl_arrays(p: np.ndarray, m: np.ndarray) -> InfoValue:
    support = p > 0
    if np.any(m[support] == 0):
        return InfoValue.infinite()
    ps = p[support]
    return _finite(float(np.sum(ps * (np.log(ps) - np.log(m[support])))))


def kl_divergence(p: DiscreteDist, m: DiscreteDist) -> InfoValue:
    """KL(p || m) = sum_a p(a) ln(p(a)/m(a)), skipping p(a) = 0.

    Infinite (flagged, not a float inf) exactly when p charges a symbol that m
    does not.
    """
    if p.alphabet_size != m.alphabet_size:
        raise DimensionError(
            f"alphabet sizes differ: {p.alphabet_size} vs {m.alphabet_size}"
        )
    return _kl_arrays(p.mass, m.mass)


def shannon_entropy(p: DiscreteDist) -> float:
    q = p.mass[p.mass > 0]
    return float(-np.sum(q * np.log(q)))


def _log_ratio_sum(p: np.ndarray, log_m: np.ndarray) -> InfoValue:
    # log-domain KL: a product of tiny marginals would underflow to 0 and
    # fake an infinite divergence
    support = p > 0
    ps = p[support]
    return _finite(float(np.sum(ps * (np.log(ps) - log_m[support]))))


def _safe_log(a: np.ndarray) -> np.ndarray:
    out = np.full(a.shape, -np.inf)
    np.log(a, out=out, where=a > 0)
    return out


def mutual_information(j: JointDist2) -> InfoValue:
    # marginals are positive wherever the joint is, so the support is nested
    lx = _safe_log(j.mass.sum(axis=1))
    ly = _safe_log(j.mass.sum(axis=0))
    return _log_ratio_sum(j.mass, lx[:, None] + ly[None, :])


def _markov_mass(mass: np.ndarray) -> np.ndarray:
    pz = mass.sum(axis=(0, 1))
    pxz = mass.sum(axis=1)
    pyz = mass.sum(axis=0)
    # divide first: pyz / pz <= 1, so nothing overflows
    cond_y = np.zeros_like(pyz)
    np.divide(pyz, pz[None, :], out=cond_y, where=pz[None, :] > 0)
    return pxz[:, None, :] * cond_y[None, :, :]


def _log_markov_mass(mass: np.ndarray) -> np.ndarray:
    lz = _safe_log(mass.sum(axis=(0, 1)))
    lxz = _safe_log(mass.sum(axis=1))
    lyz = _safe_log(mass.sum(axis=0))
    with np.errstate(invalid="ignore"):
        return lxz[:, None, :] + lyz[None, :, :] - lz[None, None, :]


def markovize(j: JointDist3) -> JointDist3:
    """Replace each z-slice by the product of its conditional marginals.

    Keeps P_Z and both pairwise (X, Z), (Y, Z) marginals; makes X and Y
    conditionally independent given Z. Zero-mass slices stay zero.
    """
    return JointDist3(_markov_mass(j.mass))


def conditional_mutual_information(j: JointDist3) -> InfoValue:
    """KL(j || markovize(j)), always finite since the joint is absolutely
    continuous with respect to its Markovization."""
    return _log_ratio_sum(j.mass, _log_markov_mass(j.mass))


def disintegrate(j: JointDist3, k: int) -> JointDist2:
    """The (X, Y) joint conditioned on Z = k."""
    slab = j.mass[:, :, k]
    pz = slab.sum()
    if pz <= 0:
        raise EmptySliceError(f"z-index {k} carries no mass")
    return JointDist2(slab / pz)


def disintegrated_cmi(j: JointDist3) -> InfoValue:
    """P_Z-weighted average of the per-slice mutual informations."""
    pz = j.marginal_z()
    total = 0.0
    for k in np.flatnonzero(pz > 0):
        total += pz[k] * mutual_information(disintegrate(j, int(k))).value
    return _finite(total)
