"""Uniform meshes on [0, 1) and plug-in histograms over them.

Cell indices are 0-based: cell i is [i/L, (i+1)/L). Joint histograms are
indexed ``[x, y]`` to match :class:`~infoflow.prob.JointDist2`.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import DimensionError, DomainError
from .prob import JointDist2


@dataclass(frozen=True)
class Mesh:
    L: int

    def __post_init__(self):
        if int(self.L) != self.L or self.L < 1:
            raise ValueError(f"mesh needs a positive integer cell count, got {self.L!r}")
        object.__setattr__(self, "L", int(self.L))

    @property
    def delta(self) -> float:
        return 1.0 / self.L

    def midpoints(self) -> np.ndarray:
        return (np.arange(self.L) + 0.5) / self.L

    def bin(self, x):
        return bin_index(self, x)


def bin_index(mesh: Mesh, x):
    """floor(x * L), clamped to L - 1 for values that round up to L."""
    if np.ndim(x) == 0:
        if not (0.0 <= x < 1.0):
            raise DomainError(f"point {x!r} is outside [0, 1)")
        return min(int(x * mesh.L), mesh.L - 1)
    x = np.asarray(x, dtype=float)
    if x.size and not (np.all(x >= 0.0) and np.all(x < 1.0)):
        raise DomainError("samples must lie in [0, 1)")
    return np.minimum((x * mesh.L).astype(np.int64), mesh.L - 1)


def histogram(mesh: Mesh, samples) -> np.ndarray:
    """Integer counts per cell."""
    return np.bincount(bin_index(mesh, samples), minlength=mesh.L)


def joint_counts(mesh: Mesh, y_samples, x_samples) -> np.ndarray:
    """Integer count matrix ``[x_cell, y_cell]``.

    Counts from disjoint shards of a sample can be added before normalising.
    """
    y = np.asarray(y_samples)
    x = np.asarray(x_samples)
    if y.shape != x.shape or y.ndim != 1:
        raise DimensionError(f"sample arrays must be 1-d and equal length, got {y.shape} and {x.shape}")
    if y.size == 0:
        raise DimensionError("need at least one sample pair")
    L = mesh.L
    codes = bin_index(mesh, x) * L + bin_index(mesh, y)
    return np.bincount(codes, minlength=L * L).reshape(L, L)


def joint_from_samples(mesh: Mesh, y_samples, x_samples) -> JointDist2:
    return JointDist2.from_counts(joint_counts(mesh, y_samples, x_samples))


def pairs_from_map(map_, y_samples) -> tuple[np.ndarray, np.ndarray]:
    """(y, T(y)) for i.i.d. inputs."""
    y = np.asarray(y_samples, dtype=float)
    return y, map_(y)


def bernoulli_support(L: int, d: int) -> tuple[np.ndarray, np.ndarray]:
    """Charged (x_cell, y_cell) pairs for E_d on an L-cell mesh.

    y-cell i is stretched over x-cells d*i, ..., d*i + d - 1 (mod L), each
    piece carrying 1/(dL). Pairs repeat when L <= d.
    """
    i = np.repeat(np.arange(L), d)
    r = np.tile(np.arange(d), L)
    return (d * i + r) % L, i


def bernoulli_cell_joint(L: int, d: int) -> JointDist2:
    """Exact image of Lebesgue measure under (Pi, Pi o E_d), any L and d.

    Accumulates the 1/(dL) pieces, so for L <= d with L not dividing d the
    result is *not* uniform (e.g. L = 2, d = 3 gives rows (1/3, 1/6)).
    """
    x, y = bernoulli_support(L, d)
    mass = np.zeros((L, L))
    np.add.at(mass, (x, y), 1.0 / (d * L))
    return JointDist2(mass)


def exact_bernoulli_joint(L: int, d: int) -> JointDist2:
    """Discretised joint of (E_d(Y), Y) for uniform Y.

    For L > d this is the exact cell measure: mass 1/(dL) on dL distinct
    pairs. For L <= d the uniform joint 1/L^2 is returned, which is the exact
    cell measure only when L divides d; use :func:`bernoulli_cell_joint` for
    the exact measure in every case.
    """
    if L < 1 or d < 2:
        raise ValueError("need L >= 1 and d >= 2")
    if L <= d:
        return JointDist2(np.full((L, L), 1.0 / (L * L)))
    x, y = bernoulli_support(L, d)
    mass = np.zeros((L, L))
    mass[x, y] = 1.0 / (d * L)
    return JointDist2(mass)
