"""Deterministic maps blurred by uniform additive noise.

X = T0(Z) + xi mod 1 with xi uniform on [-eps/2, eps/2]. When T0 preserves
Lebesgue measure and Z is uniform, I(X; Z) = ln(1/eps) whatever T0 is, so
noise alone cannot rank maps by how ambiguous they are.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .discretize import Mesh, joint_from_samples
from .dynamics import Bernoulli, MapSpec, Rotation, map_label, mod1
from .prob import mutual_information

# below this many cells per noise width the mesh cannot resolve the blur and
# the continuum value ln(1/eps) is not the right comparison
MIN_CELLS_PER_EPS = 20


@dataclass(frozen=True)
class NoiseSpec:
    epsilon: float
    base_map: MapSpec

    def __post_init__(self):
        if not (0.0 < self.epsilon <= 1.0):
            raise ValueError(f"noise amplitude must lie in (0, 1], got {self.epsilon!r}")

    @property
    def preserves_lebesgue(self) -> bool:
        return isinstance(self.base_map, (Bernoulli, Rotation))


@dataclass
class NoiseResult:
    epsilon: float
    map: str
    L: int
    samples: int
    estimated_mi: float
    analytic_mi: float | None
    flags: list[str] = field(default_factory=list)

    @property
    def difference(self) -> float | None:
        if self.analytic_mi is None:
            return None
        return self.estimated_mi - self.analytic_mi


def blur_samples(spec: NoiseSpec, z_samples, seed: int) -> np.ndarray:
    z = np.asarray(z_samples, dtype=float)
    rng = np.random.default_rng(seed)
    xi = spec.epsilon * (rng.random(z.size) - 0.5)
    return mod1(spec.base_map(z) + xi)


def noise_experiment(spec: NoiseSpec, mesh: Mesh, n_samples: int, seed: int) -> NoiseResult:
    """Plug-in MI of (X, Z) for uniform Z against ln(1/eps).

    Two independent streams are drawn from ``seed``: one for Z, one for the
    noise.
    """
    z_seed, xi_seed = np.random.SeedSequence(seed).generate_state(2)
    z = np.random.default_rng(z_seed).random(n_samples)
    x = blur_samples(spec, z, int(xi_seed))
    est = mutual_information(joint_from_samples(mesh, z, x)).value
    flags = []
    analytic = None
    if spec.preserves_lebesgue:
        analytic = math.log(1.0 / spec.epsilon)
    else:
        flags.append("analytic=n/a")
    if mesh.L * spec.epsilon < MIN_CELLS_PER_EPS:
        flags.append("mesh-coarse")
    return NoiseResult(spec.epsilon, map_label(spec.base_map), mesh.L, n_samples, est, analytic, flags)
