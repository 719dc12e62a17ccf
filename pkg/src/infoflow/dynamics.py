"""Interval maps on [0, 1), their orbits, and invariant-density estimates.

Bernoulli maps get special treatment when iterated. In binary floating point
``d*x mod 1`` discards low mantissa bits every step, so for d = 2 every float
orbit lands on the fixed point 0 within about 53 iterations (and other d lose
precision the same way, only more slowly). Orbits of ``E_d`` are therefore carried
exactly on the rational grid ``a / GRID_PRIME`` with ``a`` a Python int, where
``E_d`` acts as ``a -> d*a mod GRID_PRIME``. The modulus is a safe prime, so
every multiplier 2 <= d < GRID_PRIME - 1 has multiplicative order at least
(GRID_PRIME - 1) / 2 and the orbit never becomes periodic at any length we
could simulate. Only the stored samples are rounded to float.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Union

import numpy as np

from .discretize import Mesh, histogram
from .errors import DomainError, UndefinedDerivativeError, UsageError
from .prob import DiscreteDist

# 2*q + 1 with q = 36028797018962843 also prime; fits in int64 with room for
# small integer coefficients.
GRID_PRIME = 72057594037925687

TWO_PI = 2.0 * math.pi


def mod1(y):
    """x - floor(x), with any rounding artefact at 1.0 sent to 0.0."""
    if np.ndim(y) == 0:
        r = float(y) - math.floor(y)
        return 0.0 if r >= 1.0 else r
    y = np.asarray(y, dtype=float)
    r = y - np.floor(y)
    r[r >= 1.0] = 0.0
    return r


def _check_domain(x):
    if np.ndim(x) == 0:
        if not (0.0 <= x < 1.0):
            raise DomainError(f"point {x!r} is outside [0, 1)")
        return
    x = np.asarray(x)
    bad = ~((x >= 0.0) & (x < 1.0))
    if np.any(bad):
        raise DomainError(f"{int(bad.sum())} points outside [0, 1), e.g. {x[bad][0]!r}")


def to_grid(x: float) -> int:
    """Nearest point a/GRID_PRIME to x, as the integer a."""
    return int(round(Fraction(x) * GRID_PRIME)) % GRID_PRIME


def from_grid(a: int) -> float:
    return float(grid_to_float(np.array([a], dtype=np.int64))[0])


def grid_to_float(a: np.ndarray) -> np.ndarray:
    """a / GRID_PRIME for an int64 array, within about one ulp.

    Split into 28-bit halves so that no integer is rounded before dividing.
    """
    a = np.asarray(a, dtype=np.int64)
    hi = (a >> 28).astype(float) * float(1 << 28)
    lo = (a & ((1 << 28) - 1)).astype(float)
    r = hi / GRID_PRIME + lo / GRID_PRIME
    r[r >= 1.0] = 0.0
    return r


class MapSpec:
    """Base class for the interval maps. Instances are immutable and callable.

    ``map(x)`` evaluates on scalars or arrays and rejects points outside
    [0, 1). Subclasses provide ``_eval`` (vectorised, no checks),
    ``_step`` (fast scalar path used for orbits) and ``_deriv``.
    """

    def __call__(self, x):
        _check_domain(x)
        if np.ndim(x) == 0:
            return self._step(float(x))
        return self._eval(np.asarray(x, dtype=float))

    def derivative(self, x):
        return self._deriv(x)

    # for Bernoulli-type maps, the exact integer action on the prime grid
    grid_multiplier: int | None = None


@dataclass(frozen=True)
class Bernoulli(MapSpec):
    """E_d(x) = d*x mod 1."""

    d: int

    def __post_init__(self):
        if int(self.d) != self.d or self.d < 2:
            raise ValueError(f"Bernoulli map needs an integer d >= 2, got {self.d!r}")

    @property
    def grid_multiplier(self) -> int:
        return int(self.d)

    def _step(self, x: float) -> float:
        return mod1(self.d * x)

    def _eval(self, x):
        return mod1(self.d * x)

    def _deriv(self, x):
        return float(self.d) if np.ndim(x) == 0 else np.full(np.shape(x), float(self.d))


@dataclass(frozen=True)
class SineBox(MapSpec):
    """S_n(x) = (1 + sin 2 pi n x) / 2, with the value 1 folded to 0."""

    n: int

    def __post_init__(self):
        if int(self.n) != self.n or self.n < 1:
            raise ValueError(f"sine box needs an integer n >= 1, got {self.n!r}")

    def _step(self, x: float) -> float:
        r = 0.5 * (1.0 + math.sin(TWO_PI * self.n * x))
        return 0.0 if r >= 1.0 else r

    def _eval(self, x):
        r = 0.5 * (1.0 + np.sin(TWO_PI * self.n * x))
        r[r >= 1.0] = 0.0
        return r

    def _deriv(self, x):
        return math.pi * self.n * np.cos(TWO_PI * self.n * np.asarray(x, dtype=float)) \
            if np.ndim(x) else math.pi * self.n * math.cos(TWO_PI * self.n * x)


@dataclass(frozen=True)
class Rotation(MapSpec):
    """R_alpha(x) = x + alpha mod 1."""

    alpha: float

    def __post_init__(self):
        if not (0.0 <= self.alpha < 1.0):
            raise ValueError(f"rotation angle must lie in [0, 1), got {self.alpha!r}")

    def _step(self, x: float) -> float:
        return mod1(x + self.alpha)

    def _eval(self, x):
        return mod1(x + self.alpha)

    def _deriv(self, x):
        return 1.0 if np.ndim(x) == 0 else np.ones(np.shape(x))


@dataclass(frozen=True)
class PiecewiseLinear(MapSpec):
    """Continuous lift with the given slopes between breakpoints, reduced mod 1.

    ``breakpoints`` are the interior break positions, strictly increasing in
    (0, 1); ``slopes`` has one more entry than ``breakpoints``. The lift starts
    at ``offset`` for x = 0.
    """

    breakpoints: tuple
    slopes: tuple
    offset: float = 0.0
    _knots: np.ndarray = field(init=False, repr=False, compare=False)
    _values: np.ndarray = field(init=False, repr=False, compare=False)

    def __post_init__(self):
        bps = tuple(float(b) for b in self.breakpoints)
        slopes = tuple(float(s) for s in self.slopes)
        if len(slopes) != len(bps) + 1:
            raise ValueError("need exactly one more slope than interior breakpoints")
        knots = np.array((0.0,) + bps + (1.0,))
        if np.any(np.diff(knots) <= 0):
            raise ValueError("breakpoints must be strictly increasing inside (0, 1)")
        values = np.concatenate(([self.offset], self.offset + np.cumsum(np.diff(knots) * slopes)))
        object.__setattr__(self, "breakpoints", bps)
        object.__setattr__(self, "slopes", slopes)
        object.__setattr__(self, "_knots", knots)
        object.__setattr__(self, "_values", values)

    def _piece(self, x):
        return np.clip(np.searchsorted(self._knots, x, side="right") - 1, 0, len(self.slopes) - 1)

    def _eval(self, x):
        i = self._piece(x)
        s = np.asarray(self.slopes)[i]
        return mod1(self._values[i] + s * (x - self._knots[i]))

    def _step(self, x: float) -> float:
        return float(self._eval(np.array([x]))[0])

    def _deriv(self, x):
        xa = np.atleast_1d(np.asarray(x, dtype=float))
        slopes = np.asarray(self.slopes)
        for b, left, right in zip(self.breakpoints, slopes[:-1], slopes[1:]):
            if left != right and np.any(xa == b):
                raise UndefinedDerivativeError(f"derivative undefined at breakpoint {b!r}")
        out = slopes[self._piece(xa)]
        return float(out[0]) if np.ndim(x) == 0 else out


def evaluate(map_: MapSpec, x):
    return map_(x)


def derivative(map_: MapSpec, x):
    return map_.derivative(x)


def parse_map(text: str) -> MapSpec:
    """``bernoulli:3``, ``sinebox:4``, ``rotation:0.37``, ``pwl:0.5/2,3``."""
    kind, _, arg = text.strip().partition(":")
    kind = kind.lower()
    try:
        if kind in ("bernoulli", "e"):
            return Bernoulli(int(arg))
        if kind in ("sinebox", "sine_box", "s"):
            return SineBox(int(arg))
        if kind in ("rotation", "r"):
            return Rotation(float(arg))
        if kind in ("pwl", "piecewise_linear"):
            bps, _, slopes = arg.partition("/")
            return PiecewiseLinear(
                tuple(float(b) for b in bps.split(",") if b),
                tuple(float(s) for s in slopes.split(",")),
            )
    except ValueError as exc:
        raise UsageError(f"bad map spec {text!r}: {exc}") from None
    raise UsageError(f"unknown map kind {kind!r} in {text!r}")


def map_label(map_: MapSpec) -> str:
    if isinstance(map_, Bernoulli):
        return f"bernoulli:{map_.d}"
    if isinstance(map_, SineBox):
        return f"sinebox:{map_.n}"
    if isinstance(map_, Rotation):
        return f"rotation:{map_.alpha:g}"
    return repr(map_)


@dataclass(frozen=True, eq=False)
class Trajectory:
    samples: np.ndarray
    seed_state: float
    discarded: int
    length: int


def _grid_orbit(multiplier: int, x0: float, transients: int, length: int) -> np.ndarray:
    p = GRID_PRIME
    a = to_grid(x0)
    for _ in range(transients):
        a = multiplier * a % p
    out = [0] * length
    for t in range(length):
        out[t] = a
        a = multiplier * a % p
    return grid_to_float(np.array(out, dtype=np.int64))


def generate_trajectory(map_: MapSpec, x0: float, transients: int, length: int) -> Trajectory:
    """Iterate the map from x0, drop ``transients`` iterates, keep ``length``."""
    _check_domain(x0)
    if transients < 0 or length < 1:
        raise ValueError("need transients >= 0 and length >= 1")
    if map_.grid_multiplier is not None:
        samples = _grid_orbit(map_.grid_multiplier, x0, transients, length)
    else:
        step = map_._step
        x = float(x0)
        for _ in range(transients):
            x = step(x)
        out = [0.0] * length
        for t in range(length):
            out[t] = x
            x = step(x)
        samples = np.array(out)
    samples.setflags(write=False)
    return Trajectory(samples, float(x0), int(transients), int(length))


@dataclass(frozen=True, eq=False)
class DensityEstimate:
    mesh: Mesh
    weights: DiscreteDist

    def __post_init__(self):
        if self.weights.alphabet_size != self.mesh.L:
            raise ValueError("density weights do not match the mesh")

    @classmethod
    def from_samples(cls, mesh: Mesh, samples) -> "DensityEstimate":
        return cls(mesh, DiscreteDist.from_counts(histogram(mesh, samples)))

    @classmethod
    def uniform(cls, mesh: Mesh) -> "DensityEstimate":
        return cls(mesh, DiscreteDist.uniform(mesh.L))

    def density(self) -> np.ndarray:
        """Histogram heights (mass / cell width)."""
        return self.weights.mass * self.mesh.L


def estimate_acip(
    map_: MapSpec, mesh: Mesh, x0: float = 0.5, transients: int = 1000, length: int = 10**6
) -> DensityEstimate:
    traj = generate_trajectory(map_, x0, transients, length)
    return DensityEstimate.from_samples(mesh, traj.samples)


# --- sampling ---------------------------------------------------------------


@dataclass(frozen=True)
class Uniform:
    pass


@dataclass(frozen=True)
class TruncatedGaussian:
    """Gaussian with the given mean and *variance*, conditioned on [0, 1)."""

    mean: float
    variance: float

    def __post_init__(self):
        if self.variance <= 0:
            raise ValueError("variance must be positive")


@dataclass(frozen=True)
class Acip:
    """Invariant density of ``map``, represented by a stored orbit."""

    map: MapSpec | None = None
    x0: float = 0.5
    transients: int = 1000
    length: int = 10**6


Distribution = Union[Uniform, TruncatedGaussian, Acip]


def parse_dist(text: str) -> Distribution:
    """``uniform``, ``gaussian:MEAN,VARIANCE`` or ``acip``."""
    kind, _, arg = text.strip().partition(":")
    kind = kind.lower()
    if kind == "uniform" and not arg:
        return Uniform()
    if kind == "acip" and not arg:
        return Acip()
    if kind == "gaussian":
        try:
            mean, var = (float(v) for v in arg.split(","))
            return TruncatedGaussian(mean, var)
        except ValueError:
            pass
    raise UsageError(f"bad distribution spec {text!r}; use uniform, gaussian:MEAN,VAR or acip")


def dist_label(dist: Distribution) -> str:
    if isinstance(dist, Uniform):
        return "uniform"
    if isinstance(dist, TruncatedGaussian):
        return f"gaussian:{dist.mean:g},{dist.variance:g}"
    return "acip"


def sample_distribution(dist: Distribution, count: int, seed: int) -> np.ndarray:
    if count < 1:
        raise ValueError("count must be >= 1")
    rng = np.random.default_rng(seed)
    if isinstance(dist, Uniform):
        return rng.random(count)
    if isinstance(dist, TruncatedGaussian):
        sd = math.sqrt(dist.variance)
        out = np.empty(0)
        while out.size < count:
            draw = rng.normal(dist.mean, sd, size=max(2 * (count - out.size), 1024))
            out = np.concatenate((out, draw[(draw >= 0.0) & (draw < 1.0)]))
        return out[:count]
    if isinstance(dist, Acip):
        if dist.map is None:
            raise ValueError("acip distribution has no map bound to it")
        traj = generate_trajectory(dist.map, dist.x0, dist.transients, dist.length)
        return traj.samples[rng.integers(0, traj.length, size=count)]
    raise TypeError(f"unsupported distribution {dist!r}")
