"""Relative ambiguity of a map and the finite-mesh MI it predicts.

For X = T(Y) with |T'| >= 1, discretised MI on an L-cell mesh is predicted as

    ln L + H(X) - integral of ln|T'(y)| f_Y(y) dy

where H(X) is the differential entropy. The integral minus H(X) is the
relative ambiguity; more ambiguous systems pass less information.
"""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .discretize import Mesh, histogram
from .dynamics import DensityEstimate, MapSpec
from .errors import UndefinedDerivativeError
from .prob import DiscreteDist, shannon_entropy

# ln|T'| is floored at ln(DERIV_FLOOR) so that critical points of T (where the
# integrand has an integrable log singularity) do not produce -inf.
DERIV_FLOOR = 1e-8


@dataclass(frozen=True)
class AmbiguityReport:
    diff_entropy_x: float
    lyap_integral: float
    relative_ambiguity: float
    predicted_mi: float
    L: int
    clipped_weight: float = 0.0
    contracting_weight: float = 0.0


def differential_entropy(density: DensityEstimate) -> float:
    """Histogram plug-in: Shannon entropy of the cell masses plus ln(cell width)."""
    return shannon_entropy(density.weights) + math.log(density.mesh.delta)


def _abs_slope(map_: MapSpec, points: np.ndarray) -> np.ndarray:
    try:
        slope = np.abs(map_.derivative(points))
    except UndefinedDerivativeError:
        # a midpoint sits on a breakpoint: average the one-sided slopes
        h = 1e-9
        slope = 0.5 * (np.abs(map_.derivative(points - h)) + np.abs(map_.derivative(points + h)))
    return np.broadcast_to(slope, points.shape)


def lyapunov_terms(map_: MapSpec, density: DensityEstimate) -> tuple[float, float, float]:
    """(integral, weight of floored cells, weight of cells with |T'| < 1)."""
    w = density.weights.mass
    slope = _abs_slope(map_, density.mesh.midpoints())
    logs = np.log(np.maximum(slope, DERIV_FLOOR))
    return float(np.dot(w, logs)), float(w[slope < DERIV_FLOOR].sum()), float(w[slope < 1.0].sum())


def lyapunov_integral(map_: MapSpec, density: DensityEstimate) -> float:
    """Midpoint-rule estimate of the integral of ln|T'| against the density."""
    return lyapunov_terms(map_, density)[0]


def pushforward_density(map_: MapSpec, density: DensityEstimate, refine: int = 64) -> DensityEstimate:
    """Density of T(Y) from that of Y, by mapping ``refine`` points per cell.

    For maps with a constant integer slope the refinement is scaled by that
    slope, so every sub-cell image covers whole target cells and a piecewise
    uniform density is pushed forward exactly.
    """
    mesh = density.mesh
    if map_.grid_multiplier is not None:
        refine *= map_.grid_multiplier
    pts = ((np.arange(mesh.L * refine) + 0.5) / (mesh.L * refine))
    weights = np.repeat(density.weights.mass / refine, refine)
    idx = mesh.bin(map_(pts))
    mass = np.bincount(idx, weights=weights, minlength=mesh.L)
    return DensityEstimate(mesh, DiscreteDist(mass / mass.sum()))


def conjecture_prediction(
    map_: MapSpec,
    y_density: DensityEstimate,
    mesh: Mesh | None = None,
    x_density: DensityEstimate | None = None,
) -> AmbiguityReport:
    """Predicted discretised MI of (T(Y), Y) on ``mesh``.

    ``x_density`` should be the histogram of mapped samples when available;
    otherwise ``y_density`` is pushed through the map.
    """
    mesh = mesh or y_density.mesh
    if x_density is None:
        x_density = pushforward_density(map_, y_density)
    h_x = differential_entropy(x_density)
    lyap, clipped, contracting = lyapunov_terms(map_, y_density)
    ambiguity = lyap - h_x
    return AmbiguityReport(
        diff_entropy_x=h_x,
        lyap_integral=lyap,
        relative_ambiguity=ambiguity,
        predicted_mi=math.log(mesh.L) - ambiguity,
        L=mesh.L,
        clipped_weight=clipped,
        contracting_weight=contracting,
    )


def prediction_from_samples(map_: MapSpec, mesh: Mesh, y_samples, x_samples=None) -> AmbiguityReport:
    y_density = DensityEstimate(mesh, DiscreteDist.from_counts(histogram(mesh, y_samples)))
    if x_samples is None:
        x_samples = map_(np.asarray(y_samples))
    x_density = DensityEstimate(mesh, DiscreteDist.from_counts(histogram(mesh, x_samples)))
    return conjecture_prediction(map_, y_density, mesh, x_density)
