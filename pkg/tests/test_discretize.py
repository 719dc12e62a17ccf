import math

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from infoflow.discretize import (
    Mesh,
    bernoulli_cell_joint,
    bin_index,
    exact_bernoulli_joint,
    histogram,
    joint_counts,
    joint_from_samples,
    pairs_from_map,
)
from infoflow.dynamics import Bernoulli, Rotation, SineBox
from infoflow.errors import DimensionError, DomainError
from infoflow.prob import mutual_information


def test_mesh_basics():
    m = Mesh(4)
    assert m.delta == 0.25
    assert np.allclose(m.midpoints(), [0.125, 0.375, 0.625, 0.875])
    with pytest.raises(ValueError):
        Mesh(0)


def test_bin_examples():
    assert bin_index(Mesh(300), 0.0) == 0
    assert bin_index(Mesh(300), 0.999999) == 299
    assert bin_index(Mesh(4), 0.5) == 2
    with pytest.raises(DomainError):
        bin_index(Mesh(4), 1.0)
    with pytest.raises(DomainError):
        bin_index(Mesh(4), np.array([0.1, -0.1]))


@given(st.integers(1, 1000), st.floats(0, 1, exclude_max=True))
def test_bin_left_closed(L, x):
    i = bin_index(Mesh(L), x)
    assert 0 <= i < L
    # float rounding of i/L may push a boundary point one cell either way
    assert i / L <= x + 1e-15 and x < (i + 1) / L + 1e-15


def test_histogram_and_counts():
    m = Mesh(4)
    assert list(histogram(m, [0.1, 0.2, 0.9])) == [2, 0, 0, 1]
    c = joint_counts(m, [0.1, 0.6], [0.9, 0.3])
    # rows are x cells, columns y cells
    assert c[3, 0] == 1 and c[1, 2] == 1 and c.sum() == 2
    with pytest.raises(DimensionError):
        joint_counts(m, [0.1], [0.1, 0.2])
    with pytest.raises(DimensionError):
        joint_counts(m, [], [])


def test_identity_gives_diagonal(rng):
    y = rng.random(1000)
    j = joint_from_samples(Mesh(10), y, y)
    assert np.count_nonzero(j.mass - np.diag(np.diag(j.mass))) == 0


def test_pairs_from_map_examples():
    y = np.array([0.25, 0.75])
    assert np.array_equal(pairs_from_map(Rotation(0.0), y)[1], y)
    assert np.array_equal(pairs_from_map(Bernoulli(2), y)[1], [0.5, 0.5])
    assert pairs_from_map(SineBox(1), np.array([0.25]))[1][0] == 0.0


@pytest.mark.parametrize("L,d,expected", [(2, 2, 0.0), (4, 2, math.log(2)), (300, 7, math.log(300 / 7))])
def test_exact_bernoulli_examples(L, d, expected):
    assert mutual_information(exact_bernoulli_joint(L, d)).value == pytest.approx(expected, abs=1e-12)


def test_exact_bernoulli_support():
    j = exact_bernoulli_joint(4, 2).mass
    assert np.count_nonzero(j) == 8 and np.allclose(j[j > 0], 1 / 8)
    assert np.allclose(exact_bernoulli_joint(2, 2).mass, 0.25)


def midpoint_pushforward(L, d, refine=64):
    # independent oracle: push a fine midpoint grid of y through E_d
    y = (np.arange(L * refine * d) + 0.5) / (L * refine * d)
    x = (d * y) % 1.0
    c = np.zeros((L, L))
    np.add.at(c, ((x * L).astype(int), (y * L).astype(int)), 1.0)
    return c / c.sum()


@pytest.mark.parametrize("L,d", [(5, 2), (9, 4), (16, 3), (2, 3), (3, 5), (4, 8)])
def test_cell_joint_matches_midpoint_oracle(L, d):
    assert np.allclose(bernoulli_cell_joint(L, d).mass, midpoint_pushforward(L, d), atol=1e-15)


def test_exact_and_cell_joint_agree_when_cells_fit():
    for L, d in [(7, 3), (30, 5), (2, 4), (3, 6)]:
        assert np.allclose(exact_bernoulli_joint(L, d).mass, bernoulli_cell_joint(L, d).mass, atol=1e-15)


def test_coarse_mesh_not_dividing_d_is_not_independent():
    # L = 2, d = 3: cell 0 of y covers 1.5 laps, so rows are (1/3, 1/6)
    j = bernoulli_cell_joint(2, 3).mass
    assert np.allclose(j, [[1 / 3, 1 / 6], [1 / 6, 1 / 3]])
    assert mutual_information(bernoulli_cell_joint(2, 3)).value > 0.05


def test_empirical_coarse_mesh_mi_near_zero(rng):
    y = rng.random(10**5)
    assert mutual_information(joint_from_samples(Mesh(3), y, Bernoulli(3)(y))).value < 1e-3


def test_empirical_bernoulli3_l300():
    y = np.random.default_rng(0).random(10**6)
    mi = mutual_information(joint_from_samples(Mesh(300), y, Bernoulli(3)(y))).value
    assert abs(mi - math.log(100)) <= 0.02
