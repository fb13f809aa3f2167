"""Geometry layer: windows, point processes, lattices, neighbor queries."""

import math

import numpy as np
import pytest

from renergy.geometry import (NeighborIndex, PointSet, Window, distance,
                              distances_to, hex_cell_circumradius, hex_lattice,
                              hex_pitch, nearest, nearest_site_indices,
                              sample_in_hex_cell, sample_ppp, substream, thin)

# Reference values for a unit-density triangular lattice (closed forms
# sqrt(2/sqrt(3)) and sqrt(2/(3*sqrt(3))), frozen by an independent script).
PITCH_AT_UNIT_DENSITY = 1.0745699318235419
CELL_RADIUS_AT_UNIT_DENSITY = 0.62040323940139973


def test_substream_reproducible_and_keyed():
    a = substream(42, 7).standard_normal(5)
    b = substream(42, 7).standard_normal(5)
    c = substream(42, 8).standard_normal(5)
    assert np.array_equal(a, b)
    assert not np.array_equal(a, c)
    assert not np.array_equal(substream(43, 7).standard_normal(5), a)


def test_substream_multicomponent_keys_differ():
    assert not np.array_equal(substream(1, 2, 3).standard_normal(4),
                              substream(1, 3, 2).standard_normal(4))


def test_substream_rejects_negative_seed():
    with pytest.raises(ValueError):
        substream(-1, 0)


def test_window_basics():
    w = Window(4.0, 2.0)
    assert w.area == 8.0
    assert np.array_equal(w.center, [2.0, 1.0])
    assert w.contains((0.0, 0.0))
    assert not w.contains((4.0, 1.0))
    with pytest.raises(ValueError):
        Window(0.0, 1.0)


def test_pointset_is_immutable_and_copies():
    pts = np.zeros((3, 2))
    ps = PointSet(pts)
    pts[0, 0] = 5.0
    assert ps.points[0, 0] == 0.0
    with pytest.raises(ValueError):
        ps.points[0, 0] = 1.0


def test_ppp_void_probability():
    # P(no point in a unit window at intensity 1) = exp(-1)
    w = Window(1.0, 1.0)
    empties = sum(len(sample_ppp(1.0, w, substream(101, t))) == 0
                  for t in range(4000))
    p = empties / 4000
    assert abs(p - math.exp(-1.0)) < 0.025  # ~3.3 binomial sd


def test_ppp_count_mean_and_variance():
    w = Window(5.0, 4.0)
    counts = np.array([len(sample_ppp(10.0, w, substream(55, t)))
                       for t in range(500)])
    # Poisson(200): mean within 4 standard errors, variance within 25%
    assert abs(counts.mean() - 200.0) < 4.0 * math.sqrt(200.0 / 500)
    assert 150.0 < counts.var() < 250.0


def test_ppp_points_inside_window():
    w = Window(3.0, 7.0)
    ps = sample_ppp(30.0, w, substream(9, 0))
    assert np.all(ps.points[:, 0] >= 0) and np.all(ps.points[:, 0] < 3.0)
    assert np.all(ps.points[:, 1] >= 0) and np.all(ps.points[:, 1] < 7.0)
    assert ps.intensity == 30.0


def test_thinning_keeps_binomial_fraction():
    w = Window(10.0, 10.0)
    ps = sample_ppp(50.0, w, substream(77, 0))
    kept = thin(ps, 0.3, substream(77, 1))
    n, m = len(ps), len(kept)
    sd = math.sqrt(n * 0.3 * 0.7)
    assert abs(m - 0.3 * n) < 4 * sd
    assert kept.intensity == pytest.approx(15.0)
    with pytest.raises(ValueError):
        thin(ps, 1.5, substream(77, 2))


def test_minimal_image_distance():
    w = Window(10.0, 10.0, wrap=True)
    assert distance((1.0, 1.0), (9.0, 9.0), w) == pytest.approx(math.sqrt(8.0))
    flat = Window(10.0, 10.0, wrap=False)
    assert distance((1.0, 1.0), (9.0, 9.0), flat) == pytest.approx(math.sqrt(128.0))
    # distances_to agrees with scalar distance
    pts = substream(3, 0).uniform(0, 10, size=(50, 2))
    d = distances_to(pts, (1.0, 1.0), w)
    for i in range(50):
        assert d[i] == pytest.approx(distance(pts[i], (1.0, 1.0), w))


def test_nearest_breaks_ties_toward_lowest_index():
    ps = PointSet(np.array([[0.0, 1.0], [1.0, 0.0]]))
    w = Window(10.0, 10.0, wrap=False)
    point, d = nearest((0.0, 0.0), ps, w)
    assert d == pytest.approx(1.0)
    assert np.array_equal(point, [0.0, 1.0])
    with pytest.raises(ValueError):
        nearest((0.0, 0.0), PointSet(np.empty((0, 2))), w)


@pytest.mark.parametrize("wrap", [True, False])
def test_neighbor_index_matches_exhaustive(wrap):
    w = Window(8.0, 6.0, wrap=wrap)
    rng = substream(2024, int(wrap))
    sites = PointSet(rng.uniform((0, 0), (8, 6), size=(300, 2)))
    queries = rng.uniform((0, 0), (8, 6), size=(1000, 2))
    idx, dist = NeighborIndex(sites, w).query(queries)
    for i in range(len(queries)):
        _, d_exact = nearest(queries[i], sites, w)
        assert dist[i] == pytest.approx(d_exact, abs=1e-9)
        # the reported index must realize the minimal distance
        assert distance(sites.points[idx[i]], queries[i], w) == pytest.approx(
            d_exact, abs=1e-9)


def test_nearest_site_indices_agrees_with_neighbor_index():
    w = Window(5.0, 5.0, wrap=True)
    rng = substream(31, 0)
    sites = rng.uniform((0, 0), (5, 5), size=(40, 2))
    pts = rng.uniform((0, 0), (5, 5), size=(500, 2))
    idx_a, dist_a = nearest_site_indices(pts, sites, w, chunk=64)
    idx_b, dist_b = NeighborIndex(PointSet(sites), w).query(pts)
    assert np.allclose(dist_a, dist_b, atol=1e-9)
    disagree = idx_a != idx_b
    # any disagreement must be an exact distance tie
    assert np.all(np.isclose(dist_a[disagree], dist_b[disagree], atol=1e-9))


def test_hex_pitch_and_radius_reference_values():
    assert hex_pitch(1.0) == pytest.approx(PITCH_AT_UNIT_DENSITY, rel=1e-12)
    assert hex_cell_circumradius(1.0) == pytest.approx(CELL_RADIUS_AT_UNIT_DENSITY,
                                                       rel=1e-12)
    # scaling: pitch ~ density^(-1/2)
    assert hex_pitch(4.0) == pytest.approx(PITCH_AT_UNIT_DENSITY / 2.0, rel=1e-12)


def test_hex_lattice_commensurate_count_and_spacing():
    density = 2.0
    a = hex_pitch(density)
    w = Window(3 * a, 2 * math.sqrt(3.0) * a, wrap=True)
    lat = hex_lattice(density, w)
    assert len(lat.sites) == round(w.area * density) == 12
    assert lat.cell_area == pytest.approx(1.0 / density)
    # one site at the window center
    d0 = distances_to(lat.sites.points, w.center, w).min()
    assert d0 < 1e-9
    # toroidal nearest-neighbor spacing equals the pitch for every site
    pts = lat.sites.points
    for i in range(len(pts)):
        d = distances_to(np.delete(pts, i, axis=0), pts[i], w)
        assert d.min() == pytest.approx(a, rel=1e-9)


def test_hex_lattice_rejects_window_below_one_cell():
    with pytest.raises(ValueError):
        hex_lattice(1.0, Window(0.5, 0.5))


class TestHexCellSampler:
    R = 1.3

    def _sample(self, n, key=0):
        return sample_in_hex_cell(self.R, n, substream(88, key))

    def test_points_inside_hexagon(self):
        pts = self._sample(20000)
        x, y = np.abs(pts[:, 0]), np.abs(pts[:, 1])
        s3 = math.sqrt(3.0)
        assert np.all(x <= s3 * self.R / 2 + 1e-12)
        assert np.all(x + s3 * y <= s3 * self.R + 1e-12)

    def test_radial_moments(self):
        # uniform hexagon with circumradius R: E[r^2] = 5 R^2 / 12 and
        # E[r^4] = 7 R^4 / 30 (independent quadrature oracle)
        pts = self._sample(200000, key=1)
        r2 = pts[:, 0] ** 2 + pts[:, 1] ** 2
        m2, m4 = r2.mean(), (r2 ** 2).mean()
        se2 = r2.std() / math.sqrt(len(r2))
        se4 = (r2 ** 2).std() / math.sqrt(len(r2))
        assert abs(m2 - 5.0 * self.R ** 2 / 12.0) < 3 * se2
        assert abs(m4 - 7.0 * self.R ** 4 / 30.0) < 3 * se4

    def test_mean_distance_power_below_disk_moment(self):
        # the covering-disk fourth moment (2/(2+alpha)) R^4 dominates the
        # hexagon's (exact ratio 7/30 vs 1/3)
        pts = self._sample(100000, key=2)
        m4 = ((pts[:, 0] ** 2 + pts[:, 1] ** 2) ** 2).mean()
        assert m4 < (2.0 / 6.0) * self.R ** 4

    def test_empty_and_invalid(self):
        assert self._sample(0).shape == (0, 2)
        with pytest.raises(ValueError):
            sample_in_hex_cell(-1.0, 5, substream(88, 3))
