"""Spatial primitives: observation windows, point sets, Poisson sampling,
hexagonal lattices, and exact nearest-neighbor queries with optional wraparound
(toroidal) metric.

Distances on a wrapped window use the minimal-image convention, which equals
the minimum over the nine translated copies of the window.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy.spatial import cKDTree


def substream(seed: int, *key: int) -> np.random.Generator:
    """Independent generator derived from a master seed and an integer key.

    The same (seed, key) pair always yields the same stream, so any unit of
    work keyed by e.g. a trial counter is reproducible in isolation and the
    results of parallel workers do not depend on how work was partitioned.
    """
    if seed < 0:
        raise ValueError("seed must be a non-negative integer")
    entropy = (int(seed),) + tuple(int(k) for k in key)
    return np.random.default_rng(np.random.SeedSequence(entropy=entropy))


@dataclass(frozen=True)
class Window:
    """Rectangular observation window [0, width) x [0, height).

    With wrap=True the window is treated as a torus: opposite edges are
    identified and all distances are minimal-image distances.
    """

    width: float
    height: float
    wrap: bool = True

    def __post_init__(self) -> None:
        if not (self.width > 0 and self.height > 0):
            raise ValueError(
                f"window dimensions must be positive, got {self.width} x {self.height}")

    @property
    def area(self) -> float:
        return self.width * self.height

    @property
    def center(self) -> np.ndarray:
        return np.array([0.5 * self.width, 0.5 * self.height])

    def contains(self, points: np.ndarray) -> np.ndarray:
        p = np.atleast_2d(np.asarray(points, dtype=float))
        return (p[:, 0] >= 0) & (p[:, 0] < self.width) & \
               (p[:, 1] >= 0) & (p[:, 1] < self.height)


@dataclass(frozen=True, eq=False)
class PointSet:
    """Immutable planar point collection with the intensity that generated it.

    intensity is 0 for deterministic constructions (lattices, fixtures).
    """

    points: np.ndarray
    intensity: float = 0.0

    def __post_init__(self) -> None:
        pts = np.array(self.points, dtype=float, copy=True).reshape(-1, 2)
        pts.setflags(write=False)
        object.__setattr__(self, "points", pts)
        if self.intensity < 0:
            raise ValueError("intensity must be non-negative")

    def __len__(self) -> int:
        return self.points.shape[0]


def sample_ppp_points(intensity: float, window: Window, rng: np.random.Generator) -> np.ndarray:
    """Raw homogeneous Poisson sample on the window as an (n, 2) array."""
    if intensity < 0:
        raise ValueError("intensity must be non-negative")
    n = rng.poisson(intensity * window.area)
    pts = np.empty((n, 2))
    pts[:, 0] = rng.uniform(0.0, window.width, n)
    pts[:, 1] = rng.uniform(0.0, window.height, n)
    return pts


def sample_ppp(intensity: float, window: Window, rng: np.random.Generator) -> PointSet:
    """Homogeneous Poisson point process: Poisson count, uniform positions."""
    return PointSet(sample_ppp_points(intensity, window, rng), intensity)


def thin(pset: PointSet, keep_prob: float, rng: np.random.Generator) -> PointSet:
    """Independent thinning; the result is a PPP with intensity keep_prob * lambda."""
    if not 0.0 <= keep_prob <= 1.0:
        raise ValueError("keep probability must lie in [0, 1]")
    mask = rng.random(len(pset)) < keep_prob
    return PointSet(pset.points[mask], pset.intensity * keep_prob)


def distance(a, b, window: Window) -> float:
    """Distance between two points, minimal-image if the window wraps."""
    d = np.abs(np.asarray(a, dtype=float) - np.asarray(b, dtype=float))
    if window.wrap:
        d[0] = min(d[0], window.width - d[0])
        d[1] = min(d[1], window.height - d[1])
    return float(math.hypot(d[0], d[1]))


def distances_to(points: np.ndarray, query, window: Window) -> np.ndarray:
    """Vector of distances from every row of points to a single query point."""
    d = np.abs(points - np.asarray(query, dtype=float))
    if window.wrap:
        np.minimum(d[:, 0], window.width - d[:, 0], out=d[:, 0])
        np.minimum(d[:, 1], window.height - d[:, 1], out=d[:, 1])
    return np.hypot(d[:, 0], d[:, 1])


def nearest(query, pset: PointSet, window: Window) -> tuple[np.ndarray, float]:
    """Exhaustive exact nearest member of pset to query.

    Ties are broken toward the lowest point index. Raises on an empty set.
    """
    if len(pset) == 0:
        raise ValueError("nearest() on an empty point set")
    d = distances_to(pset.points, query, window)
    i = int(np.argmin(d))
    return pset.points[i].copy(), float(d[i])


_TILE_OFFSETS = np.array([(dx, dy) for dx in (-1, 0, 1) for dy in (-1, 0, 1)], dtype=float)


class NeighborIndex:
    """Accelerated exact nearest-member index (kd-tree).

    Wrapped windows are handled by tiling the points over the nine surrounding
    window images, so queries inside the window return exact minimal-image
    neighbors. Results agree with the exhaustive scan in `nearest`.
    """

    def __init__(self, pset: PointSet, window: Window):
        if len(pset) == 0:
            raise ValueError("cannot index an empty point set")
        self.window = window
        self.n = len(pset)
        if window.wrap:
            shifts = _TILE_OFFSETS * np.array([window.width, window.height])
            tiled = (pset.points[None, :, :] + shifts[:, None, :]).reshape(-1, 2)
            self._tree = cKDTree(tiled)
        else:
            self._tree = cKDTree(pset.points)

    def query(self, points) -> tuple[np.ndarray, np.ndarray]:
        """Indices into the original set and distances, for one or many points."""
        pts = np.atleast_2d(np.asarray(points, dtype=float))
        dist, idx = self._tree.query(pts)
        return idx % self.n, dist


def nearest_site_indices(points: np.ndarray, sites: np.ndarray, window: Window,
                         chunk: int = 2048) -> tuple[np.ndarray, np.ndarray]:
    """Exact nearest site for every point, with first-index tie-breaking.

    Evaluates the full distance matrix in chunks; intended for moderate site
    counts (lattice assignment), where deterministic tie handling matters.
    """
    pts = np.atleast_2d(np.asarray(points, dtype=float))
    out_idx = np.empty(len(pts), dtype=np.int64)
    out_d = np.empty(len(pts))
    for lo in range(0, len(pts), chunk):
        block = pts[lo:lo + chunk]
        d = np.abs(block[:, None, :] - sites[None, :, :])
        if window.wrap:
            np.minimum(d[..., 0], window.width - d[..., 0], out=d[..., 0])
            np.minimum(d[..., 1], window.height - d[..., 1], out=d[..., 1])
        dist = np.hypot(d[..., 0], d[..., 1])
        amin = np.argmin(dist, axis=1)
        out_idx[lo:lo + chunk] = amin
        out_d[lo:lo + chunk] = dist[np.arange(len(block)), amin]
    return out_idx, out_d


def hex_pitch(density: float) -> float:
    """Nearest-neighbor spacing of a triangular lattice with the given site density."""
    if density <= 0:
        raise ValueError("density must be positive")
    return math.sqrt(2.0 / (math.sqrt(3.0) * density))


def hex_cell_circumradius(density: float) -> float:
    """Corner radius of the hexagonal cell of area 1/density."""
    if density <= 0:
        raise ValueError("density must be positive")
    return math.sqrt(2.0 / (3.0 * math.sqrt(3.0) * density))


@dataclass(frozen=True, eq=False)
class HexLattice:
    """Triangular lattice of sites whose hexagonal cells have area 1/density."""

    density: float
    sites: PointSet
    cell_area: float
    pitch: float
    window: Window


def hex_lattice(density: float, window: Window) -> HexLattice:
    """Triangular site lattice centered so one site sits at the window center.

    Sites are clipped to [0, width) x [0, height); on a wrapped window whose
    sides are integer multiples of the lattice periods (pitch, sqrt(3)*pitch)
    the clipped set tiles the torus exactly.
    """
    a = hex_pitch(density)
    R = hex_cell_circumradius(density)
    if window.width < 2 * R or window.height < 2 * R:
        raise ValueError(
            f"window {window.width} x {window.height} cannot contain one full "
            f"hexagonal cell of density {density}")
    row_h = a * math.sqrt(3.0) / 2.0
    cx, cy = 0.5 * window.width, 0.5 * window.height
    tol = 1e-9 * max(a, 1.0)

    rows = []
    jmax = int(math.ceil(cy / row_h)) + 1
    for j in range(-jmax, jmax + 1):
        y = cy + j * row_h
        if y < -tol or y >= window.height - tol:
            continue
        xoff = 0.5 * a if (j % 2) else 0.0
        imin = int(math.floor((-cx - xoff) / a)) - 1
        imax = int(math.ceil((window.width - cx - xoff) / a)) + 1
        xs = cx + xoff + a * np.arange(imin, imax + 1)
        xs = xs[(xs >= -tol) & (xs < window.width - tol)]
        rows.append(np.column_stack([xs, np.full(len(xs), y)]))
    pts = np.vstack(rows) if rows else np.empty((0, 2))
    return HexLattice(density=density, sites=PointSet(pts, 0.0),
                      cell_area=1.0 / density, pitch=a, window=window)


def sample_in_hex_cell(circumradius: float, n: int, rng: np.random.Generator) -> np.ndarray:
    """Uniform points in a pointy-top hexagon of the given corner radius,
    centered at the origin. Rejection from the bounding box (acceptance 3/4)."""
    if circumradius <= 0:
        raise ValueError("circumradius must be positive")
    if n == 0:
        return np.empty((0, 2))
    R = circumradius
    half_w = math.sqrt(3.0) * R / 2.0
    out = np.empty((n, 2))
    filled = 0
    while filled < n:
        m = max(16, int(1.4 * (n - filled)) + 4)
        x = rng.uniform(-half_w, half_w, m)
        y = rng.uniform(-R, R, m)
        ok = np.abs(x) + math.sqrt(3.0) * np.abs(y) <= math.sqrt(3.0) * R
        take = min(int(ok.sum()), n - filled)
        sel = np.flatnonzero(ok)[:take]
        out[filled:filled + take, 0] = x[sel]
        out[filled:filled + take, 1] = y[sel]
        filled += take
    return out
