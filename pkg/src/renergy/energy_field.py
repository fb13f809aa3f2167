"""Random energy field driven by a Poisson process of energy centers.

Two constructions over the same center process are supported:

* boolean max field: the field value at a location is gamma times the decay
  of the distance to the NEAREST center (a Boolean max-of-kernels model);
* shot noise field: gamma times the SUM of kernel decays over all centers.

Kernels are the squared-exponential decay exp(-d^2/nu) and, for the boolean
construction only, the power-law decay (1 + d^2/nu)^(-1). The dimensionless
product psi = nu * lambda_e controls every distributional property of the
boolean exponential field; its closed forms below are exact on the infinite
plane and hold on a wrapped window up to the minimal-image truncation.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass

import numpy as np

from .geometry import PointSet, Window, distances_to, sample_ppp


class Kernel(enum.Enum):
    BOOLEAN_MAX_EXP = "boolean_max_exp"
    SHOT_NOISE_EXP = "shot_noise_exp"
    BOOLEAN_MAX_PLAW = "boolean_max_plaw"


@dataclass(frozen=True)
class EnergyFieldSpec:
    """Parameters of the energy field.

    gamma: peak (and a.s. maximal, for boolean kernels) field value, W.
    lambda_e: intensity of the energy-center process, 1/km^2.
    nu: squared decay length of the kernel, km^2.
    """

    gamma: float
    lambda_e: float
    nu: float
    kernel: Kernel = Kernel.BOOLEAN_MAX_EXP

    def __post_init__(self) -> None:
        for name in ("gamma", "lambda_e", "nu"):
            if getattr(self, name) <= 0:
                raise ValueError(f"{name} must be positive")
        if not isinstance(self.kernel, Kernel):
            raise ValueError(f"unknown kernel {self.kernel!r}")

    @property
    def psi(self) -> float:
        """Characteristic dimensionless parameter nu * lambda_e."""
        return self.nu * self.lambda_e


@dataclass(frozen=True, eq=False)
class FieldRealization:
    spec: EnergyFieldSpec
    centers: PointSet
    window: Window


def draw_field(spec: EnergyFieldSpec, window: Window, rng: np.random.Generator) -> FieldRealization:
    """Sample the center process and wrap it with the spec."""
    return FieldRealization(spec, sample_ppp(spec.lambda_e, window, rng), window)


def decay_exp(d, nu: float):
    """Squared-exponential kernel exp(-d^2 / nu)."""
    if nu <= 0:
        raise ValueError("nu must be positive")
    d = np.asarray(d, dtype=float)
    if np.any(d < 0):
        raise ValueError("distance must be non-negative")
    return np.exp(-(d * d) / nu)


def decay_power_law(d, nu: float):
    """Power-law kernel (1 + d^2 / nu)^(-1)."""
    if nu <= 0:
        raise ValueError("nu must be positive")
    d = np.asarray(d, dtype=float)
    if np.any(d < 0):
        raise ValueError("distance must be non-negative")
    return 1.0 / (1.0 + (d * d) / nu)


_SHOT_OFFSETS = [(dx, dy) for dx in (-1, 0, 1) for dy in (-1, 0, 1)]


def _min_center_distances(centers: np.ndarray, points: np.ndarray, window: Window,
                          chunk: int = 4096) -> np.ndarray:
    """Distance from each point to the nearest center; +inf when no centers."""
    out = np.full(len(points), np.inf)
    if len(centers) == 0:
        return out
    if len(points) == 1:
        return np.array([distances_to(centers, points[0], window).min()])
    for lo in range(0, len(points), chunk):
        block = points[lo:lo + chunk]
        d = np.abs(block[:, None, :] - centers[None, :, :])
        if window.wrap:
            np.minimum(d[..., 0], window.width - d[..., 0], out=d[..., 0])
            np.minimum(d[..., 1], window.height - d[..., 1], out=d[..., 1])
        out[lo:lo + chunk] = np.hypot(d[..., 0], d[..., 1]).min(axis=1)
    return out


def _shot_sums(centers: np.ndarray, points: np.ndarray, window: Window, nu: float,
               chunk: int = 1024) -> np.ndarray:
    """Sum of exponential kernels over centers and, when wrapping, their images."""
    out = np.zeros(len(points))
    if len(centers) == 0:
        return out
    offsets = _SHOT_OFFSETS if window.wrap else [(0, 0)]
    shifts = [np.array([dx * window.width, dy * window.height]) for dx, dy in offsets]
    for lo in range(0, len(points), chunk):
        block = points[lo:lo + chunk]
        acc = np.zeros(len(block))
        for shift in shifts:
            diff = block[:, None, :] - (centers + shift)[None, :, :]
            sq = diff[..., 0] ** 2 + diff[..., 1] ** 2
            acc += np.exp(-sq / nu).sum(axis=1)
        out[lo:lo + chunk] = acc
    return out


def field_values(real: FieldRealization, points) -> np.ndarray:
    """Field values at one or many locations inside the window."""
    pts = np.atleast_2d(np.asarray(points, dtype=float))
    spec = real.spec
    if spec.kernel is Kernel.SHOT_NOISE_EXP:
        return spec.gamma * _shot_sums(real.centers.points, pts, real.window, spec.nu)
    d = _min_center_distances(real.centers.points, pts, real.window)
    vals = np.zeros(len(pts))
    finite = np.isfinite(d)
    if spec.kernel is Kernel.BOOLEAN_MAX_EXP:
        vals[finite] = spec.gamma * decay_exp(d[finite], spec.nu)
    else:
        vals[finite] = spec.gamma * decay_power_law(d[finite], spec.nu)
    return vals


def intensity_at(real: FieldRealization, point) -> float:
    """Field value at a single location (0 when the window holds no center
    and the kernel is a boolean max)."""
    return float(field_values(real, point)[0])


def influence_radius(x: float, spec: EnergyFieldSpec) -> float:
    """Radius within which a center must lie for the boolean field to exceed x."""
    if not 0 < x <= spec.gamma:
        raise ValueError("threshold must lie in (0, gamma]")
    if spec.kernel is Kernel.BOOLEAN_MAX_PLAW:
        return math.sqrt(spec.nu * (spec.gamma / x - 1.0))
    return math.sqrt(spec.nu * math.log(spec.gamma / x))


def cdf_boolean_exp(x, spec: EnergyFieldSpec):
    """Marginal law of the boolean exponential field: (x/gamma)^(pi psi)."""
    x = np.asarray(x, dtype=float)
    if np.any(x < 0) or np.any(x > spec.gamma):
        raise ValueError("x must lie in [0, gamma]")
    return (x / spec.gamma) ** (math.pi * spec.psi)


def cdf_boolean_plaw(x, spec: EnergyFieldSpec):
    """Marginal law of the boolean power-law field: exp(-pi psi (gamma/x - 1)).

    The law has an essential zero at the origin, so x = 0 maps to 0 exactly;
    finite sampling windows can produce empty-field realizations there.
    """
    x = np.asarray(x, dtype=float)
    if np.any(x < 0) or np.any(x > spec.gamma):
        raise ValueError("x must lie in [0, gamma]")
    with np.errstate(divide="ignore"):
        return np.where(x > 0,
                        np.exp(-math.pi * spec.psi
                               * (spec.gamma / np.where(x > 0, x, 1.0) - 1.0)),
                        0.0)


@dataclass(frozen=True)
class FieldMoments:
    mean: float
    second_moment: float
    variance: float


def boolean_exp_moments(spec: EnergyFieldSpec) -> FieldMoments:
    """Exact mean, second moment and variance of the boolean exponential field."""
    p = math.pi * spec.psi
    g = spec.gamma
    mean = p * g / (1.0 + p)
    second = p * g * g / (2.0 + p)
    return FieldMoments(mean, second, second - mean * mean)


def shot_noise_mean(spec: EnergyFieldSpec) -> float:
    """Campbell mean of the shot-noise field, pi * gamma * psi."""
    return math.pi * spec.gamma * spec.psi


def disk_overlap_area(r1: float, r2: float, d: float) -> float:
    """Exact area of the intersection of two disks with radii r1, r2 and
    center separation d."""
    if r1 < 0 or r2 < 0 or d < 0:
        raise ValueError("radii and separation must be non-negative")
    if d >= r1 + r2:
        return 0.0
    if d <= abs(r1 - r2):
        r = min(r1, r2)
        return math.pi * r * r
    a = (d * d + r1 * r1 - r2 * r2) / (2.0 * d)
    h2 = r1 * r1 - a * a
    h = math.sqrt(h2) if h2 > 0 else 0.0
    ang1 = math.acos(max(-1.0, min(1.0, a / r1)))
    ang2 = math.acos(max(-1.0, min(1.0, (d - a) / r2)))
    return r1 * r1 * ang1 + r2 * r2 * ang2 - d * h


def joint_cdf_boolean_exp(x1: float, x2: float, d: float, spec: EnergyFieldSpec) -> float:
    """Joint law Pr(g(X1) <= x1, g(X2) <= x2) for locations at distance d.

    The event is the absence of centers in the union of the two influence
    disks, so the joint CDF is the product of marginals corrected by
    exp(lambda_e * overlap) with the exact two-disk overlap area. At d = 0 and
    x1 = x2 it reduces to the marginal; beyond the sum of influence radii it
    factorizes exactly.
    """
    if spec.kernel is not Kernel.BOOLEAN_MAX_EXP:
        raise ValueError("joint law is implemented for the boolean exponential kernel")
    if d < 0:
        raise ValueError("separation must be non-negative")
    for x in (x1, x2):
        if not 0 < x <= spec.gamma:
            raise ValueError("thresholds must lie in (0, gamma]")
    r1 = influence_radius(x1, spec)
    r2 = influence_radius(x2, spec)
    marg = float(cdf_boolean_exp(x1, spec) * cdf_boolean_exp(x2, spec))
    if d >= r1 + r2:
        return marg
    return marg * math.exp(spec.lambda_e * disk_overlap_area(r1, r2, d))


def _grouped_min(values: np.ndarray, counts: np.ndarray) -> np.ndarray:
    """Per-group minimum of consecutive value runs; empty groups give +inf."""
    n = len(counts)
    out = np.full(n, np.inf)
    if values.size == 0 or n == 0:
        return out
    starts = np.zeros(n, dtype=np.int64)
    np.cumsum(counts[:-1], out=starts[1:])
    padded = np.append(values, np.inf)
    mins = np.minimum.reduceat(padded, starts)
    nonempty = counts > 0
    out[nonempty] = mins[nonempty]
    return out


def _grouped_sum(values: np.ndarray, counts: np.ndarray) -> np.ndarray:
    n = len(counts)
    out = np.zeros(n)
    if values.size == 0 or n == 0:
        return out
    starts = np.zeros(n, dtype=np.int64)
    np.cumsum(counts[:-1], out=starts[1:])
    padded = np.append(values, 0.0)
    sums = np.add.reduceat(padded, starts)
    nonempty = counts > 0
    out[nonempty] = sums[nonempty]
    return out


def _batch_distances(xs: np.ndarray, ys: np.ndarray, point, window: Window) -> np.ndarray:
    dx = np.abs(xs - point[0])
    dy = np.abs(ys - point[1])
    if window.wrap:
        np.minimum(dx, window.width - dx, out=dx)
        np.minimum(dy, window.height - dy, out=dy)
    return np.hypot(dx, dy)


def sample_intensity(spec: EnergyFieldSpec, window: Window, point, n: int,
                     rng: np.random.Generator, chunk: int = 200_000) -> np.ndarray:
    """n independent field realizations evaluated at one location.

    Vectorized across realizations: center counts are drawn per realization,
    positions in bulk, and per-realization reductions done with grouped ufuncs.
    """
    if n <= 0:
        raise ValueError("n must be positive")
    point = np.asarray(point, dtype=float)
    lam_area = spec.lambda_e * window.area
    out = np.empty(n)
    pos = 0
    while pos < n:
        m = min(chunk, n - pos)
        counts = rng.poisson(lam_area, m)
        total = int(counts.sum())
        xs = rng.uniform(0.0, window.width, total)
        ys = rng.uniform(0.0, window.height, total)
        if spec.kernel is Kernel.SHOT_NOISE_EXP:
            acc = np.zeros(total)
            offs = _SHOT_OFFSETS if window.wrap else [(0, 0)]
            for dx, dy in offs:
                ddx = xs + dx * window.width - point[0]
                ddy = ys + dy * window.height - point[1]
                acc += np.exp(-(ddx * ddx + ddy * ddy) / spec.nu)
            out[pos:pos + m] = spec.gamma * _grouped_sum(acc, counts)
        else:
            d = _batch_distances(xs, ys, point, window)
            dmin = _grouped_min(d, counts)
            vals = np.zeros(m)
            finite = np.isfinite(dmin)
            if spec.kernel is Kernel.BOOLEAN_MAX_EXP:
                vals[finite] = spec.gamma * np.exp(-(dmin[finite] ** 2) / spec.nu)
            else:
                vals[finite] = spec.gamma / (1.0 + (dmin[finite] ** 2) / spec.nu)
            out[pos:pos + m] = vals
        pos += m
    return out


def sample_intensity_pair(spec: EnergyFieldSpec, window: Window, p1, p2, n: int,
                          rng: np.random.Generator, chunk: int = 200_000) -> np.ndarray:
    """n realizations of the boolean exponential field at two locations, (n, 2)."""
    if spec.kernel is not Kernel.BOOLEAN_MAX_EXP:
        raise ValueError("pair sampling is implemented for the boolean exponential kernel")
    if n <= 0:
        raise ValueError("n must be positive")
    p1 = np.asarray(p1, dtype=float)
    p2 = np.asarray(p2, dtype=float)
    lam_area = spec.lambda_e * window.area
    out = np.empty((n, 2))
    pos = 0
    while pos < n:
        m = min(chunk, n - pos)
        counts = rng.poisson(lam_area, m)
        total = int(counts.sum())
        xs = rng.uniform(0.0, window.width, total)
        ys = rng.uniform(0.0, window.height, total)
        for col, p in enumerate((p1, p2)):
            d = _batch_distances(xs, ys, p, window)
            dmin = _grouped_min(d, counts)
            vals = np.zeros(m)
            finite = np.isfinite(dmin)
            vals[finite] = spec.gamma * np.exp(-(dmin[finite] ** 2) / spec.nu)
            out[pos:pos + m, col] = vals
        pos += m
    return out


def validation_window(spec: EnergyFieldSpec, n_samples: int, min_side: float | None = None) -> Window:
    """Window large enough that minimal-image truncation of the field law is
    far below the resolution of an n-sample empirical CDF.

    The mass of realizations whose nearest center is beyond half the window
    side is exp(-pi lambda_e (side/2)^2); the side is chosen to push that mass
    below a tenth of the one-percent KS critical value.
    """
    if n_samples <= 0:
        raise ValueError("n_samples must be positive")
    eps = 0.1 * 1.63 / math.sqrt(n_samples)
    side = 2.0 * math.sqrt(math.log(1.0 / eps) / (math.pi * spec.lambda_e))
    side = max(side, 10.0 * math.sqrt(spec.nu), min_side or 0.0)
    return Window(side, side, wrap=True)


def export_raster(real: FieldRealization, path: str, nx: int = 64, ny: int = 64) -> None:
    """Write an (x, y, value) plain-text raster of the field over its window."""
    if nx <= 0 or ny <= 0:
        raise ValueError("raster resolution must be positive")
    w, h = real.window.width, real.window.height
    xs = (np.arange(nx) + 0.5) * (w / nx)
    ys = (np.arange(ny) + 0.5) * (h / ny)
    grid = np.array([[x, y] for y in ys for x in xs])
    vals = field_values(real, grid)
    with open(path, "w", encoding="utf-8") as fh:
        fh.write("# x y value\n")
        for (x, y), v in zip(grid, vals):
            fh.write(f"{x:.8g} {y:.8g} {v:.10g}\n")
