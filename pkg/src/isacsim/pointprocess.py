"""Spatial point-process samplers on a disk (optionally with a central hole).

The workhorse model is an inhomogeneous Poisson process whose density
decays radially as exp(-beta*r); beta=0 recovers the homogeneous case.
The base density is always renormalized so the expected point count stays
at a configured target regardless of beta and hole radius.  Homogeneous
PPP, Matern type-II hardcore and Thomas cluster samplers are provided for
alternative deployment geometries.

All samplers are pure functions of their parameters and an explicit
numpy Generator: a fixed seed reproduces the point set bit for bit.
"""

import math
from dataclasses import dataclass, field

import numpy as np

from . import kernels


@dataclass(frozen=True)
class DiskRegion:
    """Circular deployment region, optionally with a central exclusion hole.

    The hole radius is measured in horizontal projection, not 3-D distance.
    """

    radius: float
    hole_radius: float = 0.0
    center_x: float = 0.0
    center_y: float = 0.0

    def __post_init__(self):
        if not self.radius > 0:
            raise ValueError("region radius must be positive")
        if not 0 <= self.hole_radius <= self.radius:
            raise ValueError("hole radius must satisfy 0 <= hole_radius <= radius")

    @property
    def area(self) -> float:
        """Area of the annulus between hole_radius and radius."""
        return math.pi * (self.radius ** 2 - self.hole_radius ** 2)


@dataclass(frozen=True)
class RpdiParams:
    """Parameters of the radially decaying deployment model.

    beta is the non-homogeneity (1/m): density proportional to exp(-beta*r).
    The base density is scaled so the expected count equals
    target_mean_count on the region.
    """

    beta: float
    target_mean_count: float
    region: DiskRegion

    def __post_init__(self):
        if self.beta < 0:
            raise ValueError("beta must be >= 0")
        if not self.target_mean_count > 0:
            raise ValueError("target_mean_count must be positive")


@dataclass
class PointSet:
    """Planar points drawn from one sampler call; z is attached downstream."""

    points: np.ndarray  # shape (n, 2)
    region: DiskRegion = field(default_factory=lambda: DiskRegion(1.0))

    def __len__(self) -> int:
        return len(self.points)

    def center_distances(self) -> np.ndarray:
        dx = self.points[:, 0] - self.region.center_x
        dy = self.points[:, 1] - self.region.center_y
        return np.hypot(dx, dy)


def _radial_mass(beta: float, r: float) -> float:
    # integral of s*exp(-beta*s) ds from 0 to r, scaled by beta^2 for beta>0
    return math.exp(-beta * r) * (1.0 + beta * r)


def normalize_density(params: RpdiParams) -> float:
    """Base density (1/m^2) so the region's expected count hits the target.

    Solves lambda0 * integral_{h}^{R} 2*pi*r*exp(-beta*r) dr = target.
    """
    region = params.region
    h, R = region.hole_radius, region.radius
    if h >= R:
        raise ValueError("degenerate region: hole radius equals region radius")
    if params.beta == 0.0:
        integral = (R ** 2 - h ** 2) / 2.0
    else:
        b = params.beta
        integral = (_radial_mass(b, h) - _radial_mass(b, R)) / (b * b)
    return params.target_mean_count / (2.0 * math.pi * integral)


def radial_cdf(params: RpdiParams, r) -> np.ndarray:
    """Analytic CDF of the radial coordinate on [hole_radius, radius]."""
    region = params.region
    h, R = region.hole_radius, region.radius
    r = np.asarray(r, dtype=np.float64)
    if params.beta == 0.0:
        num = r ** 2 - h ** 2
        den = R ** 2 - h ** 2
    else:
        b = params.beta
        g = lambda x: np.exp(-b * x) * (1.0 + b * x)
        num = g(h) - g(r)
        den = g(h) - g(R)
    return np.clip(num / den, 0.0, 1.0)


def _sample_radial(params: RpdiParams, rng: np.random.Generator) -> PointSet:
    region = params.region
    normalize_density(params)  # raises on a degenerate region
    n = rng.poisson(params.target_mean_count)
    u = rng.random(n)
    r = kernels.radial_inverse_cdf(u, params.beta, region.hole_radius, region.radius)
    theta = rng.uniform(0.0, 2.0 * math.pi, n)
    pts = np.column_stack((region.center_x + r * np.cos(theta),
                           region.center_y + r * np.sin(theta)))
    return PointSet(points=pts, region=region)


def sample_rpdi(params: RpdiParams, rng: np.random.Generator) -> PointSet:
    """Draw one realization of the radial-decay model (no hole)."""
    if params.region.hole_radius != 0.0:
        raise ValueError("sample_rpdi requires hole_radius = 0; use sample_php")
    return _sample_radial(params, rng)


def sample_php(params: RpdiParams, rng: np.random.Generator) -> PointSet:
    """Draw one realization with the central hole excluded.

    Realized by restricting the radial support to [hole_radius, radius]
    (exact, no thinning); the expected count stays at the target because
    the base density is renormalized over the annulus.
    """
    return _sample_radial(params, rng)


def sample_ppp_disk(density: float, region: DiskRegion,
                    rng: np.random.Generator) -> PointSet:
    """Homogeneous PPP of the given density, uniform on the region."""
    if density < 0:
        raise ValueError("density must be >= 0")
    n = rng.poisson(density * region.area)
    u = rng.random(n)
    r = np.sqrt(region.hole_radius ** 2
                + u * (region.radius ** 2 - region.hole_radius ** 2))
    theta = rng.uniform(0.0, 2.0 * math.pi, n)
    pts = np.column_stack((region.center_x + r * np.cos(theta),
                           region.center_y + r * np.sin(theta)))
    return PointSet(points=pts, region=region)


def sample_mhcpp(parent_density: float, hardcore_distance: float,
                 region: DiskRegion, rng: np.random.Generator) -> PointSet:
    """Matern type-II hardcore process.

    Parents come from a homogeneous PPP; each gets an independent uniform
    mark and survives iff no other parent within the hardcore distance has
    a smaller mark.  All pairwise distances in the output are >= the
    hardcore distance.
    """
    if hardcore_distance < 0:
        raise ValueError("hardcore_distance must be >= 0")
    parents = sample_ppp_disk(parent_density, region, rng)
    n = len(parents)
    marks = rng.random(n)
    if hardcore_distance == 0.0 or n < 2:
        return PointSet(points=parents.points, region=region)
    diff = parents.points[:, None, :] - parents.points[None, :, :]
    dist2 = np.einsum("ijk,ijk->ij", diff, diff)
    close = dist2 < hardcore_distance ** 2
    np.fill_diagonal(close, False)
    beaten = close & (marks[None, :] < marks[:, None])
    keep = ~beaten.any(axis=1)
    return PointSet(points=parents.points[keep], region=region)


def sample_thomas_pcp(parent_density: float, mean_offspring: float,
                      cluster_std: float, region: DiskRegion,
                      rng: np.random.Generator) -> PointSet:
    """Thomas cluster process: Gaussian clusters around PPP parents.

    Children falling outside the region (or inside its hole) are discarded.
    """
    if parent_density < 0 or mean_offspring < 0 or cluster_std < 0:
        raise ValueError("Thomas process parameters must be >= 0")
    parents = sample_ppp_disk(parent_density, region, rng)
    counts = rng.poisson(mean_offspring, len(parents))
    total = int(counts.sum())
    centers = np.repeat(parents.points, counts, axis=0)
    offsets = rng.normal(0.0, cluster_std, (total, 2)) if cluster_std > 0 \
        else np.zeros((total, 2))
    pts = centers + offsets
    dx = pts[:, 0] - region.center_x
    dy = pts[:, 1] - region.center_y
    rad2 = dx * dx + dy * dy
    keep = (rad2 <= region.radius ** 2) & (rad2 >= region.hole_radius ** 2)
    return PointSet(points=pts[keep], region=region)
