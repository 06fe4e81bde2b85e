"""Reference triangulations and point-cloud generators."""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .complexes import SimplicialComplex, close_under_faces
from .homology import HomologyGroup
from .metric import MetricSpec, PointCloud, cross_distances, distance

# Antipodal quotient of the icosahedron boundary.
RP2_FACETS = (
    (0, 1, 2), (0, 2, 3), (0, 3, 4), (0, 4, 5), (0, 1, 5),
    (1, 2, 4), (2, 3, 5), (1, 3, 4), (2, 4, 5), (1, 3, 5),
)


def _klein_facets(n: int = 3) -> list[tuple[int, int, int]]:
    # n x n grid on the square; (x, 0) ~ (x, 1) and (0, y) ~ (1, 1 - y)
    def vid(i: int, j: int) -> int:
        if i == n:
            i, j = 0, (n - j) % n
        return i * n + j % n

    out = []
    for i in range(n):
        for j in range(n):
            a, b, c, d = vid(i, j), vid(i + 1, j), vid(i, j + 1), vid(i + 1, j + 1)
            out += [tuple(sorted((a, b, d))), tuple(sorted((a, c, d)))]
    return out


KLEIN_FACETS = tuple(_klein_facets(3))


@dataclass(frozen=True)
class ReferenceComplex:
    name: str
    complex: SimplicialComplex
    expected: dict[int, HomologyGroup]


def rp2_triangulation() -> ReferenceComplex:
    """Six-vertex real projective plane: H0 = Z, H1 = Z/2, H2 = 0."""
    return ReferenceComplex(
        "rp2",
        close_under_faces(RP2_FACETS),
        {0: HomologyGroup(1), 1: HomologyGroup(0, (2,)), 2: HomologyGroup(0)},
    )


def klein_triangulation() -> ReferenceComplex:
    """Nine-vertex Klein bottle from the 3x3 grid: H1 = Z + Z/2."""
    return ReferenceComplex(
        "klein",
        close_under_faces(KLEIN_FACETS),
        {0: HomologyGroup(1), 1: HomologyGroup(1, (2,)), 2: HomologyGroup(0)},
    )


def moore_space(order: int) -> ReferenceComplex:
    """Disk whose boundary wraps ``order`` times around a 3-vertex circle: H1 = Z/order.

    Vertex 0 is the disk center, 1..3m the inner ring, the last three the circle.
    """
    if order < 2:
        raise ValueError("order must be >= 2")
    m = 3 * order
    ring = [1 + i for i in range(m)]
    circ = [1 + m + j for j in range(3)]
    facets = []
    for i in range(m):
        a, b = ring[i], ring[(i + 1) % m]
        facets += [(0, a, b), (a, b, circ[i % 3]), (b, circ[i % 3], circ[(i + 1) % 3])]
    return ReferenceComplex(
        f"moore{order}",
        close_under_faces(facets),
        {0: HomologyGroup(1), 1: HomologyGroup(0, (order,)), 2: HomologyGroup(0)},
    )


def hollow_triangle() -> SimplicialComplex:
    return close_under_faces([(0, 1), (1, 2), (0, 2)])


def full_simplex(n_vertices: int) -> SimplicialComplex:
    return close_under_faces([tuple(range(n_vertices))])


def sphere_boundary(dim: int) -> SimplicialComplex:
    """Boundary of the (dim+1)-simplex, a triangulated dim-sphere."""
    verts = range(dim + 2)
    return close_under_faces([tuple(v for v in verts if v != skip) for skip in verts])


def circle_sample(n_points: int, circumference: float = 1.0) -> PointCloud:
    """Evenly spaced angles on a circle with the geodesic metric."""
    if n_points < 3:
        raise ValueError("circle_sample needs at least 3 points")
    angles = 2 * math.pi * np.arange(n_points) / n_points
    return PointCloud(angles.reshape(-1, 1), MetricSpec.circle(circumference))


def _dedup(points: np.ndarray, metric: MetricSpec, tol: float = 1e-12) -> np.ndarray:
    probe = PointCloud(points, metric)
    keep: list[int] = []
    for i in range(len(points)):
        if all(distance(probe, i, j) > tol for j in keep):
            keep.append(i)
    return points[keep]


def rp2_grid(delta: float) -> tuple[int, np.ndarray]:
    """Labeled grid before identification: base semicircle plus one meridian per base point."""
    if not 0 < delta < math.pi:
        raise ValueError("delta must lie in (0, pi)")
    N = math.ceil(math.pi / delta)
    t = math.pi * np.arange(N + 1) / N
    rows = [np.stack([np.cos(t), np.sin(t), np.zeros_like(t)], axis=1)]
    ez = np.array([0.0, 0.0, 1.0])
    for k in range(N):
        theta = math.pi * k / N
        base = np.array([math.cos(theta), math.sin(theta), 0.0])
        rows.append(np.cos(t)[:, None] * base + np.sin(t)[:, None] * ez)
    return N, np.concatenate(rows)


def rp2_dense_sample(delta: float) -> PointCloud:
    """Delta-dense sample of the projective plane with the quotient sphere metric."""
    metric = MetricSpec("rp2_quotient")
    _, grid = rp2_grid(delta)
    return PointCloud(_dedup(grid, metric), metric)


def klein_lattice(grid: int) -> np.ndarray:
    if grid < 2:
        raise ValueError("grid must be >= 2")
    t = np.linspace(0.0, 1.0, grid)
    X, Y = np.meshgrid(t, t, indexing="ij")
    return np.stack([X.ravel(), Y.ravel()], axis=1)


def klein_sample(grid: int) -> PointCloud:
    """``grid x grid`` lattice on the closed square, identified points merged."""
    metric = MetricSpec("klein_quotient")
    return PointCloud(_dedup(klein_lattice(grid), metric), metric)


def random_cloud(n_points: int, dim: int, seed: int = 0, metric: MetricSpec | None = None) -> PointCloud:
    rng = np.random.default_rng(seed)
    return PointCloud(rng.random((n_points, dim)), metric or MetricSpec.euclidean())


def random_sphere_points(count: int, seed: int = 0) -> np.ndarray:
    rng = np.random.default_rng(seed)
    P = rng.normal(size=(count, 3))
    return P / np.linalg.norm(P, axis=1, keepdims=True)


def hausdorff_probe(cloud: PointCloud, probes: np.ndarray) -> float:
    """Largest distance from a probe point to its nearest sample point."""
    D = cross_distances(cloud.metric, np.asarray(probes, dtype=float), cloud.points)
    return float(D.min(axis=1).max())


DATASETS = {
    "rp2-triangulation": rp2_triangulation,
    "klein-triangulation": klein_triangulation,
}
