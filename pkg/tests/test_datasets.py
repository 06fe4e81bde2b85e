import math

import numpy as np
import pytest

from torsionscope import FieldSpec, PointCloud, build_rips, integer_homology
from torsionscope.datasets import (
    DATASETS,
    RP2_FACETS,
    circle_sample,
    hausdorff_probe,
    klein_lattice,
    klein_sample,
    klein_triangulation,
    moore_space,
    random_sphere_points,
    rp2_dense_sample,
    rp2_grid,
    rp2_triangulation,
)
from torsionscope.homology import field_betti
from torsionscope.metric import MetricSpec

Z2 = FieldSpec.prime(2)


@pytest.mark.parametrize("ref", [rp2_triangulation(), klein_triangulation(), moore_space(3), moore_space(4)], ids=str)
def test_expected_tables(ref):
    for k, want in ref.expected.items():
        assert integer_homology(ref.complex, k) == want


def test_facet_counts():
    rp2 = rp2_triangulation().complex
    assert len(RP2_FACETS) == 10 and rp2.f_vector == (6, 15, 10) and rp2.euler_characteristic == 1
    klein = klein_triangulation().complex
    assert klein.euler_characteristic == 0
    # closed surface: every edge lies in exactly two triangles
    for cpx in (rp2, klein):
        counts = {e: 0 for e in cpx.simplices(1)}
        for t in cpx.simplices(2):
            for e in ((t[0], t[1]), (t[0], t[2]), (t[1], t[2])):
                counts[e] += 1
        assert set(counts.values()) == {2}


def test_klein_field_betti():
    cpx = klein_triangulation().complex
    assert field_betti(cpx, FieldSpec.rationals()) == (1, 1, 0)
    assert field_betti(cpx, Z2) == (1, 2, 1)


def test_circle_sample_distances():
    cloud = circle_sample(12)
    D = cloud.distance_matrix()
    assert np.allclose(D * 12, np.round(D * 12), atol=1e-12)
    assert build_rips(cloud, 0.2).count(1) == 24
    assert field_betti(build_rips(cloud, 0.2), Z2, 1) == (1, 1)
    below = build_rips(cloud, 1 / 12 - 1e-9)
    assert below.count(1) == 0 and field_betti(below, Z2, 0) == (12,)
    with pytest.raises(ValueError):
        circle_sample(2)


# r is kept away from multiples of 1/N, where rounding decides ties
@pytest.mark.parametrize("n_points", [16, 20, 24])
@pytest.mark.parametrize("l,r", [(0, 0.27), (1, 0.39)])
def test_circle_sphere_patterns(n_points, l, r):
    assert l / (2 * l + 1) < math.floor(r * n_points) / n_points < (l + 1) / (2 * l + 3)
    cpx = build_rips(circle_sample(n_points), r, max_dim=2 * l + 3)
    betti = field_betti(cpx, Z2, 2 * l + 2)
    assert betti[0] == 1
    assert betti[2 * l + 1] == 1
    assert all(betti[j] == 0 for j in range(1, 2 * l + 3) if j != 2 * l + 1)


def test_circle_pattern_follows_the_sampled_ratio():
    # 0.35 lies in (1/3, 2/5), but with 16 points only 5 neighbours qualify and 5/16 < 1/3
    cpx = build_rips(circle_sample(16), 0.35, max_dim=5)
    assert field_betti(cpx, Z2, 4) == (1, 1, 0, 0, 0)


def test_rp2_grid_counts():
    N, grid = rp2_grid(math.pi / 4)
    assert N == 4 and len(grid) <= (N + 1) ** 2
    assert np.allclose(np.linalg.norm(grid, axis=1), 1.0)
    assert len(rp2_dense_sample(math.pi / 4)) <= len(grid)
    with pytest.raises(ValueError):
        rp2_grid(4.0)


def test_rp2_sample_is_deduplicated():
    cloud = rp2_dense_sample(0.5)
    D = cloud.distance_matrix()
    np.fill_diagonal(D, np.inf)
    assert D.min() > 1e-9
    x = cloud.points[3]
    both = PointCloud(np.stack([x, -x]), MetricSpec(kind="rp2_quotient"))
    assert both.distance(0, 1) == pytest.approx(0.0, abs=1e-12)


@pytest.mark.parametrize("delta", [0.3, 0.5])
def test_rp2_density_probe(delta):
    cloud = rp2_dense_sample(delta)
    assert hausdorff_probe(cloud, random_sphere_points(1000, seed=11)) <= delta * (1 + 1e-6)


def test_klein_lattice_and_sample():
    assert len(klein_lattice(4)) == 16
    cloud = klein_sample(4)
    assert len(cloud) <= 12
    D = cloud.distance_matrix()
    np.fill_diagonal(D, np.inf)
    assert D.min() > 1e-9
    with pytest.raises(ValueError):
        klein_sample(1)


def test_registry():
    assert set(DATASETS) >= {"rp2-triangulation", "klein-triangulation"}
    assert DATASETS["rp2-triangulation"]().name == "rp2"
