"""Shared corpus and the acceptance summary printed at the end of a run."""

from __future__ import annotations

import numpy as np
import pytest

from torsionscope import PointCloud, build_filtration, build_rips, simplexwise_filtration
from torsionscope.datasets import (
    circle_sample,
    full_simplex,
    hollow_triangle,
    klein_triangulation,
    moore_space,
    random_cloud,
    rp2_triangulation,
    sphere_boundary,
)

_RESULTS: list[tuple[int, str, str, float, float]] = []


def _cech_corpus() -> list:
    """Random Euclidean Čech filtrations, three seeds in each of the plane and space."""
    out = []
    for n in (2, 3):
        for seed in range(3):
            cloud = random_cloud(8, n, seed=seed)
            diam = cloud.distance_matrix().max()
            scales = [diam * t for t in (0.1, 0.2, 0.3, 0.45, 0.6)]
            out.append((f"cech-n{n}-s{seed}", build_filtration(cloud, scales, flavor="cech", method="meb")))
    return out


def corpus_complexes() -> list:
    items = [
        ("rp2", rp2_triangulation().complex),
        ("klein", klein_triangulation().complex),
        ("moore3", moore_space(3).complex),
        ("moore4", moore_space(4).complex),
        ("hollow-triangle", hollow_triangle()),
        ("simplex4", full_simplex(5)),
        ("sphere2", sphere_boundary(2)),
        ("sphere3", sphere_boundary(3)),
        ("circle12-r03", build_rips(circle_sample(12), 0.3)),
        ("circle16-r037", build_rips(circle_sample(16), 0.37, max_dim=4)),
    ]
    for seed in range(2):
        items.append((f"rips-s{seed}", build_rips(random_cloud(9, 2, seed=seed), 0.45, max_dim=4)))
    for name, filt in _cech_corpus():
        items.append((name, filt.stage(filt.scales[2])))
    return items


def corpus_filtrations() -> list:
    items = [
        ("rp2", simplexwise_filtration(rp2_triangulation().complex)),
        ("klein", simplexwise_filtration(klein_triangulation().complex)),
        ("moore3", simplexwise_filtration(moore_space(3).complex)),
        ("circle12", build_filtration(circle_sample(12), [0.05, 0.1, 0.2, 0.3, 0.4], max_dim=3)),
    ]
    return items + _cech_corpus()


_COMPLEXES = corpus_complexes()
_FILTRATIONS = corpus_filtrations()


@pytest.fixture(params=_COMPLEXES, ids=[n for n, _ in _COMPLEXES])
def corpus_complex(request):
    return request.param[1]


@pytest.fixture(params=_FILTRATIONS, ids=[n for n, _ in _FILTRATIONS])
def corpus_filtration(request):
    return request.param[1]


@pytest.fixture
def rng():
    return np.random.default_rng(20240611)


@pytest.fixture
def planar_cloud():
    return PointCloud(np.array([[0.0, 0.0], [1.0, 0.0], [0.5, np.sqrt(3) / 2], [2.0, 2.0]]))


def pytest_runtest_makereport(item, call):
    marker = item.get_closest_marker("acceptance")
    if marker is None or call.when != "call":
        return
    number, name, limit = marker.args
    status = "PASS" if call.excinfo is None else "FAIL"
    _RESULTS.append((number, name, status, call.duration, limit))


def pytest_terminal_summary(terminalreporter):
    if not _RESULTS:
        return
    terminalreporter.section("acceptance criteria")
    for number, name, status, took, limit in sorted(_RESULTS):
        terminalreporter.write_line(f"[{status}] criterion {number:2d} {name}: {took:.2f} s (limit {limit:g} s)")
