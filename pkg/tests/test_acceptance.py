"""Acceptance criteria, one test each; a PASS/FAIL line per criterion is printed.

Run alone with ``pytest tests/test_acceptance.py -s`` to also see the
per-criterion detail lines as they complete.
"""

from __future__ import annotations

import json
import subprocess
import sys
import time

import numpy as np
import pytest
from conftest import corpus_complexes

from torsionscope import (
    FieldSpec,
    IntegerMatrix,
    MetricSpec,
    PointCloud,
    build_cech,
    build_filtration,
    build_rips,
    compare_barcodes,
    elementary_divisors_via_minors,
    field_homology,
    integer_homology,
    persistent_homology,
    simplexwise_filtration,
    smith_normal_form,
)
from torsionscope.cli import main
from torsionscope.datasets import circle_sample, klein_triangulation, rp2_triangulation
from torsionscope.homology import HomologyGroup, uct_check
from torsionscope.obstruction import all_empty_simplices, rips_representability, verify_vanishing
from torsionscope.primes import bad_primes_for_degree, bad_primes_for_filtration
from torsionscope.snf import determinant

Q = FieldSpec.rationals()
Z = {p: FieldSpec.prime(p) for p in (2, 3, 5, 7)}


class Clock:
    def __init__(self, limit: float) -> None:
        self.limit = limit
        self.start = time.perf_counter()

    def check(self, label: str, detail: str = "") -> None:
        took = time.perf_counter() - self.start
        print(f"\n  {label}: {took:.2f} s {detail}")
        assert took < self.limit, f"{label} took {took:.2f} s, limit {self.limit} s"


def _betti(cpx, fld, top):
    return tuple(field_homology(cpx, k, fld) for k in range(top + 1))


@pytest.mark.acceptance(1, "snf oracle equivalence", 10)
def test_snf_oracle_equivalence():
    clock = Clock(10)
    rng = np.random.default_rng(1)
    for case in range(1000):
        r, c = rng.integers(1, 7, size=2)
        A = IntegerMatrix.from_dense(rng.integers(-2, 3, size=(r, c)).tolist())
        res = smith_normal_form(A, want_transforms=case % 2 == 0)
        assert list(res.divisors) == elementary_divisors_via_minors(A), A.to_dense()
        if res.U is not None:
            assert res.U @ A @ res.V == res.diagonal(r, c)
            assert abs(determinant(res.U.to_dense())) == 1 == abs(determinant(res.V.to_dense()))
    clock.check("snf", "1000 matrices")


@pytest.mark.acceptance(2, "RP2 golden", 1)
def test_rp2_golden():
    clock = Clock(1)
    cpx = rp2_triangulation().complex
    assert [integer_homology(cpx, k) for k in range(3)] == [
        HomologyGroup(1),
        HomologyGroup(0, (2,)),
        HomologyGroup(0),
    ]
    assert _betti(cpx, Q, 2) == (1, 0, 0)
    assert _betti(cpx, Z[2], 2) == (1, 1, 1)
    assert _betti(cpx, Z[3], 2) == (1, 0, 0)
    assert bad_primes_for_degree(cpx, 1) == {2}
    clock.check("rp2")


@pytest.mark.acceptance(3, "Klein golden", 1)
def test_klein_golden():
    clock = Clock(1)
    cpx = klein_triangulation().complex
    assert integer_homology(cpx, 1) == HomologyGroup(1, (2,))
    assert _betti(cpx, Z[2], 2) == (1, 2, 1)
    rep = bad_primes_for_filtration(simplexwise_filtration(cpx), max_k=2)
    assert rep.aggregate == [2]
    clock.check("klein")


@pytest.mark.acceptance(4, "UCT identity on corpus", 30)
def test_uct_identity():
    clock = Clock(30)
    checked = 0
    for name, cpx in corpus_complexes():
        cache: dict = {}
        for k in range(cpx.dim + 1):
            for p in (2, 3, 5, 7):
                rep = uct_check(cpx, k, p, cache)
                assert rep.consistent, (name, rep)
                checked += 1
    clock.check("uct", f"{checked} (complex, k, p) cases")


@pytest.mark.acceptance(5, "good-prime barcode agreement", 10)
def test_good_prime_barcodes():
    clock = Clock(10)
    for ref in (rp2_triangulation, klein_triangulation):
        filt = simplexwise_filtration(ref().complex)
        bq = persistent_homology(filt, Q, max_k=2)
        for p in (3, 5, 7):
            assert compare_barcodes(bq, persistent_homology(filt, Z[p], max_k=2)).empty, (ref.__name__, p)
        diff = compare_barcodes(bq, persistent_homology(filt, Z[2], max_k=2))
        assert not diff.empty, ref.__name__
        print(f"\n  {ref.__name__}: Z2 differs in dims {diff.dimensions}")
    clock.check("barcodes")


@pytest.mark.acceptance(6, "Rips/Čech sandwich", 60)
def test_sandwich():
    clock = Clock(60)
    rng = np.random.default_rng(6)
    violations = 0
    for _ in range(50):
        n_pts, dim = int(rng.integers(4, 13)), int(rng.choice([2, 3]))
        cloud = PointCloud(rng.random((n_pts, dim)))
        diam = cloud.distance_matrix().max()
        for eps in np.sort(rng.uniform(0.05, 0.7, size=5)) * diam:
            lo = build_rips(cloud, eps).simplex_set
            mid = build_cech(cloud, eps, method="meb").simplex_set
            hi = build_rips(cloud, 2 * eps).simplex_set
            violations += len(lo - mid) + len(mid - hi)
    assert violations == 0
    clock.check("sandwich", "250 (cloud, scale) pairs")


@pytest.mark.acceptance(7, "Helly vanishing", 120)
def test_helly_vanishing():
    clock = Clock(120)
    rng = np.random.default_rng(7)
    homology_bad, witnesses = 0, 0
    for _ in range(20):
        cloud = PointCloud(rng.random((int(rng.integers(5, 13)), 2)))
        diam = cloud.distance_matrix().max()
        scales = list(np.linspace(0.05, 0.7, 8) * diam)
        # uncapped, so a missing top simplex is never mistaken for a witness
        filt = build_filtration(cloud, scales, flavor="cech", method="meb")
        rep = verify_vanishing(filt, 2, 4)
        homology_bad += len(rep.violations)
        for eps, stage in filt.stages():
            for k in (3, 4):
                assert stage.count(k) == 0 or field_homology(stage, k, Q) == 0
            witnesses += len(all_empty_simplices(stage, 3))
    assert homology_bad == 0 and witnesses == 0
    clock.check("helly", "20 clouds x 8 scales")


@pytest.mark.acceptance(8, "Rips flag property", 30)
def test_rips_flag():
    clock = Clock(30)
    rng = np.random.default_rng(8)
    for i in range(100):
        dim = int(rng.integers(2, 4))
        if i % 2:
            b = rng.normal(size=dim)
            metric = MetricSpec.randers(0.9 * rng.random() * b / np.linalg.norm(b))
        else:
            metric = MetricSpec.euclidean()
        cloud = PointCloud(rng.random((int(rng.integers(5, 13)), dim)), metric)
        D = cloud.distance_matrix()
        cpx = build_rips(cloud, float(np.quantile(D[D > 0], rng.uniform(0.2, 0.8))))
        rep = rips_representability(cpx)
        assert rep.verdict == "FLAG" and not rep.witnesses
    clock.check("flag", "100 complexes, half Randers")


@pytest.mark.acceptance(9, "circle sphere pattern", 120)
def test_circle_spheres():
    clock = Clock(120)
    cloud = circle_sample(20)
    s1 = _betti(build_rips(cloud, 0.25, max_dim=5), Z[2], 4)
    s3 = _betti(build_rips(cloud, 0.37, max_dim=5), Z[2], 4)
    assert s1[1:4] == (1, 0, 0)
    assert s3[1:4] == (0, 0, 1)
    clock.check("circle", f"r=0.25 -> {s1}, r=0.37 -> {s3}")


def _cli(tmp_path, name, *argv):
    out = tmp_path / name
    code = main([*argv, "--out", str(out)])
    return code, out.read_bytes()


@pytest.mark.acceptance(10, "CLI determinism and round-trip", 10)
def test_cli_determinism_and_round_trip(tmp_path):
    from torsionscope import Barcode, Filtration, SimplicialComplex, io
    from torsionscope.primes import PrimeReport
    from torsionscope.snf import SNFResult

    clock = Clock(10)
    steps = [
        ("cloud.json", "generate", "--dataset", "random-cloud", "--n-points", "9", "--seed", "3"),
        ("filt.json", "build", "--in", "{cloud.json}", "--scales", "0.2,0.35,0.5,0.7", "--max-dim", "3"),
        ("cech.json", "build", "--in", "{cloud.json}", "--flavor", "cech", "--epsilon", "0.3"),
        ("rp2.json", "generate", "--dataset", "rp2-filtration"),
        ("primes.json", "primes", "--in", "{rp2.json}", "--max-k", "2"),
        ("bq.json", "persist", "--in", "{rp2.json}", "--max-k", "2"),
        ("b3.json", "persist", "--in", "{rp2.json}", "--max-k", "2", "--field", "zp", "--prime", "3"),
        ("cmp.json", "compare", "{bq.json}", "{b3.json}"),
        ("hom.json", "homology", "--in", "{rp2.json}", "--k", "1"),
        ("obs.json", "obstruct", "--in", "{filt.json}"),
    ]
    runs = []
    for rep in range(2):
        d = tmp_path / f"run{rep}"
        d.mkdir()
        outputs = {}
        for name, *argv in steps:
            argv = [str(d / a[1:-1]) if a.startswith("{") else a for a in argv]
            code, outputs[name] = _cli(d, name, *argv)
            assert code == 0, (name, code)
        runs.append(outputs)
    assert runs[0] == runs[1]

    mat = tmp_path / "m.json"
    mat.write_text(json.dumps([[2, 4, 4], [-6, 6, 12], [10, -4, -16]]))
    first = [_cli(tmp_path, f"snf{i}.json", "snf", "--in", str(mat), "--transforms")[1] for i in range(2)]
    assert first[0] == first[1]

    # a separate interpreter must agree byte for byte
    proc = subprocess.run(
        [sys.executable, "-m", "torsionscope", "persist", "--in", str(tmp_path / "run0" / "rp2.json"), "--max-k", "2"],
        capture_output=True,
        check=True,
    )
    assert proc.stdout == runs[0]["bq.json"]

    d = tmp_path / "run0"
    parsers = {
        "cloud.json": io.read_cloud,
        "filt.json": io.read_filtration,
        "cech.json": io.read_complex,
        "rp2.json": io.read_filtration,
        "bq.json": io.read_barcode,
    }
    for name, parse in parsers.items():
        value = parse(d / name)
        assert io.dumps(value.to_json()).encode() == runs[0][name], name
        assert parse_again(value) == value, name
    assert PrimeReport.from_json(io.read(d / "primes.json")).to_json() == _strip(io.read(d / "primes.json"))
    snf_obj = io.read(tmp_path / "snf0.json")
    assert SNFResult.from_json(snf_obj).to_json() == _strip(snf_obj)
    assert isinstance(io.read_complex(d / "rp2.json"), SimplicialComplex)
    assert isinstance(io.read_filtration(d / "filt.json"), Filtration)
    assert isinstance(io.read_barcode(d / "b3.json"), Barcode)
    clock.check("cli", f"{2 * len(steps) + 3} invocations")


def _strip(obj):
    return {k: v for k, v in obj.items() if k != "format_version"}


def parse_again(value):
    return type(value).from_json(json.loads(json.dumps(value.to_json())))
