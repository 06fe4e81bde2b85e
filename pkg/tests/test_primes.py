import math

import pytest

from torsionscope import (
    Filtration,
    PrimeReport,
    bad_primes_for_degree,
    bad_primes_for_filtration,
    certify_good_prime,
    close_under_faces,
    simplexwise_filtration,
)
from torsionscope.arith import is_prime, prime_factors
from torsionscope.complexes import SimplicialComplex
from torsionscope.datasets import hollow_triangle, klein_triangulation, moore_space, rp2_triangulation
from torsionscope.homology import boundary_matrix
from torsionscope.snf import smith_normal_form


def triangle_filtration():
    """A point, then the hollow triangle, then the filled one."""
    cpx = close_under_faces([(0, 1, 2)])
    birth = {s: 1.0 for s in cpx}
    birth[(0,)], birth[(0, 1, 2)] = 0.0, 2.0
    return Filtration(cpx, birth, [0.0, 1.0, 2.0])


def test_degree_examples():
    assert bad_primes_for_degree(rp2_triangulation().complex, 1) == {2}
    assert bad_primes_for_degree(hollow_triangle(), 1) == set()
    assert bad_primes_for_degree(klein_triangulation().complex, 1) == {2}
    assert bad_primes_for_degree(moore_space(6).complex, 1) == {2, 3}


def test_trivial_and_triangle_filtrations():
    assert bad_primes_for_filtration(triangle_filtration(), 2).aggregate == []
    filt = simplexwise_filtration(rp2_triangulation().complex)
    rep = bad_primes_for_filtration(filt, 2)
    assert rep.aggregate == [2]
    # only the stage containing every triangle sees the torsion
    assert rep.per_stage[filt.scales[-1], 1] == {2}
    assert all(not ps for (s, _), ps in rep.per_stage.items() if s < filt.scales[-1])


def test_certification_rp2():
    filt = simplexwise_filtration(rp2_triangulation().complex)
    assert certify_good_prime(filt, 3, 2).passed
    cert = certify_good_prime(filt, 2, 2)
    fails = cert.failures
    assert {(f["k"], f["dim_p"], f["betti"]) for f in fails} == {(1, 1, 0), (2, 1, 0)}
    assert {f["scale"] for f in fails} == {filt.scales[-1]}


def test_isolated_vertices_certify_any_prime():
    cpx = SimplicialComplex(4, [(i,) for i in range(4)])
    filt = Filtration(cpx, {s: 0.0 for s in cpx}, [0.0])
    for p in (2, 3, 101, 2**61 - 1):
        assert certify_good_prime(filt, p, 1).passed


def test_soundness_on_corpus(corpus_filtration):
    rep = bad_primes_for_filtration(corpus_filtration, 2)
    for p in (2, 3, 5, 7, 11):
        if p not in rep.aggregate:
            assert certify_good_prime(corpus_filtration, p, 2).passed, p


def test_factor_containment(corpus_complex):
    for k in range(corpus_complex.dim + 1):
        divs = smith_normal_form(boundary_matrix(corpus_complex, k)).divisors
        divs += smith_normal_form(boundary_matrix(corpus_complex, k + 1)).divisors
        for p in bad_primes_for_degree(corpus_complex, k):
            assert any(d % p == 0 for d in divs)


def test_monotone_refinement():
    filt = simplexwise_filtration(moore_space(3).complex)
    full = set(bad_primes_for_filtration(filt, 2).aggregate)
    for cut in (5, 20, len(filt.scales) - 1):
        scales = filt.scales[:cut]
        keep = {s: b for s, b in filt.birth.items() if b <= scales[-1]}
        sub = Filtration(SimplicialComplex(filt.complex.vertex_count, keep), keep, scales)
        assert set(bad_primes_for_filtration(sub, 2).aggregate) <= full
    assert full == {3}


def test_report_round_trip_and_validation():
    rep = bad_primes_for_filtration(simplexwise_filtration(klein_triangulation().complex), 2)
    assert PrimeReport.from_json(rep.to_json()) == rep
    bad = rep.to_json() | {"aggregate": [2, 3]}
    with pytest.raises(ValueError):
        PrimeReport.from_json(bad)


def test_threads_env(monkeypatch):
    monkeypatch.setenv("TORSIONSCOPE_THREADS", "1")
    filt = simplexwise_filtration(rp2_triangulation().complex)
    assert bad_primes_for_filtration(filt, 2).aggregate == [2]


def test_arith():
    assert [n for n in range(30) if is_prime(n)] == [2, 3, 5, 7, 11, 13, 17, 19, 23, 29]
    assert is_prime(2**61 - 1) and not is_prime(2**61 + 1)
    n = (2**31 - 1) * (10**9 + 7) * 12
    assert prime_factors(n) == {2, 3, 2**31 - 1, 10**9 + 7}
    assert math.prod(prime_factors(30)) == 30
    assert prime_factors(1) == set()
    with pytest.raises(ValueError):
        certify_good_prime(triangle_filtration(), 15, 1)
