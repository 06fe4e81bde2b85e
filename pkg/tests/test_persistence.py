import itertools
import json
import math
import random

import pytest

from torsionscope import (
    Barcode,
    FieldSpec,
    Filtration,
    SimplicialComplex,
    bad_primes_for_filtration,
    close_under_faces,
    compare_barcodes,
    field_homology,
    persistent_homology,
    rank_invariant,
    simplexwise_filtration,
)
from torsionscope import _kernels
from torsionscope.complexes import faces
from torsionscope.datasets import klein_triangulation, rp2_triangulation

Q = FieldSpec.rationals()
INF = math.inf


def triangle_filtration():
    cpx = close_under_faces([(0, 1, 2)])
    return Filtration(cpx, {s: float(len(s) - 1) for s in cpx}, [0.0, 1.0, 2.0])


@pytest.mark.parametrize("fld", [Q, FieldSpec.prime(2), FieldSpec.prime(3)], ids=str)
def test_triangle_barcode(fld):
    bc = persistent_homology(triangle_filtration(), fld, max_k=1)
    assert bc.dimension(0) == [(0.0, 1.0), (0.0, 1.0), (0.0, INF)]
    assert bc.dimension(1) == [(1.0, 2.0)]


def test_single_vertex():
    cpx = SimplicialComplex(1, [(0,)])
    bc = persistent_homology(Filtration(cpx, {(0,): 0.5}, [0.5]), Q)
    assert bc.intervals == ((0, 0.5, INF),)


def test_rank_invariant_examples():
    bc = persistent_homology(triangle_filtration(), Q)
    assert rank_invariant(bc, 1, 1.0, 1.5) == 1
    assert rank_invariant(bc, 1, 1.0, 2.0) == 0
    assert rank_invariant(bc, 0, 1.0, 1.0) == field_homology(triangle_filtration().stage(1.0), 0, Q)
    with pytest.raises(ValueError):
        rank_invariant(bc, 0, 2.0, 1.0)


def test_rp2_z2_differs_in_dims_1_and_2():
    filt = simplexwise_filtration(rp2_triangulation().complex)
    bq = persistent_homology(filt, Q, max_k=2)
    b2 = persistent_homology(filt, FieldSpec.prime(2), max_k=2)
    b3 = persistent_homology(filt, FieldSpec.prime(3), max_k=2)
    assert compare_barcodes(bq, b3).empty
    diff = compare_barcodes(bq, b2)
    assert diff.dimensions == [1, 2]
    last = filt.scales[-1]
    # the final triangle kills a Q-cycle, but over Z/2 it closes a 2-cycle instead
    assert list(diff.only_a) == [(1, diff.only_b[0][1], last)]
    assert diff.only_b == ((1, diff.only_a[0][1], INF), (2, last, INF))


def test_stage_consistency(corpus_filtration):
    for fld in (Q, FieldSpec.prime(2)):
        bc = persistent_homology(corpus_filtration, fld, max_k=2)
        for eps, stage in corpus_filtration.stages():
            for k in range(3):
                assert bc.betti_at(k, eps) == field_homology(stage, k, fld), (fld, eps, k)


def test_good_prime_barcode_equality(corpus_filtration):
    bad = bad_primes_for_filtration(corpus_filtration, 2).aggregate
    bq = persistent_homology(corpus_filtration, Q, max_k=2)
    for p in (2, 3, 5, 7, 11):
        if p not in bad:
            assert compare_barcodes(bq, persistent_homology(corpus_filtration, FieldSpec.prime(p), max_k=2)).empty


def _block_shuffled(filt, seed):
    rnd = random.Random(seed)
    out = []
    for _, block in itertools.groupby(filt.order(), key=lambda s: (filt.birth[s], len(s))):
        block = list(block)
        rnd.shuffle(block)
        out += block
    return out


@pytest.mark.parametrize("seed", range(5))
def test_tie_break_does_not_matter(corpus_filtration, seed):
    fld = FieldSpec.prime(3)
    ref = persistent_homology(corpus_filtration, fld, max_k=2)
    shuffled = _block_shuffled(corpus_filtration, seed)
    corpus_filtration.order = lambda: shuffled
    try:
        assert persistent_homology(corpus_filtration, fld, max_k=2) == ref
    finally:
        del corpus_filtration.order


def test_vertex_relabelling_keeps_barcode():
    filt = simplexwise_filtration(klein_triangulation().complex)
    perm = list(range(filt.complex.vertex_count))
    random.Random(2).shuffle(perm)
    birth = {tuple(sorted(perm[v] for v in s)): b for s, b in filt.birth.items()}
    relabelled = Filtration(SimplicialComplex(filt.complex.vertex_count, birth), birth, filt.scales)
    for fld in (Q, FieldSpec.prime(2)):
        assert persistent_homology(relabelled, fld, 2) == persistent_homology(filt, fld, 2)


def test_reduced_columns_are_cycles_of_boundaries(corpus_filtration):
    """Each reduced column is a combination of boundaries, so its own boundary is zero mod p."""
    p = 5
    order = corpus_filtration.order()
    pos = {s: i for i, s in enumerate(order)}
    indptr, indices, data = [0], [], []
    for s in order:
        if len(s) > 1:
            for i, f in enumerate(faces(s)):
                indices.append(pos[f])
                data.append(-1 if i % 2 else 1)
        indptr.append(len(indices))
    low, cols = _kernels.reduce_columns(indptr, indices, data, len(order), p, return_columns=True)
    for j, col in enumerate(cols):
        assert (low[j] < 0) == (not col)
        if col:
            assert max(col) == low[j] and col[low[j]] == 1
        image: dict[int, int] = {}
        for r, v in col.items():
            for a in range(indptr[r], indptr[r + 1]):
                image[indices[a]] = (image.get(indices[a], 0) + v * data[a]) % p
        assert not any(image.values())


def test_determinism_and_json(corpus_filtration):
    a = persistent_homology(corpus_filtration, Q, max_k=2)
    b = persistent_homology(corpus_filtration, Q, max_k=2)
    assert json.dumps(a.to_json()) == json.dumps(b.to_json())
    again = Barcode.from_json(json.loads(json.dumps(a.to_json())))
    assert again == a and again.field == a.field


def test_zero_length_pairs_kept_apart():
    cpx = close_under_faces([(0, 1, 2)])
    filt = Filtration(cpx, {s: 0.0 for s in cpx}, [0.0])
    bc = persistent_homology(filt, Q, max_k=1)
    assert bc.intervals == ((0, 0.0, INF),)
    assert len(bc.zero_length) == 3


def test_text_and_bare_list():
    bc = persistent_homology(triangle_filtration(), Q)
    assert bc.to_text().splitlines()[-1] == "H1 [1, 2)"
    bare = [{"k": 0, "birth": 0, "death": "inf"}]
    assert Barcode.from_json(bare).intervals == ((0, 0.0, INF),)


def test_negative_max_k():
    with pytest.raises(ValueError):
        persistent_homology(triangle_filtration(), Q, max_k=-1)
