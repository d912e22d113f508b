import json

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from rsbox.boolfun import BooleanFunction, anf, tt_from_anf
from rsbox.circulant import count_invertible_circulant, invertible_cyclic_matrices, linear_table
from rsbox.constructions import chi, coordinate_anf
from rsbox.equivalence import (
    EquivalenceWitness,
    affine_vs_cyclic_experiment,
    apply_witness,
    class_of_identity,
    compose,
    cyclic_equivalent,
    essential_orbit,
    essential_witness,
    g_b_transform,
    intertwiner_count,
    intertwiners,
    is_m_shift_invariant,
    shift_invariant_affine_maps,
    strong_affine_equivalent,
)
from rsbox.metrics import metrics_record
from rsbox.sbox import induce, inv_set
from rsbox.search import SearchConstraints, classify_essential, enumerate_liftings


def chi5():
    return induce(chi(), 5)


def test_orbits():
    assert len(essential_orbit(anf("x1+x2+x3", 3))) == 2
    f = chi()
    orbit = essential_orbit(f)
    for g in orbit:
        assert essential_orbit(g) == orbit
    lifters = {anf(s, 3) for s in ["x1+x3+x2*x3", "x1+x2+x2*x3", "x2+x3+x1*x2", "x1+x3+x1*x2"]}
    complemented = {BooleanFunction(3, g.tt ^ g.tt[0]) for g in orbit}
    assert lifters <= complemented


def test_g_b_basics():
    g = chi().extend(5)
    assert g_b_transform(g, 1) == g
    assert g_b_transform(g, 0, 1) == BooleanFunction(5, np.ones(32, dtype=np.uint8))
    expected = tt_from_anf(coordinate_anf(chi().anf, 1, 5) + coordinate_anf(chi().anf, 2, 5))
    assert g_b_transform(g, 0b11) == expected


@settings(max_examples=30)
@given(st.integers(3, 8), st.data())
def test_g_b_is_first_coordinate_of_bg(n, data):
    k = data.draw(st.integers(1, min(n, 4)))
    f = BooleanFunction.from_int(k, data.draw(st.integers(0, (1 << (1 << k)) - 1)))
    b_row = data.draw(st.integers(0, (1 << n) - 1))
    d = data.draw(st.integers(0, 1))
    G = induce(f, n).table
    from rsbox.circulant import CirculantKMatrix
    B = linear_table(CirculantKMatrix(n, 1, b_row).rows, n)
    first = (B[G] & 1) ^ d
    assert np.array_equal(g_b_transform(f.extend(n), b_row, d).tt, first)


def test_cyclic_examples():
    w = cyclic_equivalent(chi5(), chi5())
    assert (w.a_row, w.b_row, w.d, w.e) == (1, 1, 0, 0)
    conj = BooleanFunction(3, chi().tt[np.arange(8) ^ 7])
    G = induce(conj, 5)
    w = cyclic_equivalent(chi5(), G)
    assert w is not None and w.replay(chi5(), G)
    assert cyclic_equivalent(induce(anf("x1", 1), 5), chi5()) is None


def test_cyclic_search_without_bijection():
    F = induce(anf("x1*x2", 2), 4)
    G = induce(anf("x2*x3", 3), 4)
    w = cyclic_equivalent(F, G)
    assert w is not None and w.replay(F, G)


@settings(max_examples=15)
@given(st.data())
def test_constructed_pairs_are_recovered(data):
    n = data.draw(st.sampled_from([5, 7]))
    mats = invertible_cyclic_matrices(n, [1])
    A = mats[data.draw(st.integers(0, len(mats) - 1))]
    e, d = data.draw(st.integers(0, 1)), data.draw(st.integers(0, 1))
    full = np.uint32((1 << n) - 1)
    F = induce(chi(), n).table
    G = F[linear_table(A.rows, n) ^ (full * np.uint32(e))] ^ (full * np.uint32(d))
    w = strong_affine_equivalent(F, G)
    assert w is not None and w.replay(F, G)
    assert cyclic_equivalent(F, G).replay(F, G)


@pytest.mark.parametrize("n", [3, 4])
def test_class_of_identity(n):
    cls = class_of_identity(n)
    assert len(cls) == 2 * count_invertible_circulant(n)
    assert cls == shift_invariant_affine_maps(n)
    x = np.arange(1 << n, dtype=np.uint32)
    for t in list(cls)[:6]:
        assert strong_affine_equivalent(np.frombuffer(t, dtype=np.uint32), x) is not None


def test_intertwiners():
    eye = np.arange(8, dtype=np.uint32)
    assert intertwiner_count(eye) == 3
    assert intertwiner_count(eye, all_steps=True) == 6
    assert intertwiner_count(chi5()) >= 5


def test_intertwiners_form_a_group():
    pairs = intertwiners(chi5(), all_steps=True)
    keys = {((a.step, a.first_row), (b.step, b.first_row)) for a, b in pairs}
    for (a1, b1) in pairs:
        for (a2, b2) in pairs:
            a, b = compose(a1, a2), compose(b1, b2)
            assert ((a.step, a.first_row), (b.step, b.first_row)) in keys


def test_shift_invariance_transfers():
    rng = np.random.default_rng(3)
    n = 7
    G = induce(chi(), n).table
    for step in (1, 2, 3):
        mats = invertible_cyclic_matrices(n, [step])
        for _ in range(4):
            A = mats[rng.integers(len(mats))]
            B = mats[rng.integers(len(mats))]
            w = EquivalenceWitness("cyclic", n, step, A.first_row, step, B.first_row,
                                   int(rng.integers(2)), int(rng.integers(2)))
            F = apply_witness(G, w)
            assert w.replay(F, G)
            for m in range(1, n + 1):
                assert is_m_shift_invariant(F, m) == is_m_shift_invariant(G, m)


def test_essential_classes_share_records():
    reports = enumerate_liftings(SearchConstraints(5, (7,), one_cubic_term=True))
    for members in classify_essential(reports)[:6]:
        records = {metrics_record(induce(r.generator, 7)).as_tuple() for r in members}
        invs = {frozenset(inv_set(r.generator, 11)) for r in members}
        assert len(records) == 1 and len(invs) == 1
        w = essential_witness(members[0].generator, members[-1].generator)
        assert w.replay(members[0].generator, members[-1].generator)


def test_witness_json():
    w = cyclic_equivalent(chi5(), chi5())
    data = json.loads(w.to_json())
    assert data["kind"] == "cyclic" and data["a_step"] == 1


def test_affine_versus_cyclic_harness():
    from rsbox.search import brute_force_liftings
    rules = brute_force_liftings(3, 3, fix_zero=False)
    assert len(rules) == 36
    maps = [induce(f, 3) for f in rules[::5]]
    report = affine_vs_cyclic_experiment(maps, 3)
    assert report.pairs == len(maps) * (len(maps) - 1) // 2
    assert report.cyclic <= report.affine


def test_size_limit():
    with pytest.raises(ValueError):
        cyclic_equivalent(np.arange(512, dtype=np.uint32), np.arange(512, dtype=np.uint32))
