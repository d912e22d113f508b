import numpy as np
import pytest
from hypothesis import given, strategies as st

from rsbox.boolfun import BooleanFunction, anf
from rsbox.circulant import orbit_profile
from rsbox.constructions import chi, patt
from rsbox.sbox import (
    DimensionError,
    TheoremInapplicable,
    apply,
    cycle_criterion_bijective,
    export_sbox,
    images,
    induce,
    inv_set,
    involution_shift,
    is_bijection,
    is_involution,
    is_shift_invariant_table,
    load_sbox,
    necklace_decomposition,
    rotr,
    shift,
    verify_mutual_inverse,
)
from strategies import rule_and_n


@given(rule_and_n())
def test_table_commutes_with_shift(fn):
    f, n = fn
    F = induce(f, n)
    assert is_shift_invariant_table(F.table, n)


@given(rule_and_n(max_n=7), st.data())
def test_apply_agrees_with_table(fn, data):
    f, n = fn
    x = data.draw(st.integers(0, (1 << n) - 1))
    F = induce(f, n)
    assert apply(F, x) == int(F.table[x])
    assert apply(F, shift(x, n)) == shift(apply(F, x), n)


@given(rule_and_n(max_k=4, max_n=10))
def test_cycle_criterion_matches_occupancy(fn):
    f, n = fn
    F = induce(f, n)
    assert cycle_criterion_bijective(F) == is_bijection(F)


def test_cycle_criterion_on_liftings_up_to_14():
    corpus = [chi(), patt(), anf("x2+x1*x3+x1*x3*x4", 4), anf("x1+x2*x3+x2*x3*x4", 4),
              anf("x1*x2", 2), anf("x1+x2", 2)]
    for f in corpus:
        for n in range(max(f.k, 2), 15):
            F = induce(f, n)
            assert cycle_criterion_bijective(F) == is_bijection(F), (f, n)


def test_cycle_criterion_leaves_table_alone():
    F = induce(chi(), 9)
    cycle_criterion_bijective(F)
    assert not F.is_materialized


@given(rule_and_n(max_k=3, max_n=8))
def test_bijections_preserve_trivial_cycles(fn):
    f, n = fn
    F = induce(f, n)
    if is_bijection(F):
        assert {int(F.table[0]), int(F.table[-1])} == {0, (1 << n) - 1}


def test_divisor_restriction():
    for f in [chi(), patt(), anf("x2+x1*x3+x1*x3*x4", 4), anf("x1+x2*x3+x2*x3*x4", 4)]:
        inv = inv_set(f, 16)
        for n in inv:
            for m in range(f.k, n):
                if n % m == 0:
                    assert m in inv, (f, n, m)


def test_named_examples():
    assert np.array_equal(induce(anf("x1", 1), 6).table, np.arange(64))
    assert is_bijection(induce(chi(), 5))
    assert not is_bijection(induce(chi(), 4))
    assert apply(induce(chi(), 5), 0) == 0
    f = anf("x1+x2*x3+x2*x3*x4", 4)
    assert not is_bijection(induce(f, 6))
    assert is_bijection(induce(f, 7))


def test_inv_set_examples():
    assert inv_set(anf("x2+x1*x3+x1*x3*x4", 4), 12) == {5, 7, 9, 11}
    assert inv_set(anf("x1+x3*x4+x2*x3*x4", 4), 12) == {4, 5, 7, 8, 10, 11}
    assert inv_set(anf("x1", 1), 8) == set(range(1, 9))
    with pytest.raises(DimensionError):
        inv_set(chi(), 21)


def test_necklaces_partition():
    for n in range(1, 13):
        classes = necklace_decomposition(n)
        assert sum(c.length for c in classes) == 1 << n
        seen = sorted(x for c in classes for x in c.members(n))
        assert seen == list(range(1 << n))
        counts: dict[int, int] = {}
        for c in classes:
            counts[c.length] = counts.get(c.length, 0) + 1
        assert counts == orbit_profile(n)
    four = necklace_decomposition(4)
    assert [c.length for c in four] == [1, 1, 2, 4, 4, 4]


def test_batched_images_match_single():
    rng = np.random.default_rng(7)
    tts = rng.integers(0, 2, size=(12, 8), dtype=np.uint8)
    batch = images(tts, 6)
    for row, tt in zip(batch, tts):
        assert np.array_equal(row, induce(BooleanFunction(3, tt), 6).table)


def test_dimension_errors():
    with pytest.raises(DimensionError):
        induce(patt(), 3)
    with pytest.raises(DimensionError):
        induce(anf("x1", 1), 25).table


def test_offset_is_a_shift():
    F, G = induce(chi(), 7), induce(chi(), 7, offset=2)
    x = np.arange(128, dtype=np.uint32)
    assert np.array_equal(G.table, F.table[rotr(x, 2, 7)])


def test_mutual_inverse():
    x1 = anf("x1", 1)
    assert verify_mutual_inverse(x1, x1, 4).shift == 0
    r = verify_mutual_inverse(patt(), patt(), 7)
    assert r.inverse and r.locally_invertible_certificate
    # F o F = S^(-c): the window is not centred on the flipped cell
    assert involution_shift(induce(patt(), 7)) == (-r.shift) % 7
    assert not verify_mutual_inverse(chi(), chi(), 7)
    with pytest.raises(TheoremInapplicable, match="wrap-around"):
        verify_mutual_inverse(patt(), patt(), 6)


def test_involutions():
    assert is_involution(induce(anf("x1", 1), 5))
    assert not is_involution(induce(chi(), 5))


def test_export_round_trip(tmp_path):
    F = induce(chi(), 5)
    path, hdr = export_sbox(F, tmp_path / "chi5.bin")
    header, table = load_sbox(path)
    assert header["n"] == "5" and header["anf"] == "x1+x3+x2*x3"
    assert np.array_equal(table, F.table)
    assert path.stat().st_size == 4 * 32


def test_rotations_compose():
    for n in range(2, 9):
        for x in range(1 << n):
            assert shift(shift(x, n, -1), n) == x
            assert rotr(x, n, n) == x
