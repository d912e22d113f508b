import itertools

import numpy as np
import pytest
from hypothesis import given, strategies as st

from rsbox.boolfun import (
    AnfParseError,
    AnfPolynomial,
    BooleanFunction,
    anf,
    degree,
    derivative,
    fwht,
    is_balanced,
    is_plateaued,
    mobius,
    nonlinearity,
    parse_anf,
    walsh_spectrum,
    weight,
)
from strategies import boolean_functions


def naive_anf(f: BooleanFunction) -> set[int]:
    # coefficient of x^u is the parity of f over the subcube below u
    out = set()
    for u in range(1 << f.k):
        s = 0
        for x in range(1 << f.k):
            if x & ~u == 0:
                s ^= int(f.tt[x])
        if s:
            out.add(u)
    return out


def naive_walsh(f: BooleanFunction, a: int) -> int:
    return sum((-1) ** (int(f.tt[x]) ^ (bin(a & x).count("1") & 1)) for x in range(1 << f.k))


@given(boolean_functions())
def test_mobius_is_an_involution(f):
    assert np.array_equal(mobius(mobius(f.tt)), f.tt)


@given(boolean_functions(max_k=4))
def test_anf_agrees_with_subcube_sums(f):
    assert set(f.anf.monomials) == naive_anf(f)


@given(boolean_functions())
def test_text_round_trip(f):
    assert anf(str(f), f.k) == f


@given(boolean_functions())
def test_parseval(f):
    w = walsh_spectrum(f).values
    assert int((w.astype(np.int64) ** 2).sum()) == 1 << (2 * f.k)


@given(boolean_functions(max_k=4), st.data())
def test_walsh_matches_direct_sum(f, data):
    a = data.draw(st.integers(0, (1 << f.k) - 1))
    assert walsh_spectrum(f).values[a] == naive_walsh(f, a)


@given(boolean_functions())
def test_fwht_twice_scales(f):
    signs = 1 - 2 * f.tt.astype(np.int64)
    assert np.array_equal(fwht(fwht(signs)), signs << f.k)


@given(boolean_functions(), st.data())
def test_derivative_degree_drops(f, data):
    a = data.draw(st.integers(1, (1 << f.k) - 1))
    d = derivative(f, a)
    assert degree(d) <= max(degree(f) - 1, 0)


def test_canonical_printing():
    assert str(anf("x2*x1+x3+x1", 3)) == "x1+x3+x1*x2"
    assert str(anf("x1x2+x2x1", 2)) == "0"
    assert str(anf("1+x1", 1)) == "1+x1"


def test_juxtaposition_and_duplicates():
    assert anf("x1x3x4+x2", 4) == anf("x2+x1*x3*x4", 4)
    assert parse_anf("x1+x1+x2").monomials == frozenset({0b10})


@pytest.mark.parametrize("text,pos", [("x1+(x2)", 3), ("x1++x2", 3), ("x1+", 3), ("x0", 0), ("x1+y", 3)])
def test_parse_errors_carry_position(text, pos):
    with pytest.raises(AnfParseError) as exc:
        parse_anf(text)
    assert exc.value.position == pos


def test_arity_overflow():
    with pytest.raises(AnfParseError):
        parse_anf("x5", 3)


def test_inferred_arity():
    assert parse_anf("x2+x7").k == 7
    assert parse_anf("1").k == 1


def test_full_degree_monomial_is_unbalanced():
    for k in range(2, 8):
        prod = BooleanFunction(k, [0] * ((1 << k) - 1) + [1])
        assert not is_balanced(prod)
        assert weight(prod) == 1


@given(boolean_functions(min_k=2))
def test_full_degree_means_odd_weight(f):
    assert (degree(f) == f.k) == (weight(f) % 2 == 1)


def test_bent_and_plateaued():
    bent = anf("x1*x2+x3*x4", 4)
    assert nonlinearity(bent) == 6
    assert is_plateaued(bent)
    assert not is_plateaued(anf("x1*x2*x3", 3))


def test_from_int_and_callable():
    f = BooleanFunction.from_callable(3, lambda a, b, c: a ^ (b & c))
    assert f == anf("x1+x2*x3", 3)
    assert BooleanFunction.from_int(3, f.to_int()) == f


def test_extend_keeps_values():
    f = anf("x1+x2*x3", 3)
    g = f.extend(5)
    for x in range(32):
        assert g(x) == f(x & 7)


def test_degree_counts():
    for d in range(4):
        mons = [m for m in range(16) if bin(m).count("1") == d]
        for m in mons:
            assert AnfPolynomial(4, frozenset({m})).degree == d


def test_read_only_truth_table():
    f = anf("x1", 2)
    with pytest.raises(ValueError):
        f.tt[0] = 1


def test_hash_consistency():
    fs = {anf(s, 3) for s in ["x1+x2", "x2+x1", "x1+x2+x3"]}
    assert len(fs) == 2


def test_all_three_variable_degrees():
    degs = [degree(BooleanFunction.from_int(3, v)) for v in range(256)]
    assert sorted(set(degs)) == [0, 1, 2, 3]
    assert sum(d == 3 for d in degs) == 128
    assert list(itertools.islice(degs, 2)) == [0, 3]
