"""Shared hypothesis strategies."""
import numpy as np
from hypothesis import strategies as st

from rsbox.boolfun import BooleanFunction


@st.composite
def boolean_functions(draw, min_k=1, max_k=6):
    k = draw(st.integers(min_k, max_k))
    bits = draw(st.lists(st.integers(0, 1), min_size=1 << k, max_size=1 << k))
    return BooleanFunction(k, np.array(bits, dtype=np.uint8))


@st.composite
def rule_and_n(draw, max_k=4, max_n=9):
    f = draw(boolean_functions(1, max_k))
    n = draw(st.integers(max(f.k, 2), max_n))
    return f, n
