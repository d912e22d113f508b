"""Closed-form lifting families: chi, Patt, the (k, k+2) quadratic family and
conserved-landscape rules."""
from __future__ import annotations

from dataclasses import dataclass

from .boolfun import AnfPolynomial, BooleanFunction, anf, tt_from_anf
from .sbox import RSBox, induce


def chi() -> BooleanFunction:
    """x1 + (x2 + 1) x3, the Keccak chi rule."""
    return anf("x1+x3+x2*x3", 3)


def patt() -> BooleanFunction:
    """x2 + x1 (x3 + 1) x4."""
    return anf("x2+x1*x4+x1*x3*x4", 4)


def _check_odd(k: int) -> None:
    if k < 3 or k % 2 == 0:
        raise ValueError(f"k must be odd and at least 3, got {k}")


def k_plus_2_anf(k: int) -> AnfPolynomial:
    _check_odd(k)
    mons: set[int] = set()
    for j in (1, 2, k - 1, k):
        mons ^= {1 << (j - 1)}
    for i in range(1, k - 1):
        mons ^= {(1 << (i - 1)) | (1 << i)}
    return AnfPolynomial(k, frozenset(mons))


def k_plus_2_generator(k: int) -> BooleanFunction:
    """x1 + x2 + x_{k-1} + x_k + sum_{i<=k-2} x_i x_{i+1}; lifts on n = k + 2."""
    return tt_from_anf(k_plus_2_anf(k))


# -- the coordinate-sum reduction behind the (k, k+2) bijectivity ----------

def _rotate_monomial(mask: int, by: int, n: int) -> int:
    """x_j -> x_{j+by} (indices mod n) on a monomial bitmask."""
    full = (1 << n) - 1
    by %= n
    return ((mask << by) | (mask >> (n - by))) & full if by else mask


def coordinate_anf(p: AnfPolynomial, i: int, n: int) -> AnfPolynomial:
    """ANF of the coordinate f_i(x) = f(x_i, .., x_{i+k-1}) on n variables."""
    return AnfPolynomial(n, frozenset(_rotate_monomial(m, i - 1, n) for m in p.monomials))


def reduction_coordinates(k: int) -> list[int]:
    """Coordinates summed in the reduction, by k mod 8 (1-based indices)."""
    _check_odd(k)
    r = k % 8
    if r == 1:
        return [1] + [4 * i for i in range(1, (k - 1) // 4 + 1)]
    if r == 3:
        return [4 * i + 1 for i in range(0, (k - 3) // 4 + 1)]
    if r == 5:
        idx = []
        for i in range(0, (k - 5) // 4 + 1):
            idx += [4 * i + 1, 4 * i + 2, 4 * i + 3]
        return idx + [k, k + 1]
    idx = [1]
    for i in range(0, (k - 3) // 4 + 1):
        idx += [4 * i + 2, 4 * i + 3, 4 * i + 4]
    return idx


def claimed_trinomial(k: int) -> AnfPolynomial:
    """Right-hand side displayed for each k mod 8, on n = k + 2 variables."""
    _check_odd(k)
    n = k + 2
    r = k % 8
    if r in (1, 7):
        a, b, c = k + 2, 1, 2
    elif r == 3:
        a, b, c = k, k + 1, k + 2
    else:
        a, b, c = k - 2, k - 1, k
    return AnfPolynomial(n, frozenset({1 << (a - 1), (1 << (a - 1)) | (1 << (b - 1)), 1 << (c - 1)}))


def reduction_sum(k: int) -> AnfPolynomial:
    """Symbolic F2 sum of the selected coordinates of the (k, k+2) lifting."""
    n = k + 2
    p = k_plus_2_anf(k)
    total = AnfPolynomial(n, frozenset())
    for i in reduction_coordinates(k):
        total = total + coordinate_anf(p, i, n)
    return total


def chi_like_start(q: AnfPolynomial, n: int) -> int | None:
    """The a with q = x_a + x_a x_{a+1} + x_{a+2} (indices mod n), if any."""
    for a in range(1, n + 1):
        t = AnfPolynomial(n, frozenset({
            _rotate_monomial(1, a - 1, n),
            _rotate_monomial(0b11, a - 1, n),
            _rotate_monomial(0b100, a - 1, n),
        }))
        if t == q:
            return a
    return None


def reduction_identity_check(k: int, exact: bool = False) -> bool:
    """Does the coordinate sum for this k collapse to a chi-type trinomial?

    With ``exact=True`` the sum must equal the displayed trinomial verbatim;
    by default any cyclic relabelling x_a + x_a x_{a+1} + x_{a+2} is
    accepted, which is all the bijectivity argument needs.
    """
    total = reduction_sum(k)
    if exact:
        return total == claimed_trinomial(k)
    return chi_like_start(total, k + 2) is not None


# -- landscapes -------------------------------------------------------------

@dataclass(frozen=True)
class Landscape:
    """Pattern over '0', '1', '-', '*' with exactly one '*'.

    Symbol e at a non-star position contributes the factor (x_i + e) to the
    rule x_s + prod (x_i + e_i); '-' positions are left out of the product.
    """

    pattern: str

    def __post_init__(self):
        bad = set(self.pattern) - set("01-*")
        if bad:
            raise ValueError(f"landscape symbols must be 0, 1, -, *; got {sorted(bad)}")
        stars = self.pattern.count("*")
        if stars != 1:
            raise ValueError(f"landscape needs exactly one '*', found {stars}")

    @classmethod
    def parse(cls, text: str) -> Landscape:
        return cls(text.replace("⋆", "*").replace("−", "-").strip())

    @property
    def k(self) -> int:
        return len(self.pattern)

    @property
    def star_index(self) -> int:
        """0-based position of the star."""
        return self.pattern.index("*")

    @property
    def left(self) -> str:
        return self.pattern[:self.star_index]

    @property
    def right(self) -> str:
        return self.pattern[self.star_index + 1:]

    def __str__(self) -> str:
        return self.pattern


def landscape_to_rule(L: Landscape) -> BooleanFunction:
    k = L.k
    s = L.star_index
    # expand prod (x_i + e_i) monomial by monomial
    prod = {0}
    for i, e in enumerate(L.pattern):
        if e in "*-":
            continue
        bit = 1 << i
        nxt: set[int] = set()
        for m in prod:
            nxt ^= {m | bit}
            if e == "1":
                nxt ^= {m}
        prod = nxt
    return tt_from_anf(AnfPolynomial(k, frozenset(prod ^ {1 << s})))


def landscape_sbox(L: Landscape, n: int) -> RSBox:
    """The lifting with its window aligned so that output i flips input i.

    Aligned this way a conserved landscape is literally an involution; the
    plain ``induce(rule, n)`` map is the same thing composed with a shift.
    """
    return induce(landscape_to_rule(L), n, offset=-L.star_index)


def overlap(b: str, shift: int) -> int:
    """Longest run of agreeing positions between b and b shifted right.

    The shifted copy covers positions shift..len-1 of b against 0..len-1-shift.
    """
    if not 1 <= shift < len(b):
        raise ValueError(f"shift must be in [1, {len(b) - 1}]")
    best = run = 0
    for u, v in zip(b[shift:], b[:len(b) - shift]):
        run = run + 1 if u == v else 0
        best = max(best, run)
    return best


def overlap_condition(L: Landscape) -> bool:
    """ov(B2 B1, shift) < min(len B1, len B2) for every shift.

    This is the verbal condition attached to the landscape theorem, taken
    literally with ``overlap``.  It rejects every k = 4 landscape, including
    1*01, so it is kept for reference and not used as the validity test.
    """
    b1, b2 = L.left, L.right
    word = b2 + b1
    bound = min(len(b1), len(b2))
    return all(overlap(word, s) < bound for s in range(1, len(word)))


def _required(L: Landscape) -> list[str | None]:
    # bit that x_i must take for the flip to fire; None = unconstrained
    out: list[str | None] = []
    for e in L.pattern:
        out.append(None if e in "*-" else "0" if e == "1" else "1")
    return out


def is_valid_landscape(L: Landscape) -> bool:
    """No two firing windows can interfere.

    A firing window flips its star cell.  The rule is conserved exactly when
    no placement of two firing windows at distance d (1 <= d < k) is
    consistent while one star lies on a constrained cell of the other window:
    flipping that cell would switch the other window off.
    """
    req = _required(L)
    k, s = L.k, L.star_index
    for d in range(1, k):
        # window A at 0..k-1, window B at d..d+k-1
        consistent = all(
            req[c] is None or req[c - d] is None or req[c] == req[c - d]
            for c in range(d, k)
        )
        if not consistent:
            continue
        b_star_in_a = d + s < k and req[d + s] is not None
        a_star_in_b = s >= d and req[s - d] is not None
        if b_star_in_a or a_star_in_b:
            return False
    return True


def corollary_landscape(k: int) -> Landscape:
    """The explicit families: 1*01 for k = 4, 1^(k-4) 0*01 (k even),
    1^(k-4) 0*10 (k odd) for k >= 5."""
    if k < 4:
        raise ValueError("the landscape families start at k = 4")
    if k == 4:
        return Landscape("1*01")
    tail = "0*01" if k % 2 == 0 else "0*10"
    return Landscape("1" * (k - 4) + tail)
