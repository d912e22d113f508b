"""k-circulant matrices over F2, their generating polynomials, and counting."""
from __future__ import annotations

import math
from dataclasses import dataclass
from functools import lru_cache

import numpy as np


class SingularMatrixError(ValueError):
    pass


# -- F2[z] arithmetic on Python ints (bit i = coefficient of z^i) -----------

@dataclass(frozen=True)
class F2Polynomial:
    bits: int

    @property
    def degree(self) -> int:
        return self.bits.bit_length() - 1

    def __add__(self, other: F2Polynomial) -> F2Polynomial:
        return F2Polynomial(self.bits ^ other.bits)

    def __mul__(self, other: F2Polynomial) -> F2Polynomial:
        return F2Polynomial(poly_mul(self.bits, other.bits))

    def __mod__(self, other: F2Polynomial) -> F2Polynomial:
        return F2Polynomial(poly_divmod(self.bits, other.bits)[1])

    def __str__(self) -> str:
        if not self.bits:
            return "0"
        terms = []
        for i in range(self.degree + 1):
            if self.bits >> i & 1:
                terms.append("1" if i == 0 else "z" if i == 1 else f"z^{i}")
        return "+".join(terms)


def poly_mul(a: int, b: int) -> int:
    out = 0
    while b:
        if b & 1:
            out ^= a
        a <<= 1
        b >>= 1
    return out


def poly_divmod(a: int, b: int) -> tuple[int, int]:
    if b == 0:
        raise ZeroDivisionError("polynomial division by zero")
    q = 0
    db = b.bit_length()
    while a.bit_length() >= db:
        s = a.bit_length() - db
        q ^= 1 << s
        a ^= b << s
    return q, a


def poly_gcd(a: int, b: int) -> int:
    while b:
        a, b = b, poly_divmod(a, b)[1]
    return a


def poly_egcd(a: int, b: int) -> tuple[int, int, int]:
    """(g, s, t) with s*a + t*b = g = gcd(a, b)."""
    r0, r1, s0, s1, t0, t1 = a, b, 1, 0, 0, 1
    while r1:
        q, r = poly_divmod(r0, r1)
        r0, r1 = r1, r
        s0, s1 = s1, s0 ^ poly_mul(q, s1)
        t0, t1 = t1, t0 ^ poly_mul(q, t1)
    return r0, s0, t0


def poly_inverse_mod(a: int, m: int) -> int:
    g, s, _ = poly_egcd(poly_divmod(a, m)[1], m)
    if g != 1:
        raise SingularMatrixError("polynomial is not a unit modulo z^n - 1")
    return poly_divmod(s, m)[1]


def _rot_vec(v: int, n: int, k: int) -> int:
    """S^k on a row vector stored with entry j at bit j-1."""
    k %= n
    full = (1 << n) - 1
    return ((v << k) | (v >> (n - k))) & full if k else v


def gf2_rank(rows) -> int:
    basis: list[int] = []
    for r in rows:
        for b in basis:
            r = min(r, r ^ b)
        if r:
            basis.append(r)
    return len(basis)


@dataclass(frozen=True)
class CirculantKMatrix:
    """C_k(a_1..a_n): row i+1 is row i shifted right by k positions.

    ``first_row`` stores a_j at bit j-1.
    """

    n: int
    step: int
    first_row: int

    def __post_init__(self):
        if not 1 <= self.step <= self.n:
            raise ValueError(f"step must be in [1, {self.n}]")
        if not 0 <= self.first_row < 1 << self.n:
            raise ValueError("first row wider than n")

    @property
    def rows(self) -> tuple[int, ...]:
        return tuple(_rot_vec(self.first_row, self.n, i * self.step) for i in range(self.n))

    def matrix(self) -> np.ndarray:
        n = self.n
        return np.array([[(r >> j) & 1 for j in range(n)] for r in self.rows], dtype=np.uint8)

    @property
    def polynomial(self) -> F2Polynomial:
        return F2Polynomial(self.first_row)

    def apply(self, x: int) -> int:
        out = 0
        for i, r in enumerate(self.rows):
            out |= (bin(r & x).count("1") & 1) << i
        return out

    def table(self) -> np.ndarray:
        """x -> Ax for every x in F2^n."""
        return linear_table(self.rows, self.n)

    @classmethod
    def identity(cls, n: int) -> CirculantKMatrix:
        return cls(n, 1, 1)


def linear_table(rows, n: int) -> np.ndarray:
    x = np.arange(1 << n, dtype=np.uint32)
    out = np.zeros(1 << n, dtype=np.uint32)
    for i, r in enumerate(rows):
        out |= ((np.bitwise_count(x & np.uint32(r)) & 1).astype(np.uint32)) << np.uint32(i)
    return out


def matrix_from_rows(rows, n: int) -> np.ndarray:
    return np.array([[(r >> j) & 1 for j in range(n)] for r in rows], dtype=np.uint8)


def rows_from_matrix(m: np.ndarray) -> tuple[int, ...]:
    return tuple(int(sum(int(v) << j for j, v in enumerate(row))) for row in m)


def detect_step(rows, n: int) -> int | None:
    """The k with row i+1 = S^k row i for all i, if the rows have that shape."""
    for k in range(1, n + 1):
        if all(rows[(i + 1) % n] == _rot_vec(rows[i], n, k) for i in range(n)) and \
                rows[0] == _rot_vec(rows[n - 1], n, k):
            return k
    return None


def _modulus(n: int) -> int:
    return (1 << n) | 1


def is_invertible(C: CirculantKMatrix) -> bool:
    """gcd(k, n) = 1 and gcd(F(z), z^n - 1) = 1.

    For gcd(k, n) = 1 the rows are a permutation of the circulant rows with
    the same first row, so the polynomial criterion applies unchanged.
    """
    if math.gcd(C.step, C.n) != 1:
        return False
    return poly_gcd(_modulus(C.n), C.first_row) == 1


def is_invertible_by_rank(C: CirculantKMatrix) -> bool:
    return gf2_rank(C.rows) == C.n


def circulant_inverse(C: CirculantKMatrix) -> CirculantKMatrix:
    """Inverse via F*(z) = F(z)^-1 mod z^n - 1.

    For step 1 the inverse is the circulant of F*.  For a k-circulant
    A = P C with P a row permutation, A^-1 = C^-1 P^-1, which is again a
    k'-circulant; its step is read off the product.
    """
    if not is_invertible(C):
        raise SingularMatrixError(f"{C} is singular")
    n = C.n
    inv_row = poly_inverse_mod(C.first_row, _modulus(n))
    if C.step == 1:
        return CirculantKMatrix(n, 1, inv_row)
    cinv = CirculantKMatrix(n, 1, inv_row).matrix()
    # Row i of A is row (i * step mod n) of C.
    p = np.zeros((n, n), dtype=np.uint8)
    for i in range(n):
        p[i, (i * C.step) % n] = 1
    a_inv = (cinv.astype(np.int64) @ p.T.astype(np.int64)) % 2
    rows = rows_from_matrix(a_inv)
    step = detect_step(rows, n)
    if step is None:
        raise AssertionError("inverse of a k-circulant lost its shape")
    return CirculantKMatrix(n, step, rows[0])


def matmul(A: CirculantKMatrix, B: CirculantKMatrix) -> np.ndarray:
    return (A.matrix().astype(np.int64) @ B.matrix().astype(np.int64)) % 2


def invertible_cyclic_matrices(n: int, steps=None) -> list[CirculantKMatrix]:
    """All invertible k-circulant matrices, ordered by (step, first row)."""
    if steps is None:
        steps = [k for k in range(1, n + 1) if math.gcd(k, n) == 1]
    m = _modulus(n)
    units = [r for r in range(1 << n) if poly_gcd(m, r) == 1]
    return [CirculantKMatrix(n, k, r) for k in steps for r in units]


# -- cyclotomic cosets and counts -------------------------------------------

@dataclass(frozen=True)
class CyclotomicCosets:
    modulus: int
    cosets: tuple[tuple[int, ...], ...]

    @property
    def sizes(self) -> list[int]:
        return [len(c) for c in self.cosets]

    @property
    def representatives(self) -> list[int]:
        return [c[0] for c in self.cosets]


def cyclotomic_cosets(n: int, q: int = 2) -> CyclotomicCosets:
    if n < 1 or n % 2 == 0:
        raise ValueError(f"cyclotomic cosets of 2 need an odd modulus, got {n}")
    seen: set[int] = set()
    cosets = []
    for i in range(n):
        if i in seen:
            continue
        c = []
        j = i
        while j not in c:
            c.append(j)
            j = (j * q) % n
        seen.update(c)
        cosets.append(tuple(sorted(c)))
    return CyclotomicCosets(n, tuple(cosets))


@lru_cache(maxsize=None)
def count_invertible_circulant(n: int) -> int:
    """c_n, the number of invertible binary circulant n x n matrices."""
    if n < 1:
        raise ValueError("n must be positive")
    if n % 2:
        return math.prod((1 << s) - 1 for s in cyclotomic_cosets(n).sizes)
    odd = n
    while odd % 2 == 0:
        odd //= 2
    return (1 << (n - odd)) * count_invertible_circulant(odd)


def count_invertible_circulant_bruteforce(n: int) -> int:
    return sum(
        1 for r in range(1 << n)
        if gf2_rank(CirculantKMatrix(n, 1, r).rows) == n
    )


def _mobius(m: int) -> int:
    result, p, x = 1, 2, m
    while p * p <= x:
        if x % p == 0:
            x //= p
            if x % p == 0:
                return 0
            result = -result
        p += 1
    if x > 1:
        result = -result
    return result


def primitive_necklaces(d: int) -> int:
    """Rotation orbits of exact length d on binary words of length d."""
    return sum(_mobius(d // e) * (1 << e) for e in range(1, d + 1) if d % e == 0) // d


def orbit_profile(n: int) -> dict[int, int]:
    """Cycle length -> number of cycles of that length in F2^n."""
    return {d: primitive_necklaces(d) for d in range(1, n + 1) if n % d == 0}


def count_shift_invariant_bijections(n: int) -> int:
    """|C(S)|: product over cycle lengths d of d^N_d * N_d!."""
    return math.prod(d ** t * math.factorial(t) for d, t in orbit_profile(n).items())


def gl_size(n: int) -> int:
    return math.prod((1 << n) - (1 << i) for i in range(n))


def affine_size(n: int) -> int:
    return (1 << n) * gl_size(n)
