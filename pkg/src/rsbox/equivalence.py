"""Essential, strong-affine and cyclic equivalence of shift-invariant maps."""
from __future__ import annotations

import itertools
import json
from dataclasses import asdict, dataclass

import numpy as np

from .boolfun import BooleanFunction
from .circulant import (
    CirculantKMatrix,
    detect_step,
    gf2_rank,
    invertible_cyclic_matrices,
    linear_table,
)
from .metrics import inverse_table
from .sbox import RSBox, rotr, shift, table_is_permutation
from .search import essential_images

MAX_EQUIV_N = 8
MAX_INTERTWINER_N = 6


@dataclass(frozen=True)
class EquivalenceWitness:
    """F(Ax + e) = B G(x) + d, with e, d in {0, all-ones}.

    For ``kind == "essential"`` the witness acts on generators instead:
    ``transform`` packs (input complement, reversal, output complement) as
    bits 2, 1, 0 and f = transform(g).
    """

    kind: str
    n: int
    a_step: int = 1
    a_row: int = 1
    b_step: int = 1
    b_row: int = 1
    d: int = 0
    e: int = 0
    transform: int = 0

    @property
    def A(self) -> CirculantKMatrix:
        return CirculantKMatrix(self.n, self.a_step, self.a_row)

    @property
    def B(self) -> CirculantKMatrix:
        return CirculantKMatrix(self.n, self.b_step, self.b_row)

    def replay(self, F, G) -> bool:
        if self.kind == "essential":
            f, g = _generator(F), _generator(G)
            return f.k == g.k and np.array_equal(f.tt, essential_images(g.tt)[self.transform])
        tf, tg = _table(F), _table(G)
        full = (1 << self.n) - 1
        lhs = tf[linear_table(self.A.rows, self.n) ^ np.uint32(full * self.e)]
        rhs = linear_table(self.B.rows, self.n)[tg] ^ np.uint32(full * self.d)
        return bool(np.array_equal(lhs, rhs))

    def to_json(self) -> str:
        return json.dumps(asdict(self), sort_keys=True)


def _table(F) -> np.ndarray:
    return F.table if isinstance(F, RSBox) else np.asarray(F, dtype=np.uint32)


def _generator(F) -> BooleanFunction:
    return F.generator if isinstance(F, RSBox) else F


def _n_of(table: np.ndarray) -> int:
    n = len(table).bit_length() - 1
    if n > MAX_EQUIV_N:
        raise ValueError(f"equivalence search is limited to n <= {MAX_EQUIV_N}")
    return n


# -- essential equivalence ----------------------------------------------------

def essential_orbit(f: BooleanFunction) -> set[BooleanFunction]:
    return {BooleanFunction(f.k, t) for t in essential_images(f.tt)}


def essential_witness(f: BooleanFunction, g: BooleanFunction) -> EquivalenceWitness | None:
    if f.k != g.k:
        return None
    for i, t in enumerate(essential_images(g.tt)):
        if np.array_equal(t, f.tt):
            return EquivalenceWitness("essential", f.k, transform=i)
    return None


# -- the g_b transform ----------------------------------------------------------

def g_b_transform(g: BooleanFunction, b_row: int, d: int = 0) -> BooleanFunction:
    """sum_j b_j g(S^(1-j) x) + d for g on n variables.

    If G is the shift-invariant map with first coordinate g, this is the
    first coordinate of B G(x) + d for the circulant B with first row b_row.
    """
    n = g.k
    x = np.arange(1 << n, dtype=np.uint32)
    out = np.full(1 << n, d & 1, dtype=np.uint8)
    for j in range(n):
        if b_row >> j & 1:
            out ^= g.tt[rotr(x, j, n)]
    return BooleanFunction(n, out)


# -- linear solving helpers --------------------------------------------------------

def _rows_of_linear(mapping: np.ndarray, n: int) -> tuple[int, ...] | None:
    """Rows of the matrix of a table, or None if the table is not linear."""
    if mapping[0] != 0:
        return None
    cols = [int(mapping[1 << j]) for j in range(n)]
    rows = tuple(sum(((cols[j] >> i) & 1) << j for j in range(n)) for i in range(n))
    if not np.array_equal(linear_table(rows, n), mapping):
        return None
    return rows


def _as_cyclic(mapping: np.ndarray, n: int) -> CirculantKMatrix | None:
    rows = _rows_of_linear(mapping, n)
    if rows is None or gf2_rank(rows) != n:
        return None
    step = detect_step(rows, n)
    if step is None:
        return None
    return CirculantKMatrix(n, step, rows[0])


def _matrices(n: int, steps=None) -> list[tuple[CirculantKMatrix, np.ndarray]]:
    return [(m, linear_table(m.rows, n)) for m in invertible_cyclic_matrices(n, steps)]


# -- cyclic and strong-affine equivalence --------------------------------------------

def cyclic_equivalent(F, G) -> EquivalenceWitness | None:
    """Minimal witness in the order (A step, A row, e, B step, B row, d).

    With G bijective, B and d are solved for directly from
    B(y) = F(A G^-1(y) + e) + d.  Otherwise B is searched among cyclic
    matrices of the same step as A: for shift-invariant F and G a k-circulant
    A forces B S = S^k B on the image of G.
    """
    tf, tg = _table(F), _table(G)
    n = _n_of(tf)
    if len(tg) != len(tf):
        return None
    full = np.uint32((1 << n) - 1)
    g_inv = inverse_table(tg) if table_is_permutation(tg) else None
    b_cache: dict[int, list] = {}
    for A, at in _matrices(n):
        for e in (0, 1):
            h = tf[at ^ (full * np.uint32(e))]
            if g_inv is not None:
                d = int(h[g_inv[0]] != 0)
                B = _as_cyclic(h[g_inv] ^ (full * np.uint32(d)), n)
                if B is not None:
                    return EquivalenceWitness("cyclic", n, A.step, A.first_row, B.step, B.first_row, d, e)
                continue
            if A.step not in b_cache:
                b_cache[A.step] = _matrices(n, [A.step])
            for B, bt in b_cache[A.step]:
                for d in (0, 1):
                    if np.array_equal(h, bt[tg] ^ (full * np.uint32(d))):
                        return EquivalenceWitness("cyclic", n, A.step, A.first_row, B.step, B.first_row, d, e)
    return None


def strong_affine_equivalent(F, G) -> EquivalenceWitness | None:
    """F(Ax + e) = G(x) + d with A circulant; a strong affine equivalence
    between shift-invariant bijections forces this shape."""
    tf, tg = _table(F), _table(G)
    n = _n_of(tf)
    full = np.uint32((1 << n) - 1)
    for A, at in _matrices(n, [1]):
        for e in (0, 1):
            h = tf[at ^ (full * np.uint32(e))]
            for d in (0, 1):
                if np.array_equal(h, tg ^ (full * np.uint32(d))):
                    return EquivalenceWitness("strong-affine", n, 1, A.first_row, 1, 1, d, e)
    return None


def class_of_identity(n: int) -> set[bytes]:
    """Tables of all maps strongly affine equivalent to the identity."""
    full = np.uint32((1 << n) - 1)
    out = set()
    x = np.arange(1 << n, dtype=np.uint32)
    for A, at in _matrices(n, [1]):
        a_inv = inverse_table(at)
        for e, d in itertools.product((0, 1), repeat=2):
            # F(Ax + e) = x + d  <=>  F(y) = A^-1(y + e) + d
            out.add((a_inv[x ^ (full * np.uint32(e))] ^ (full * np.uint32(d))).tobytes())
    return out


def shift_invariant_affine_maps(n: int) -> set[bytes]:
    """Brute force over AGL(n, 2): affine bijections commuting with S."""
    x = np.arange(1 << n, dtype=np.uint32)
    sx = shift(x, n)
    out = set()
    for rows in itertools.product(range(1, 1 << n), repeat=n):
        if gf2_rank(rows) != n:
            continue
        lt = linear_table(rows, n)
        for c in range(1 << n):
            t = lt ^ np.uint32(c)
            if np.array_equal(t[sx], shift(t, n)):
                out.add(t.tobytes())
    return out


# -- intertwiners ----------------------------------------------------------------------

def intertwiners(F, all_steps: bool = False) -> list[tuple[CirculantKMatrix, CirculantKMatrix]]:
    """Pairs (A, B) of invertible cyclic matrices with F A = B F.

    By default A and B range over circulant (step 1) matrices; ``all_steps``
    admits every invertible k-circulant.
    """
    tf = _table(F)
    n = len(tf).bit_length() - 1
    if n > MAX_INTERTWINER_N:
        raise ValueError(f"intertwiner search is limited to n <= {MAX_INTERTWINER_N}")
    steps = None if all_steps else [1]
    mats = _matrices(n, steps)
    f_inv = inverse_table(tf) if table_is_permutation(tf) else None
    pairs = []
    for A, at in mats:
        h = tf[at]
        if f_inv is not None:
            B = _as_cyclic(h[f_inv], n)
            if B is not None and (all_steps or B.step == 1):
                pairs.append((A, B))
            continue
        for B, bt in mats:
            if np.array_equal(h, bt[tf]):
                pairs.append((A, B))
    return pairs


def intertwiner_count(F, all_steps: bool = False) -> int:
    return len(intertwiners(F, all_steps))


def compose(A: CirculantKMatrix, B: CirculantKMatrix) -> CirculantKMatrix:
    """The product A B as a cyclic matrix."""
    n = A.n
    prod = linear_table(A.rows, n)[linear_table(B.rows, n)]
    C = _as_cyclic(prod, n)
    if C is None:
        raise AssertionError("product of cyclic matrices lost its shape")
    return C


def is_m_shift_invariant(F, m: int) -> bool:
    """F o S = S^m o F."""
    t = _table(F)
    n = len(t).bit_length() - 1
    x = np.arange(1 << n, dtype=np.uint32)
    return bool(np.array_equal(t[shift(x, n)], shift(t.astype(np.uint32), n, m)))


def apply_witness(G, w: EquivalenceWitness) -> np.ndarray:
    """The F determined by G and a cyclic witness: F(y) = B G(A^-1(y + e)) + d."""
    tg = _table(G)
    n = w.n
    full = np.uint32((1 << n) - 1)
    a_inv = inverse_table(linear_table(w.A.rows, n))
    y = np.arange(1 << n, dtype=np.uint32)
    return linear_table(w.B.rows, n)[tg[a_inv[y ^ (full * np.uint32(w.e))]]] ^ (full * np.uint32(w.d))


# -- affine versus cyclic experiment ------------------------------------------------------

def _affine_group(n: int):
    for rows in itertools.product(range(1, 1 << n), repeat=n):
        if gf2_rank(rows) == n:
            lt = linear_table(rows, n)
            for c in range(1 << n):
                yield lt ^ np.uint32(c)


def affine_equivalent(F, G) -> bool:
    """Exists affine A, B with F A = B G; full AGL(n, 2) scan, n <= 4."""
    tf, tg = _table(F), _table(G)
    n = len(tf).bit_length() - 1
    if n > 4:
        raise ValueError("full affine equivalence is only feasible for n <= 4")
    if not (table_is_permutation(tf) and table_is_permutation(tg)):
        raise ValueError("the affine scan needs bijections")
    g_inv = inverse_table(tg)
    for at in _affine_group(n):
        b = tf[at][g_inv]
        c = b[0]
        if _rows_of_linear(b ^ c, n) is not None:
            return True
    return False


@dataclass(frozen=True)
class AffineCyclicReport:
    pairs: int
    affine: int
    cyclic: int
    affine_not_cyclic: int


def affine_vs_cyclic_experiment(maps, n: int) -> AffineCyclicReport:
    """Compare affine and cyclic equivalence on every pair of the given maps.

    Cyclic implies affine, so only affine-but-not-cyclic pairs are of
    interest; the experiment reports them without drawing conclusions.
    """
    tables = [_table(F) for F in maps]
    aff = cyc = gap = pairs = 0
    for i, j in itertools.combinations(range(len(tables)), 2):
        pairs += 1
        a = affine_equivalent(tables[i], tables[j])
        c = cyclic_equivalent(tables[i], tables[j]) is not None
        aff += a
        cyc += c
        gap += a and not c
    return AffineCyclicReport(pairs, aff, cyc, gap)


def random_cyclic(n: int, rng: np.random.Generator, step: int | None = None) -> CirculantKMatrix:
    mats = invertible_cyclic_matrices(n, None if step is None else [step])
    return mats[int(rng.integers(len(mats)))]

