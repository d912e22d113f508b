"""Rotation-symmetric S-boxes induced by a k-variable rule on n bits."""
from __future__ import annotations

import functools
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from .boolfun import BooleanFunction, format_anf

MAX_TABLE_N = 24
INV_SET_MAX = 20


class DimensionError(ValueError):
    pass


class TheoremInapplicable(ValueError):
    pass


def rotr(x, i: int, n: int):
    """Rotate n-bit words right by i: bit i becomes bit 0."""
    i %= n
    if i == 0:
        return x
    full = (1 << n) - 1
    return ((x >> i) | (x << (n - i))) & full


def shift(x, n: int, times: int = 1):
    """The cyclic right shift S on coordinates, S(x_1..x_n) = (x_n, x_1, ..)."""
    return rotr(x, -times, n)


@functools.lru_cache(maxsize=64)
def _windows(n: int, k: int, offset: int = 0) -> tuple:
    x = np.arange(1 << n, dtype=np.uint32)
    mask = np.uint32((1 << k) - 1)
    return tuple(np.asarray(rotr(x, i + offset, n) & mask) for i in range(n))


def images(tts: np.ndarray, n: int, offset: int = 0) -> np.ndarray:
    """Permutation tables for a batch of rules, shape (..., 2^k) -> (..., 2^n).

    Coordinate i (0-based) reads bits i+offset .. i+offset+k-1, cyclically.
    """
    tts = np.asarray(tts, dtype=np.uint8)
    k = tts.shape[-1].bit_length() - 1
    if k > n:
        raise DimensionError(f"rule arity {k} exceeds dimension {n}")
    if n > MAX_TABLE_N:
        raise DimensionError(f"n={n} exceeds the materialisation limit {MAX_TABLE_N}")
    out = np.zeros(tts.shape[:-1] + (1 << n,), dtype=np.uint32)
    for i, w in enumerate(_windows(n, k, offset)):
        out |= tts[..., w].astype(np.uint32) << np.uint32(i)
    return out


class RSBox:
    """Shift-invariant map on F2^n whose coordinate i is f(x_i, .., x_{i+k-1}).

    A nonzero ``offset`` w reads f(x_{i+w}, ..); that is F composed with a
    power of the shift, which changes none of the invariants computed here
    but decides whether a conserved-landscape map is literally an involution.
    """

    __slots__ = ("n", "generator", "offset", "_table")

    def __init__(self, generator: BooleanFunction, n: int, offset: int = 0):
        if generator.k > n:
            raise DimensionError(f"rule arity {generator.k} exceeds dimension {n}")
        self.n = n
        self.generator = generator
        self.offset = offset % n
        self._table = None

    @property
    def k(self) -> int:
        return self.generator.k

    @property
    def table(self) -> np.ndarray:
        if self._table is None:
            t = images(self.generator.tt, self.n, self.offset)
            t.setflags(write=False)
            self._table = t
        return self._table

    @property
    def is_materialized(self) -> bool:
        return self._table is not None

    def __call__(self, x: int) -> int:
        return apply(self, x)

    def __repr__(self) -> str:
        extra = f", offset={self.offset}" if self.offset else ""
        return f"RSBox(n={self.n}, f={format_anf(self.generator.anf)!r}{extra})"


def induce(f: BooleanFunction, n: int, offset: int = 0) -> RSBox:
    return RSBox(f, n, offset)


def apply(F: RSBox, x: int) -> int:
    n, k, tt = F.n, F.k, F.generator.tt
    if not 0 <= x < 1 << n:
        raise ValueError(f"{x} is not an {n}-bit word")
    mask = (1 << k) - 1
    out = 0
    for i in range(n):
        out |= int(tt[rotr(x, i + F.offset, n) & mask]) << i
    return out


def table_is_permutation(table: np.ndarray) -> bool:
    seen = np.zeros(table.shape[-1], dtype=bool)
    seen[table] = True
    return bool(seen.all())


def rows_are_permutations(tables: np.ndarray) -> np.ndarray:
    """Bijectivity of each row of a (C, 2^n) batch of tables."""
    c, size = tables.shape
    seen = np.zeros((c, size), dtype=bool)
    seen[np.arange(c)[:, None], tables] = True
    return seen.all(axis=1)


def is_bijection(F: RSBox) -> bool:
    return table_is_permutation(F.table)


def is_involution(F: RSBox) -> bool:
    t = F.table
    return bool(np.array_equal(t[t], np.arange(1 << F.n, dtype=t.dtype)))


def involution_shift(F: RSBox) -> int | None:
    """The c with F o F = S^c if there is one (c = 0 is an involution)."""
    t = F.table
    x = np.arange(1 << F.n, dtype=np.uint32)
    tt = t[t]
    for c in range(F.n):
        if np.array_equal(tt, shift(x, F.n, c)):
            return c
    return None


@dataclass(frozen=True, order=True)
class NecklaceClass:
    length: int
    representative: int

    def members(self, n: int) -> list[int]:
        return sorted({rotr(self.representative, i, n) for i in range(self.length)})


def necklace_labels(n: int) -> tuple[np.ndarray, np.ndarray]:
    """Per word: the minimal rotation (as integer) and the cycle length."""
    if n > MAX_TABLE_N:
        raise DimensionError(f"n={n} too large")
    x = np.arange(1 << n, dtype=np.uint32)
    rep = x.copy()
    for i in range(1, n):
        np.minimum(rep, rotr(x, i, n), out=rep)
    length = np.zeros(1 << n, dtype=np.int64)
    for d in sorted(d for d in range(1, n + 1) if n % d == 0):
        hit = (length == 0) & (rotr(x, d, n) == x)
        length[hit] = d
    return rep, length


def necklace_decomposition(n: int) -> list[NecklaceClass]:
    rep, length = necklace_labels(n)
    reps = np.flatnonzero(rep == np.arange(1 << n))
    return sorted(NecklaceClass(int(length[r]), int(r)) for r in reps)


def cycle_criterion_bijective(F: RSBox) -> bool:
    """Bijectivity via the induced map on necklace classes.

    Only the class representatives are evaluated (window by window), so this
    does not touch ``F.table``.
    """
    n = F.n
    rep_of, length_of = necklace_labels(n)
    reps = np.flatnonzero(rep_of == np.arange(1 << n)).astype(np.uint32)
    mask = (1 << F.k) - 1
    tt = F.generator.tt
    img = np.zeros(len(reps), dtype=np.uint32)
    for i in range(n):
        img |= tt[rotr(reps, i + F.offset, n) & mask].astype(np.uint32) << np.uint32(i)
    img_rep = rep_of[img]
    if not np.array_equal(length_of[img], length_of[reps]):
        return False
    return len(np.unique(img_rep)) == len(reps)


def inv_set(f: BooleanFunction, m: int, cap: int = INV_SET_MAX) -> set[int]:
    """Dimensions n in [k, m] on which f induces a bijection."""
    if m > cap:
        raise DimensionError(f"m={m} exceeds the inv_set cap {cap}")
    return {n for n in range(max(f.k, 1), m + 1) if is_bijection(induce(f, n))}


@dataclass(frozen=True)
class MutualInverseResult:
    inverse: bool
    locally_invertible_certificate: bool
    shift: int | None = None

    def __bool__(self) -> bool:
        return self.inverse


def verify_mutual_inverse(f: BooleanFunction, g: BooleanFunction, n: int) -> MutualInverseResult:
    """Check that the maps induced by f and g invert each other on F2^n.

    The test is (G o F)_1(x) = x_{1+c}: with zero window offsets the
    composition can only be the identity up to a shift S^-c, and c is
    reported in ``shift``.  Since g(f(x_1..x_k), ..) reads k + l - 1
    consecutive inputs, k + l <= n + 1 means no wrap-around and a positive
    answer certifies both rules as locally invertible.
    """
    if f.k + g.k > n + 1:
        raise TheoremInapplicable("wrap-around: theorem inapplicable")
    F = induce(f, n).table
    first = g.tt[F & np.uint32((1 << g.k) - 1)]
    x = np.arange(1 << n)
    for c in range(f.k + g.k - 1):
        if np.array_equal(first, ((x >> c) & 1).astype(np.uint8)):
            return MutualInverseResult(True, True, c)
    return MutualInverseResult(False, False, None)


def is_shift_invariant_table(table: np.ndarray, n: int, step: int = 1) -> bool:
    """F o S == S^step o F on every input."""
    x = np.arange(1 << n, dtype=np.uint32)
    return bool(np.array_equal(table[shift(x, n)], shift(table.astype(np.uint32), n, step)))


def export_sbox(F: RSBox, path) -> tuple[Path, Path]:
    """Write the table as little-endian uint32 words plus a text header."""
    path = Path(path)
    path.write_bytes(F.table.astype("<u4").tobytes())
    header = path.with_name(path.name + ".hdr")
    header.write_text(
        f"k\t{F.k}\nn\t{F.n}\noffset\t{F.offset}\nanf\t{format_anf(F.generator.anf)}\n"
    )
    return path, header


def load_sbox(path) -> tuple[dict, np.ndarray]:
    path = Path(path)
    header = {}
    for line in path.with_name(path.name + ".hdr").read_text().splitlines():
        key, _, value = line.partition("\t")
        header[key] = value
    table = np.frombuffer(path.read_bytes(), dtype="<u4")
    if len(table) != 1 << int(header["n"]):
        raise ValueError("table length does not match header")
    return header, table
