"""Single-output Boolean functions: truth tables, ANF, Walsh spectra.

Bit convention used everywhere in the package: the input (x_1, ..., x_k)
is the integer sum(x_j << (j - 1)), so x_1 is the least significant bit.
"""
from __future__ import annotations

import re
from dataclasses import dataclass
from typing import Callable, Iterable

import numpy as np

MAX_ARITY = 24


class AnfParseError(ValueError):
    """Raised on malformed ANF text; ``position`` is the 0-based offset."""

    def __init__(self, message: str, position: int):
        super().__init__(f"{message} at position {position}")
        self.position = position


def _freeze(arr: np.ndarray) -> np.ndarray:
    arr.setflags(write=False)
    return arr


def mobius(tt: np.ndarray) -> np.ndarray:
    """Binary Moebius transform over the last axis (an involution)."""
    a = np.array(tt, dtype=np.uint8, copy=True)
    size = a.shape[-1]
    k = size.bit_length() - 1
    lead = a.shape[:-1]
    for i in range(k):
        h = 1 << i
        v = a.reshape(lead + (size // (2 * h), 2, h))
        v[..., 1, :] ^= v[..., 0, :]
    return a


def fwht(values: np.ndarray) -> np.ndarray:
    """Unnormalised Walsh-Hadamard butterfly over the last axis."""
    a = np.array(values, dtype=np.int64, copy=True)
    size = a.shape[-1]
    lead = a.shape[:-1]
    h = 1
    while h < size:
        v = a.reshape(lead + (size // (2 * h), 2, h))
        lo = v[..., 0, :].copy()
        hi = v[..., 1, :]
        v[..., 0, :] = lo + hi
        v[..., 1, :] = lo - hi
        h *= 2
    return a


def _monomial_key(mask: int) -> tuple[int, tuple[int, ...]]:
    idx = tuple(j + 1 for j in range(mask.bit_length()) if mask >> j & 1)
    return len(idx), idx


@dataclass(frozen=True)
class AnfPolynomial:
    """A polynomial over F2 as a set of monomial bitmasks (0 is the constant 1)."""

    k: int
    monomials: frozenset

    def __post_init__(self):
        object.__setattr__(self, "monomials", frozenset(int(m) for m in self.monomials))
        bad = [m for m in self.monomials if m < 0 or m >> self.k]
        if bad:
            raise ValueError(f"monomial masks {bad} exceed arity {self.k}")

    def __add__(self, other: AnfPolynomial) -> AnfPolynomial:
        return AnfPolynomial(max(self.k, other.k), self.monomials ^ other.monomials)

    def sorted_monomials(self) -> list[int]:
        return sorted(self.monomials, key=_monomial_key)

    @property
    def degree(self) -> int:
        return max((bin(m).count("1") for m in self.monomials), default=0)

    def __str__(self) -> str:
        return format_anf(self)

    def __repr__(self) -> str:
        return f"AnfPolynomial(k={self.k}, {format_anf(self)!r})"


class BooleanFunction:
    """A k-variable Boolean function held as its 2^k truth table."""

    __slots__ = ("k", "tt", "_anf")

    def __init__(self, k: int, tt):
        if not 0 <= k <= MAX_ARITY:
            raise ValueError(f"arity must be in [0, {MAX_ARITY}], got {k}")
        arr = np.asarray(tt, dtype=np.uint8) & 1
        if arr.shape != (1 << k,):
            raise ValueError(f"truth table must have length {1 << k}, got {arr.shape}")
        self.k = k
        self.tt = _freeze(np.ascontiguousarray(arr))
        self._anf = None

    @classmethod
    def from_int(cls, k: int, value: int) -> BooleanFunction:
        bits = [(value >> i) & 1 for i in range(1 << k)]
        return cls(k, bits)

    @classmethod
    def from_callable(cls, k: int, func: Callable[..., int]) -> BooleanFunction:
        tt = [func(*((i >> j) & 1 for j in range(k))) & 1 for i in range(1 << k)]
        return cls(k, tt)

    @classmethod
    def parse(cls, text: str, k: int | None = None) -> BooleanFunction:
        return tt_from_anf(parse_anf(text, k))

    def to_int(self) -> int:
        return int.from_bytes(np.packbits(self.tt, bitorder="little").tobytes(), "little")

    @property
    def anf(self) -> AnfPolynomial:
        if self._anf is None:
            self._anf = anf_from_tt(self)
        return self._anf

    def extend(self, n: int) -> BooleanFunction:
        """The same rule seen as a function of n >= k variables."""
        if n < self.k:
            raise ValueError("cannot shrink arity")
        idx = np.arange(1 << n) & ((1 << self.k) - 1)
        return BooleanFunction(n, self.tt[idx])

    def __call__(self, x: int) -> int:
        return int(self.tt[x])

    def __eq__(self, other) -> bool:
        if not isinstance(other, BooleanFunction):
            return NotImplemented
        return self.k == other.k and np.array_equal(self.tt, other.tt)

    def __hash__(self) -> int:
        return hash((self.k, self.tt.tobytes()))

    def __repr__(self) -> str:
        return f"BooleanFunction(k={self.k}, {format_anf(self.anf)!r})"

    def __str__(self) -> str:
        return format_anf(self.anf)


@dataclass(frozen=True)
class WalshSpectrum:
    k: int
    values: np.ndarray

    @property
    def max_abs(self) -> int:
        return int(np.abs(self.values).max())


def anf_from_tt(f: BooleanFunction) -> AnfPolynomial:
    coeffs = mobius(f.tt)
    return AnfPolynomial(f.k, frozenset(np.flatnonzero(coeffs).tolist()))


def tt_from_anf(p: AnfPolynomial) -> BooleanFunction:
    coeffs = np.zeros(1 << p.k, dtype=np.uint8)
    if p.monomials:
        coeffs[list(p.monomials)] = 1
    return BooleanFunction(p.k, mobius(coeffs))


def degree(f: BooleanFunction) -> int:
    return f.anf.degree


def weight(f: BooleanFunction) -> int:
    return int(f.tt.sum(dtype=np.int64))


def is_balanced(f: BooleanFunction) -> bool:
    return f.k > 0 and 2 * weight(f) == 1 << f.k


def walsh_spectrum(f: BooleanFunction) -> WalshSpectrum:
    return WalshSpectrum(f.k, _freeze(fwht(1 - 2 * f.tt.astype(np.int64))))


def nonlinearity(f: BooleanFunction) -> int:
    return ((1 << f.k) - walsh_spectrum(f).max_abs) // 2


def derivative(f: BooleanFunction, a: int) -> BooleanFunction:
    if not 0 <= a < 1 << f.k:
        raise ValueError(f"point {a} outside F2^{f.k}")
    x = np.arange(1 << f.k)
    return BooleanFunction(f.k, f.tt[x ^ a] ^ f.tt)


def spectrum_is_plateaued(values: np.ndarray) -> bool:
    mags = np.unique(np.abs(values))
    mags = mags[mags != 0]
    return len(mags) <= 1


def is_plateaued(f: BooleanFunction) -> bool:
    return spectrum_is_plateaued(walsh_spectrum(f).values)


# -- ANF text format ---------------------------------------------------------

_TOKEN = re.compile(r"\s*(?:(x)(\d+)|(1)(?!\d)|(0)(?!\d)|([+*])|(\()|(\)))")


def format_anf(p: AnfPolynomial) -> str:
    if not p.monomials:
        return "0"
    terms = []
    for m in p.sorted_monomials():
        if m == 0:
            terms.append("1")
        else:
            terms.append("*".join(f"x{j}" for j in _monomial_key(m)[1]))
    return "+".join(terms)


def parse_anf(text: str, k: int | None = None) -> AnfPolynomial:
    """Parse "x1+x3+x1*x2"-style text; juxtaposed "x1x2" is accepted too.

    The arity defaults to the largest variable index that appears.
    """
    terms: list[list[int]] = []
    current: list[int] = []
    expect_factor = True
    pos = 0
    text = text.strip()
    if not text:
        raise AnfParseError("empty polynomial", 0)
    while pos < len(text):
        m = _TOKEN.match(text, pos)
        if m is None:
            raise AnfParseError(f"unexpected character {text[pos]!r}", pos)
        var, idx, one, zero, op = m.group(1), m.group(2), m.group(3), m.group(4), m.group(5)
        start = m.start(0) + len(m.group(0)) - len(m.group(0).lstrip())
        if m.group(6) or m.group(7):
            raise AnfParseError("parentheses are not supported", start)
        if op:
            if expect_factor:
                raise AnfParseError(f"operator {op!r} without operand", start)
            if op == "+":
                terms.append(current)
                current = []
            expect_factor = True
        else:
            if var:
                j = int(idx)
                if j < 1:
                    raise AnfParseError("variables are numbered from x1", start)
                current.append(j)
            elif one:
                current.append(0)
            else:
                current.append(-1)
            expect_factor = False
        pos = m.end(0)
    if expect_factor:
        raise AnfParseError("polynomial ends with an operator", len(text))
    terms.append(current)

    top = max((j for t in terms for j in t), default=0)
    if k is None:
        k = max(top, 1)
    elif top > k:
        raise AnfParseError(f"variable x{top} exceeds arity {k}", text.find(f"x{top}"))
    monomials: set[int] = set()
    for t in terms:
        if -1 in t:
            continue
        mask = 0
        for j in t:
            if j > 0:
                mask |= 1 << (j - 1)
        monomials ^= {mask}
    return AnfPolynomial(k, frozenset(monomials))


def anf(text: str, k: int | None = None) -> BooleanFunction:
    """Shorthand: BooleanFunction from ANF text."""
    return BooleanFunction.parse(text, k)


def monomials_of_degree(k: int, d: int) -> Iterable[int]:
    return (m for m in range(1 << k) if bin(m).count("1") == d)
