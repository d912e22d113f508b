"""Exhaustive enumeration of (k, n)-liftings with block-balance pruning, and
classification under essential equivalence."""
from __future__ import annotations

import itertools
import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from pathlib import Path
from typing import Callable, Iterable, Sequence

import numpy as np

from .boolfun import BooleanFunction, mobius
from .sbox import images, rows_are_permutations

MAX_SEARCH_N = 20
MAX_BLOCK_T = 8
_CELLS = 1 << 23  # table entries materialised per bijectivity batch


class SearchBudgetExceeded(RuntimeError):
    """Raised when a budget runs out; carries the partial reports."""

    def __init__(self, partial: list, resume_token: int):
        super().__init__(f"budget exhausted; resume from candidate {resume_token}")
        self.partial = partial
        self.resume_token = resume_token


@dataclass(frozen=True)
class SearchConstraints:
    k: int
    n_list: tuple[int, ...]
    fix_zero: bool = True
    max_degree: int | None = None
    require_odd_terms: bool = True
    quadratic_only: bool = False
    one_cubic_term: bool = False
    allow_full_k5: bool = False

    def __post_init__(self):
        object.__setattr__(self, "n_list", tuple(sorted(set(self.n_list))))
        if not self.n_list:
            raise ValueError("n_list is empty")
        if self.k < 1 or self.k > min(self.n_list):
            raise ValueError(f"need 1 <= k <= min(n_list), got k={self.k}")
        if max(self.n_list) > MAX_SEARCH_N:
            raise ValueError(f"n above {MAX_SEARCH_N} is not supported")
        if self.k > 6:
            raise ValueError("searches are limited to k <= 6")

    @property
    def shaped(self) -> bool:
        return (self.quadratic_only or self.one_cubic_term
                or (self.max_degree is not None and self.max_degree <= 2))


@dataclass
class LiftingReport:
    generator: BooleanFunction
    inv: tuple[int, ...]
    class_id: int | None = None
    metrics: dict = field(default_factory=dict)

    @property
    def anf(self) -> str:
        return str(self.generator)


# -- candidate filters ------------------------------------------------------

def _anf_degrees(k: int) -> np.ndarray:
    return np.array([bin(m).count("1") for m in range(1 << k)])


def filter_mask(tts: np.ndarray, c: SearchConstraints) -> np.ndarray:
    """Vectorised candidate filter over a (C, 2^k) batch of truth tables."""
    k = c.k
    size = 1 << k
    ok = tts.sum(axis=1, dtype=np.int64) == size // 2
    if c.fix_zero:
        ok &= tts[:, 0] == 0
    if c.require_odd_terms:
        # a bijection swaps or fixes the two trivial cycles, so f(1..1) != f(0..0)
        ok &= tts[:, -1] != tts[:, 0]
    if not ok.any():
        return ok
    coeffs = mobius(tts[ok])
    degs = _anf_degrees(k)
    top = np.where(coeffs.astype(bool), degs[None, :], -1).max(axis=1)
    sub = np.ones(len(coeffs), dtype=bool)
    if k >= 2:
        sub &= top < k
    if c.max_degree is not None:
        sub &= top <= c.max_degree
    if c.quadratic_only:
        sub &= top == 2
    if c.one_cubic_term:
        sub &= (coeffs[:, degs == 3].sum(axis=1) == 1) & (top == 3)
    ok[np.flatnonzero(ok)] = sub
    return ok


def candidate_filter(f: BooleanFunction, c: SearchConstraints) -> bool:
    if f.k != c.k:
        raise ValueError("arity mismatch")
    return bool(filter_mask(f.tt[None, :], c)[0])


def _block_values(tts: np.ndarray, k: int, t: int) -> np.ndarray:
    width = k + t - 1
    x = np.arange(1 << width)
    mask = (1 << k) - 1
    out = np.zeros((tts.shape[0], 1 << width), dtype=np.int64)
    for j in range(t):
        out |= tts[:, (x >> j) & mask].astype(np.int64) << j
    return out


def block_balance_mask(tts: np.ndarray, k: int, t: int) -> np.ndarray:
    """For each rule: do t consecutive coordinates hit every value of F2^t
    exactly 2^(k-1) times over F2^(k+t-1)?"""
    if t < 1:
        raise ValueError("t must be positive")
    vals = _block_values(tts, k, t)
    c = len(tts)
    offs = np.arange(c, dtype=np.int64)[:, None] << t
    counts = np.bincount((vals + offs).ravel(), minlength=c << t).reshape(c, 1 << t)
    return (counts == 1 << (k - 1)).all(axis=1)


def block_balance_prune(f: BooleanFunction, n: int, t: int) -> bool:
    if f.k + t - 1 > n:
        raise ValueError(f"t={t} windows need {f.k + t - 1} > n={n} inputs")
    return bool(block_balance_mask(f.tt[None, :], f.k, t)[0])


# -- candidate generation -----------------------------------------------------

def _unpack(values: np.ndarray, k: int) -> np.ndarray:
    shifts = np.arange(1 << k, dtype=np.uint64)
    return ((values.astype(np.uint64)[:, None] >> shifts) & np.uint64(1)).astype(np.uint8)


def _shaped_batches(c: SearchConstraints, chunk: int):
    """ANF-subset enumeration for the degree-limited shapes."""
    k = c.k
    degs = _anf_degrees(k)
    top = 2 if (c.quadratic_only or c.max_degree is None) else min(c.max_degree, 2)
    free = [m for m in range(1, 1 << k) if degs[m] <= top]
    if not c.fix_zero:
        free = [0] + free
    fixed_sets: list[list[int]] = [[]]
    if c.one_cubic_term:
        fixed_sets = [[m] for m in range(1 << k) if degs[m] == 3]
    total = len(fixed_sets) << len(free)
    pos = 0
    for fixed in fixed_sets:
        count = 1 << len(free)
        for start in range(0, count, chunk):
            idx = np.arange(start, min(count, start + chunk), dtype=np.int64)
            coeffs = np.zeros((len(idx), 1 << k), dtype=np.uint8)
            for j, m in enumerate(free):
                coeffs[:, m] = (idx >> j) & 1
            for m in fixed:
                coeffs[:, m] = 1
            yield pos + start, pos + start + len(idx), total, mobius(coeffs)
        pos += count


def _full_batches(c: SearchConstraints, chunk: int, start: int = 0):
    k = c.k
    total = 1 << (1 << k)
    for lo in range(start, total, chunk):
        hi = min(total, lo + chunk)
        yield lo, hi, total, _unpack(np.arange(lo, hi, dtype=np.uint64), k)


def candidate_batches(c: SearchConstraints, chunk: int = 1 << 15, start: int = 0):
    """Yield (lo, hi, total, tts) batches of candidates, positions ascending."""
    if c.shaped:
        for lo, hi, total, tts in _shaped_batches(c, chunk):
            if hi > start:
                yield lo, hi, total, tts
        return
    if c.k > 5 or (c.k == 5 and not c.allow_full_k5):
        raise ValueError(
            f"full enumeration for k={c.k} needs a shape filter"
            + (" or allow_full_k5" if c.k == 5 else "")
        )
    yield from _full_batches(c, chunk, start)


# -- bijectivity over a batch -------------------------------------------------

def bijective_mask(tts: np.ndarray, n: int) -> np.ndarray:
    out = np.zeros(len(tts), dtype=bool)
    step = max(1, _CELLS >> n)
    for i in range(0, len(tts), step):
        out[i:i + step] = rows_are_permutations(images(tts[i:i + step], n))
    return out


def block_schedule(k: int, n: int) -> list[int]:
    return list(range(2, min(n - k + 1, MAX_BLOCK_T) + 1))


def _process_batch(tts: np.ndarray, c: SearchConstraints, prune: bool) -> tuple[np.ndarray, dict]:
    """Filtered survivors of one batch and, per n, the bijective ones."""
    tts = tts[filter_mask(tts, c)]
    found: dict[int, np.ndarray] = {}
    if not len(tts):
        return tts, {n: np.zeros(0, dtype=bool) for n in c.n_list}
    # survivors[t]: mask after block filters 2..t (memoised across n)
    alive = np.ones(len(tts), dtype=bool)
    survivors = {1: alive.copy()}
    if prune:
        for t in range(2, min(max(c.n_list) - c.k + 1, MAX_BLOCK_T) + 1):
            idx = np.flatnonzero(alive)
            if len(idx):
                alive[idx] = block_balance_mask(tts[idx], c.k, t)
            survivors[t] = alive.copy()
    for n in c.n_list:
        t = min(n - c.k + 1, MAX_BLOCK_T) if prune else 1
        mask = survivors[max(1, t)]
        res = np.zeros(len(tts), dtype=bool)
        idx = np.flatnonzero(mask)
        if len(idx):
            res[idx] = bijective_mask(tts[idx], n)
        found[n] = res
    return tts, found


def enumerate_liftings(
    c: SearchConstraints,
    *,
    prune: bool = True,
    threads: int = 1,
    budget: int | None = None,
    start: int = 0,
    progress: Callable[[int, int], None] | None = None,
    classify: bool = True,
) -> list[LiftingReport]:
    """All generators passing the filters that lift for at least one n in n_list.

    Candidates are visited in ascending position (truth-table integer for
    full enumerations, ANF-subset index for shaped ones) and the output is
    sorted by truth-table integer.  ``budget`` caps the number of candidate
    positions visited in this call; on overrun SearchBudgetExceeded carries
    the reports so far and the position to resume from.
    """
    reports: list[LiftingReport] = []

    def collect(tts, found):
        for i in range(len(tts)):
            inv = tuple(n for n in c.n_list if found[n][i])
            if inv:
                reports.append(LiftingReport(BooleanFunction(c.k, tts[i]), inv))

    batches = candidate_batches(c, start=start)
    visited = 0
    with ThreadPoolExecutor(max_workers=max(1, threads)) as pool:
        while True:
            group = list(itertools.islice(batches, max(1, threads)))
            if not group:
                break
            results = pool.map(lambda b: _process_batch(b[3], c, prune), group)
            for (lo, hi, total, _), (tts, found) in zip(group, results):
                collect(tts, found)
                visited += hi - lo
                if progress is not None:
                    progress(hi, total)
                if budget is not None and visited >= budget and hi < total:
                    _finish(reports, classify)
                    raise SearchBudgetExceeded(reports, hi)
    _finish(reports, classify)
    return reports


def _finish(reports: list[LiftingReport], classify: bool) -> None:
    reports.sort(key=lambda r: r.generator.to_int())
    if classify and reports:
        for cid, members in enumerate(classify_essential(reports)):
            for r in members:
                r.class_id = cid


def brute_force_liftings(k: int, n: int, fix_zero: bool = True) -> list[BooleanFunction]:
    """No filters, no pruning: every rule on k variables that lifts on n."""
    total = 1 << (1 << k)
    out = []
    chunk = max(1, _CELLS >> n)
    for lo in range(0, total, chunk):
        tts = _unpack(np.arange(lo, min(total, lo + chunk), dtype=np.uint64), k)
        if fix_zero:
            tts = tts[tts[:, 0] == 0]
        for row in tts[bijective_mask(tts, n)]:
            out.append(BooleanFunction(k, row))
    return out


def count_liftings(c: SearchConstraints, **kw) -> dict[int, int]:
    reports = enumerate_liftings(c, classify=False, **kw)
    return {n: sum(1 for r in reports if n in r.inv) for n in c.n_list}


# -- essential equivalence ----------------------------------------------------

def _reversal_perm(k: int) -> np.ndarray:
    x = np.arange(1 << k)
    out = np.zeros_like(x)
    for j in range(k):
        out |= ((x >> j) & 1) << (k - 1 - j)
    return out


def essential_images(tt: np.ndarray) -> list[np.ndarray]:
    """The 8 images of a truth table under input complement, input reversal
    and output complement."""
    size = len(tt)
    k = size.bit_length() - 1
    x = np.arange(size)
    rev = _reversal_perm(k)
    out = []
    for comp_in, reflect, comp_out in itertools.product((0, 1), repeat=3):
        idx = x ^ (size - 1) if comp_in else x
        if reflect:
            idx = rev[idx]
        out.append(tt[idx] ^ np.uint8(comp_out))
    return out


def essential_key(f: BooleanFunction) -> bytes:
    """Lexicographically least truth table in the essential orbit."""
    return min(t.tobytes() for t in essential_images(f.tt))


def essential_representative(f: BooleanFunction) -> BooleanFunction:
    return BooleanFunction(f.k, np.frombuffer(essential_key(f), dtype=np.uint8))


def classify_essential(items: Sequence) -> list[list]:
    """Group generators (or LiftingReports) into essential classes.

    Classes are ordered by their representative truth table; members keep
    input order.
    """
    groups: dict[bytes, list] = {}
    for it in items:
        f = it.generator if isinstance(it, LiftingReport) else it
        groups.setdefault(essential_key(f), []).append(it)
    return [groups[key] for key in sorted(groups)]


# -- resume tokens --------------------------------------------------------------

def write_resume_token(path, c: SearchConstraints, next_position: int, total: int | None = None) -> None:
    """One line per contiguous worker range: start, end, last processed."""
    if total is None:
        total = next(candidate_batches(c))[2]
    Path(path).write_text(f"{0}\t{total}\t{next_position - 1}\n")


def read_resume_token(path) -> int:
    lines = [ln.split("\t") for ln in Path(path).read_text().splitlines() if ln.strip()]
    return min(int(last) + 1 for _, _, last in lines)


def search_tsv(reports: Iterable[LiftingReport]) -> str:
    lines = ["anf\tn_list\tclass_id"]
    for r in reports:
        cid = "" if r.class_id is None else str(r.class_id)
        lines.append(f"{r.anf}\t{','.join(map(str, r.inv))}\t{cid}")
    return "\n".join(lines) + "\n"


def nonlinear(reports: Iterable[LiftingReport]) -> list[LiftingReport]:
    return [r for r in reports if r.generator.anf.degree >= 2]


def expected_block_survivors(k: int) -> int:
    """Balanced rules with f(0)=0 and an odd number of ANF terms."""
    return math.comb((1 << k) - 2, (1 << (k - 1)) - 1)
