"""Vectorial measures of an S-box: nonlinearity, plateauedness, DU and BU.

For a shift-invariant F the component b.F, the DDT row of a and the BCT
column of b only change by an input rotation when b (or a) is rotated, so
by default every maximum is taken over necklace representatives only.
Pass ``use_symmetry=False`` for the plain sweep over all nonzero values.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .boolfun import fwht, spectrum_is_plateaued
from .sbox import RSBox, necklace_labels, table_is_permutation

_CHUNK = 1 << 22


class UndefinedMetricError(ValueError):
    pass


@dataclass(frozen=True)
class MetricsRecord:
    nl: int
    plateaued: int
    du: int
    bu: int | None

    def as_tuple(self) -> tuple:
        return (self.nl, self.plateaued, self.du, self.bu)

    def tsv(self) -> str:
        bu = "" if self.bu is None else str(self.bu)
        return f"{self.nl}\t{self.plateaued}\t{self.du}\t{bu}"


def _table(F) -> np.ndarray:
    return F.table if isinstance(F, RSBox) else np.asarray(F)


def _n(table: np.ndarray) -> int:
    return table.shape[-1].bit_length() - 1


def _nonzero_values(n: int, use_symmetry: bool) -> np.ndarray:
    if use_symmetry:
        rep, _ = necklace_labels(n)
        vals = np.flatnonzero(rep == np.arange(1 << n))
    else:
        vals = np.arange(1 << n)
    return vals[vals != 0]


def _parity(x: np.ndarray) -> np.ndarray:
    return (np.bitwise_count(x) & 1).astype(np.int8)


def vectorial_walsh(F, a: int, b: int) -> int:
    """W_F(a, b) = sum_x (-1)^(b.F(x) + a.x), evaluated directly."""
    t = _table(F).astype(np.int64)
    x = np.arange(len(t), dtype=np.int64)
    e = _parity((t & b) ^ (x & a))
    return int((1 - 2 * e.astype(np.int64)).sum())


def component_spectra(F, bs) -> np.ndarray:
    """Walsh spectra of the components b.F, one row per b."""
    t = _table(F).astype(np.int64)
    bs = np.asarray(bs, dtype=np.int64)
    signs = 1 - 2 * _parity(t[None, :] & bs[:, None]).astype(np.int64)
    return fwht(signs)


def _component_sweep(F, use_symmetry: bool):
    t = _table(F)
    n = _n(t)
    bs = _nonzero_values(n, use_symmetry)
    step = max(1, _CHUNK >> n)
    for i in range(0, len(bs), step):
        yield component_spectra(t, bs[i:i + step])


def nonlinearity_sbox(F, use_symmetry: bool = True) -> int:
    t = _table(F)
    n = _n(t)
    worst = max(int(np.abs(s).max()) for s in _component_sweep(t, use_symmetry))
    return ((1 << n) - worst) // 2


def is_plateaued_sbox(F, use_symmetry: bool = True) -> bool:
    """Every nonzero component plateaued, amplitudes may differ per component."""
    for spectra in _component_sweep(F, use_symmetry):
        for row in spectra:
            if not spectrum_is_plateaued(row):
                return False
    return True


def ddt_rows(F, alphas) -> np.ndarray:
    """Rows DDT[a, :] for the given input differences."""
    t = _table(F).astype(np.int64)
    size = len(t)
    x = np.arange(size, dtype=np.int64)
    alphas = np.asarray(alphas, dtype=np.int64)
    out = t[x[None, :] ^ alphas[:, None]] ^ t[None, :]
    offs = np.arange(len(alphas), dtype=np.int64)[:, None] * size
    return np.bincount((out + offs).ravel(), minlength=len(alphas) * size).reshape(len(alphas), size)


def differential_uniformity(F, use_symmetry: bool = True) -> int:
    t = _table(F)
    n = _n(t)
    alphas = _nonzero_values(n, use_symmetry)
    step = max(1, _CHUNK >> n)
    return max(int(ddt_rows(t, alphas[i:i + step]).max()) for i in range(0, len(alphas), step))


def inverse_table(table: np.ndarray) -> np.ndarray:
    inv = np.empty_like(table)
    inv[table] = np.arange(len(table), dtype=table.dtype)
    return inv


def bct_columns(F, betas) -> np.ndarray:
    """Columns BCT[:, b] for the given output differences, shape (len(betas), 2^n).

    BCT(a, b) = #{x : F^-1(F(x)+b) + F^-1(F(x+a)+b) = a}; with
    h(x) = F^-1(F(x)+b) + x this is #{x : h(x) = h(x+a)}.
    """
    t = _table(F).astype(np.int64)
    if not table_is_permutation(t):
        raise UndefinedMetricError("boomerang uniformity needs a bijective S-box")
    inv = inverse_table(t)
    size = len(t)
    x = np.arange(size, dtype=np.int64)
    cols = []
    step = max(1, _CHUNK >> _n(t))
    for b in np.asarray(betas, dtype=np.int64):
        h = inv[t ^ b] ^ x
        col = np.empty(size, dtype=np.int64)
        for a0 in range(0, size, step):
            a = np.arange(a0, min(size, a0 + step), dtype=np.int64)
            col[a0:a0 + len(a)] = (h[x[None, :] ^ a[:, None]] == h[None, :]).sum(axis=1)
        cols.append(col)
    return np.array(cols)


def boomerang_uniformity(F, use_symmetry: bool = True) -> int:
    t = _table(F)
    n = _n(t)
    betas = _nonzero_values(n, use_symmetry)
    return max(int(col[1:].max()) for col in (bct_columns(t, [b])[0] for b in betas))


def metrics_record(F, use_symmetry: bool = True) -> MetricsRecord:
    return MetricsRecord(
        nl=nonlinearity_sbox(F, use_symmetry),
        plateaued=int(is_plateaued_sbox(F, use_symmetry)),
        du=differential_uniformity(F, use_symmetry),
        bu=boomerang_uniformity(F, use_symmetry),
    )


def partial_metrics_record(F, use_symmetry: bool = True) -> MetricsRecord:
    """The record without BU, for non-bijective maps."""
    return MetricsRecord(
        nl=nonlinearity_sbox(F, use_symmetry),
        plateaued=int(is_plateaued_sbox(F, use_symmetry)),
        du=differential_uniformity(F, use_symmetry),
        bu=None,
    )
