"""Deterministic compensated accumulation of array-valued partial sums.

Terms are produced in fixed-size chunks.  Each chunk is reduced by numpy along
its leading axis, and chunk sums are folded in chunk order with Neumaier's
error-free transformation, separately for real and imaginary parts.  Worker
threads only compute chunks; the fold always runs in the same order, so the
result is bit-identical for any thread count.
"""

from __future__ import annotations

from concurrent.futures import ThreadPoolExecutor
from typing import Callable, Iterable, Sequence

import numpy as np

__all__ = ["Neumaier", "chunked_sum"]


def _two_sum(s, x):
    t = s + x
    big = np.abs(s) >= np.abs(x)
    err = np.where(big, (s - t) + x, (x - t) + s)
    return t, err


class Neumaier:
    """Elementwise compensated accumulator for real or complex arrays."""

    def __init__(self, shape, dtype=complex):
        self.complex = np.issubdtype(np.dtype(dtype), np.complexfloating)
        self._s = np.zeros(shape, dtype=float)
        self._c = np.zeros(shape, dtype=float)
        if self.complex:
            self._si = np.zeros(shape, dtype=float)
            self._ci = np.zeros(shape, dtype=float)

    def add(self, x) -> None:
        x = np.asarray(x)
        self._s, e = _two_sum(self._s, np.real(x).astype(float))
        self._c += e
        if self.complex:
            self._si, e = _two_sum(self._si, np.imag(x).astype(float))
            self._ci += e

    @property
    def value(self):
        re = self._s + self._c
        if self.complex:
            return re + 1j * (self._si + self._ci)
        return re


def chunked_sum(make_chunk: Callable[[int], np.ndarray], n_chunks: int, shape,
                threads: int = 1, on_chunk: Callable[[int, np.ndarray], None] | None = None):
    """Sum ``make_chunk(i).sum(axis=0)`` over i in order with compensation.

    ``on_chunk`` sees each raw chunk (in order) for side statistics.
    """
    acc = Neumaier(shape)

    def fold(i, chunk):
        if on_chunk is not None:
            on_chunk(i, chunk)
        acc.add(chunk.sum(axis=0))

    if threads <= 1 or n_chunks <= 1:
        for i in range(n_chunks):
            fold(i, make_chunk(i))
    else:
        with ThreadPoolExecutor(max_workers=threads) as pool:
            for i, chunk in enumerate(pool.map(make_chunk, range(n_chunks))):
                fold(i, chunk)
    return acc.value
