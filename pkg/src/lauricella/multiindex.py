"""Triangular multi-indices m[i, j] (2 <= i <= j <= n) and the weights A, B.

Entries are stored densely in row-major order: (2,2), (2,3), ..., (2,n),
(3,3), ..., (n,n).
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache
from math import comb
from typing import Iterator

import numpy as np


def slot_count(n: int) -> int:
    return n * (n - 1) // 2


@lru_cache(maxsize=None)
def slots(n: int) -> tuple[tuple[int, int], ...]:
    """The (i, j) pairs in storage order."""
    return tuple((i, j) for i in range(2, n + 1) for j in range(i, n + 1))


@lru_cache(maxsize=None)
def _slot_lookup(n: int) -> dict:
    return {ij: s for s, ij in enumerate(slots(n))}


@dataclass(frozen=True)
class TriangularMultiIndex:
    n: int
    entries: tuple[int, ...]

    def __post_init__(self):
        if self.n < 2:
            raise ValueError(f"triangular multi-index needs n >= 2, got {self.n}")
        entries = tuple(int(e) for e in self.entries)
        if len(entries) != slot_count(self.n):
            raise ValueError(
                f"n = {self.n} needs {slot_count(self.n)} entries, got {len(entries)}")
        if any(e < 0 for e in entries):
            raise ValueError("multi-index entries must be nonnegative")
        object.__setattr__(self, "entries", entries)

    @classmethod
    def zeros(cls, n: int) -> "TriangularMultiIndex":
        return cls(n, (0,) * slot_count(n))

    @classmethod
    def from_mapping(cls, n: int, mapping: dict) -> "TriangularMultiIndex":
        lookup = _slot_lookup(n)
        entries = [0] * slot_count(n)
        for ij, v in mapping.items():
            if ij not in lookup:
                raise KeyError(f"{ij} is not a slot of an n = {n} triangular index")
            entries[lookup[ij]] = v
        return cls(n, tuple(entries))

    def __getitem__(self, ij: tuple[int, int]) -> int:
        s = _slot_lookup(self.n).get(tuple(ij))
        if s is None:
            raise KeyError(f"{ij} is not a slot of an n = {self.n} triangular index")
        return self.entries[s]

    def get(self, i: int, j: int) -> int:
        """m[i, j], or 0 for pairs outside the triangle (empty-sum convention)."""
        s = _slot_lookup(self.n).get((i, j))
        return 0 if s is None else self.entries[s]

    @property
    def total_weight(self) -> int:
        return sum(self.entries)

    def as_dict(self) -> dict:
        return dict(zip(slots(self.n), self.entries))

    def drop_last(self) -> "TriangularMultiIndex":
        """Restriction to n - 1 variables: removes every m[i, n]."""
        if self.n < 3:
            raise ValueError("restriction needs n >= 3")
        return TriangularMultiIndex(self.n - 1, tuple(
            v for (i, j), v in zip(slots(self.n), self.entries) if j < self.n))


def a_weight(idx: TriangularMultiIndex, k: int) -> int:
    """A(k, n) = sum_{i=2}^{k+1} sum_{j=i}^{n} m[i, j], for 0 <= k <= n."""
    n = idx.n
    if not 0 <= k <= n:
        raise ValueError(f"A(k, n) needs 0 <= k <= n = {n}, got k = {k}")
    return sum(idx.get(i, j) for i in range(2, k + 2) for j in range(i, n + 1))


def b_weight(idx: TriangularMultiIndex, k: int) -> int:
    """B(k, n) = sum_{i=2}^{k} m[i, k] + sum_{i=k+1}^{n} m[k+1, i], for 1 <= k <= n."""
    n = idx.n
    if not 1 <= k <= n:
        raise ValueError(f"B(k, n) needs 1 <= k <= n = {n}, got k = {k}")
    column = sum(idx.get(i, k) for i in range(2, k + 1))
    row = sum(idx.get(k + 1, i) for i in range(k + 1, n + 1))
    return column + row


def count_by_weight(n: int, w: int) -> int:
    return comb(w + slot_count(n) - 1, w)


@lru_cache(maxsize=256)
def compositions(total: int, parts: int) -> np.ndarray:
    """All nonnegative integer vectors of length ``parts`` summing to ``total``.

    Rows are in ascending lexicographic order. The returned array is
    read-only because it is shared through the cache.
    """
    if parts == 0:
        out = np.zeros((1 if total == 0 else 0, 0), dtype=np.int64)
    elif parts == 1:
        out = np.array([[total]], dtype=np.int64)
    else:
        out = np.empty((comb(total + parts - 1, parts - 1), parts), dtype=np.int64)
        row = 0
        for first in range(total + 1):
            rest = compositions(total - first, parts - 1)
            out[row:row + rest.shape[0], 0] = first
            out[row:row + rest.shape[0], 1:] = rest
            row += rest.shape[0]
    out.setflags(write=False)
    return out


def shell_array(n: int, w: int) -> np.ndarray:
    """Entry vectors of every index with total weight w, one per row."""
    return compositions(w, slot_count(n))


def enumerate_by_weight(n: int, w: int) -> Iterator[TriangularMultiIndex]:
    """Every triangular index of total weight w, lexicographic in the entry vector."""
    if n < 2:
        raise ValueError(f"n must be >= 2, got {n}")
    if w < 0:
        return
    for row in _lex_rows(w, slot_count(n)):
        yield TriangularMultiIndex(n, row)


def _lex_rows(total, parts):
    if parts == 1:
        yield (total,)
        return
    for first in range(total + 1):
        for rest in _lex_rows(total - first, parts - 1):
            yield (first,) + rest


@lru_cache(maxsize=None)
def weight_matrices(n: int) -> tuple[np.ndarray, np.ndarray]:
    """0/1 matrices MA, MB of shape (slots, n) with A = E @ MA, B = E @ MB.

    Column k-1 holds the coefficients of A(k, n), resp. B(k, n).
    """
    L = slot_count(n)
    ma = np.zeros((L, n), dtype=np.int64)
    mb = np.zeros((L, n), dtype=np.int64)
    for s, (i, j) in enumerate(slots(n)):
        for k in range(1, n + 1):
            if i <= k + 1:
                ma[s, k - 1] = 1
            if (j == k and i <= k) or (i == k + 1 and j >= k + 1):
                mb[s, k - 1] = 1
    ma.setflags(write=False)
    mb.setflags(write=False)
    return ma, mb
