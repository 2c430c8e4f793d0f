"""Exact linear algebra modulo a prime p (p < 2**61)."""

from __future__ import annotations

from functools import lru_cache
from typing import Iterable, Sequence

import numpy as np
from sympy import isprime, nextprime

__all__ = [
    "GFpMatrix",
    "check_prime",
    "smallest_prime_above",
    "inv_mod",
    "gfp_rank",
    "gfp_echelon",
    "gfp_in_span",
    "random_vector_in_span",
    "det_mod",
]

MAX_MODULUS = 1 << 61

Vector = tuple[int, ...]


@lru_cache(maxsize=None)
def check_prime(p: int) -> int:
    if p < 2 or p >= MAX_MODULUS or not isprime(p):
        raise ValueError(f"modulus {p} is not a prime below 2**61")
    return p


def smallest_prime_above(x: int) -> int:
    return int(nextprime(x))


def inv_mod(a: int, p: int) -> int:
    a %= p
    if a == 0:
        raise ZeroDivisionError("zero has no inverse")
    return pow(a, p - 2, p)


class _Echelon:
    """Incremental row-echelon basis; each stored row is monic at its pivot."""

    __slots__ = ("p", "rows")

    def __init__(self, p: int):
        self.p = p
        self.rows: list[tuple[int, list[int]]] = []

    def reduce(self, v: Sequence[int]) -> list[int]:
        p = self.p
        w = [x % p for x in v]
        for piv, row in self.rows:
            c = w[piv]
            if c:
                for j in range(len(w)):
                    if row[j]:
                        w[j] = (w[j] - c * row[j]) % p
        return w

    def add(self, v: Sequence[int]) -> bool:
        w = self.reduce(v)
        for piv, x in enumerate(w):
            if x:
                inv = inv_mod(x, self.p)
                w = [(y * inv) % self.p for y in w]
                self.rows.append((piv, w))
                return True
        return False

    def contains(self, v: Sequence[int]) -> bool:
        return not any(self.reduce(v))


def gfp_echelon(vectors: Iterable[Sequence[int]], p: int) -> _Echelon:
    check_prime(p)
    ech = _Echelon(p)
    for v in vectors:
        ech.add(v)
    return ech


def gfp_rank(vectors: Iterable[Sequence[int]], p: int) -> int:
    """Rank of column vectors modulo the prime ``p``."""
    vecs = [tuple(v) for v in vectors]
    if len({len(v) for v in vecs}) > 1:
        raise ValueError("vectors have mixed dimensions")
    return len(gfp_echelon(vecs, p).rows)


def gfp_in_span(target: Sequence[int], vectors: Iterable[Sequence[int]], p: int) -> bool:
    return gfp_echelon(vectors, p).contains(target)


def det_mod(rows: Sequence[Sequence[int]], p: int) -> int:
    """Determinant of a square matrix mod p, in 0..p-1."""
    check_prime(p)
    a = [[x % p for x in r] for r in rows]
    n = len(a)
    det = 1
    for c in range(n):
        piv = next((r for r in range(c, n) if a[r][c]), None)
        if piv is None:
            return 0
        if piv != c:
            a[c], a[piv] = a[piv], a[c]
            det = -det
        det = det * a[c][c] % p
        inv = inv_mod(a[c][c], p)
        for r in range(c + 1, n):
            f = a[r][c] * inv % p
            if f:
                a[r] = [(x - f * y) % p for x, y in zip(a[r], a[c])]
    return det % p


def random_vector_in_span(basis: Sequence[Sequence[int]], p: int, rng: np.random.Generator) -> Vector:
    """Uniformly random GF(p)-combination of ``basis``."""
    if not basis:
        raise ValueError("basis must be nonempty")
    dim = len(basis[0])
    coeffs = [int(c) for c in rng.integers(0, p, size=len(basis))]
    out = [0] * dim
    for c, b in zip(coeffs, basis):
        if c:
            for j in range(dim):
                out[j] = (out[j] + c * b[j]) % p
    return tuple(out)


class GFpMatrix:
    """Dense matrix mod p, interpreted column-wise as a vector family."""

    def __init__(self, rows: Sequence[Sequence[int]], p: int):
        self.p = check_prime(p)
        self.rows = tuple(tuple(x % p for x in r) for r in rows)
        if len({len(r) for r in self.rows}) > 1:
            raise ValueError("ragged matrix")

    @property
    def shape(self) -> tuple[int, int]:
        return len(self.rows), len(self.rows[0]) if self.rows else 0

    def columns(self) -> list[Vector]:
        return [tuple(col) for col in zip(*self.rows)]

    def column(self, j: int) -> Vector:
        return tuple(r[j] for r in self.rows)

    def rank(self) -> int:
        return gfp_rank(self.columns(), self.p)
