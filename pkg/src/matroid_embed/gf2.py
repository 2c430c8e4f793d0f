"""Linear algebra over GF(2) with vectors packed into Python ints.

Bit ``i`` of an int is coordinate ``i`` (so ``e_1`` is ``1 << 0``).  Python
ints are arbitrary precision, which gives the multiword path for free.
"""

from __future__ import annotations

from typing import Iterable, Sequence

import numpy as np

__all__ = [
    "GF2Matrix",
    "unit",
    "gf2_rank",
    "gf2_echelon",
    "solve_in_span",
    "random_bits",
    "random_invertible",
    "mat_vec",
    "mat_mul",
]


def unit(i: int) -> int:
    """Standard basis vector with a single 1 in coordinate ``i`` (0-based)."""
    return 1 << i


def _check_dim(vectors: Iterable[int], dim: int | None) -> list[int]:
    vecs = list(vectors)
    if dim is not None:
        for v in vecs:
            if v < 0 or v >> dim:
                raise ValueError(f"vector {v:#x} does not fit in dimension {dim}")
    return vecs


def gf2_echelon(vectors: Iterable[int]) -> dict[int, int]:
    """Reduce ``vectors`` to a basis keyed by pivot bit (lowest set bit)."""
    basis: dict[int, int] = {}
    for v in vectors:
        while v:
            low = v & -v
            piv = low.bit_length() - 1
            if piv not in basis:
                basis[piv] = v
                break
            v ^= basis[piv]
    return basis


def gf2_rank(vectors: Iterable[int], dim: int | None = None) -> int:
    """Rank of a family of GF(2) vectors.

    Pivots are taken lowest index first.  ``dim`` is optional; when given,
    every vector must fit in it.
    """
    return len(gf2_echelon(_check_dim(vectors, dim)))


def solve_in_span(target: int, basis: Sequence[int]) -> frozenset[int] | None:
    """Indices of ``basis`` whose XOR equals ``target``, or None.

    When ``basis`` is independent the answer is unique.
    """
    # each reduced row remembers which input vectors it is made of
    rows: dict[int, tuple[int, int]] = {}
    for idx, v in enumerate(basis):
        combo = 1 << idx
        while v:
            piv = (v & -v).bit_length() - 1
            if piv not in rows:
                rows[piv] = (v, combo)
                break
            rv, rc = rows[piv]
            v ^= rv
            combo ^= rc
    used = 0
    t = target
    while t:
        piv = (t & -t).bit_length() - 1
        if piv not in rows:
            return None
        rv, rc = rows[piv]
        t ^= rv
        used ^= rc
    return frozenset(i for i in range(len(basis)) if used >> i & 1)


def random_bits(n: int, rng: np.random.Generator) -> int:
    """Uniform random n-bit integer."""
    if n <= 0:
        return 0
    nbytes = (n + 7) // 8
    return int.from_bytes(rng.bytes(nbytes), "little") & ((1 << n) - 1)


class GF2Matrix:
    """Square or rectangular matrix stored as a tuple of packed columns."""

    __slots__ = ("n_rows", "cols")

    def __init__(self, cols: Sequence[int], n_rows: int | None = None):
        self.cols = tuple(cols)
        if n_rows is None:
            n_rows = len(self.cols)
        self.n_rows = n_rows
        _check_dim(self.cols, n_rows)

    @classmethod
    def identity(cls, n: int) -> "GF2Matrix":
        return cls([1 << i for i in range(n)], n)

    @property
    def n_cols(self) -> int:
        return len(self.cols)

    def rank(self) -> int:
        return gf2_rank(self.cols)

    def is_invertible(self) -> bool:
        return self.n_rows == self.n_cols and self.rank() == self.n_cols

    def __matmul__(self, other):
        if isinstance(other, GF2Matrix):
            return mat_mul(self, other)
        return mat_vec(self, other)

    def __call__(self, v: int) -> int:
        return mat_vec(self, v)

    def inverse(self) -> "GF2Matrix":
        n = self.n_cols
        if self.n_rows != n:
            raise ValueError("only square matrices are invertible")
        # column j of the inverse expresses e_j in terms of our columns
        inv_cols = []
        for j in range(n):
            combo = solve_in_span(1 << j, self.cols)
            if combo is None:
                raise ValueError("matrix is singular")
            inv_cols.append(sum(1 << i for i in combo))
        return GF2Matrix(inv_cols, n)

    def to_array(self) -> np.ndarray:
        out = np.zeros((self.n_rows, self.n_cols), dtype=np.uint8)
        for j, c in enumerate(self.cols):
            for i in range(self.n_rows):
                out[i, j] = c >> i & 1
        return out

    def key(self) -> tuple[int, ...]:
        return self.cols

    def __eq__(self, other) -> bool:
        return isinstance(other, GF2Matrix) and self.cols == other.cols and self.n_rows == other.n_rows

    def __hash__(self) -> int:
        return hash((self.n_rows, self.cols))

    def __repr__(self) -> str:
        return f"GF2Matrix({[bin(c) for c in self.cols]}, n_rows={self.n_rows})"


def mat_vec(m: GF2Matrix, v: int) -> int:
    out = 0
    cols = m.cols
    while v:
        low = v & -v
        out ^= cols[low.bit_length() - 1]
        v ^= low
    return out


def mat_mul(a: GF2Matrix, b: GF2Matrix) -> GF2Matrix:
    if a.n_cols != b.n_rows:
        raise ValueError("shape mismatch")
    return GF2Matrix([mat_vec(a, c) for c in b.cols], a.n_rows)


def random_invertible(n: int, rng: np.random.Generator) -> GF2Matrix:
    """Uniform sample from GL(n, 2) by rejection.

    A random bit matrix is invertible with probability prod(1 - 2^-i) > 0.288,
    so the expected number of draws is below 3.5 for every n.
    """
    if n < 1:
        raise ValueError("n must be >= 1")
    while True:
        cols = [random_bits(n, rng) for _ in range(n)]
        if gf2_rank(cols) == n:
            return GF2Matrix(cols, n)
