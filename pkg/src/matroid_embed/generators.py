"""Random matroids for experiments and property tests."""

from __future__ import annotations

import numpy as np

from .gf2 import random_bits
from .matroids import FreeMatroid, GraphicMatroid, LaminarMatroid, LinearMatroid, Matroid

__all__ = [
    "random_gf2_matroid",
    "random_graphic",
    "random_laminar",
    "random_rank1",
    "random_rank2",
    "random_matroid",
    "random_weights",
    "FAMILIES",
]


def random_gf2_matroid(n: int, dim: int, rng: np.random.Generator, loop_prob: float = 0.05) -> LinearMatroid:
    cols = [0 if rng.random() < loop_prob else random_bits(dim, rng) for _ in range(n)]
    return LinearMatroid(cols, 2, dim, name=f"randGF2[{n}x{dim}]")


def random_graphic(n: int, vertices: int, rng: np.random.Generator, loop_prob: float = 0.05) -> GraphicMatroid:
    edges = []
    for _ in range(n):
        u = int(rng.integers(vertices))
        v = u if rng.random() < loop_prob else int(rng.integers(vertices))
        edges.append((u, v))
    return GraphicMatroid(vertices, edges, name=f"randGraph[V={vertices},E={n}]")


def random_laminar(n: int, rng: np.random.Generator, set_prob: float = 0.7) -> LaminarMatroid:
    """Random hierarchical splitting of a shuffled ground set."""
    family: list[tuple[list[int], int]] = []

    def build(block: list[int]) -> None:
        if len(block) >= 1 and rng.random() < set_prob:
            family.append((block, int(rng.integers(0, len(block) + 1))))
        if len(block) <= 1:
            return
        parts = int(rng.integers(2, min(3, len(block)) + 1))
        cuts = sorted(rng.choice(np.arange(1, len(block)), size=parts - 1, replace=False).tolist())
        for lo, hi in zip([0] + cuts, cuts + [len(block)]):
            build(block[lo:hi])

    perm = [int(x) for x in rng.permutation(n)]
    build(perm)
    return LaminarMatroid(n, family, name=f"randLaminar[{n}]")


def random_rank1(n: int, rng: np.random.Generator, loop_prob: float = 0.2) -> LinearMatroid:
    cols = [0 if rng.random() < loop_prob else 1 for _ in range(n)]
    if not any(cols) and n:
        cols[int(rng.integers(n))] = 1
    return LinearMatroid(cols, 2, 1, name=f"randRank1[{n}]")


def random_rank2(n: int, rng: np.random.Generator, loop_prob: float = 0.1, p: int = 101) -> LinearMatroid:
    """Parallel classes drawn as random directions in GF(p)^2."""
    classes = int(rng.integers(1, max(2, n // 2) + 1))
    dirs = [(1, int(t)) for t in rng.choice(p, size=classes, replace=False)]
    cols = []
    for _ in range(n):
        if rng.random() < loop_prob:
            cols.append((0, 0))
        else:
            a, b = dirs[int(rng.integers(classes))]
            s = int(rng.integers(1, p))
            cols.append((a * s % p, b * s % p))
    return LinearMatroid(cols, p, 2, name=f"randRank2[{n}]")


def random_matroid(family: str, n: int, rng: np.random.Generator) -> Matroid:
    if family == "rank1":
        return random_rank1(n, rng)
    if family == "rank2":
        return random_rank2(n, rng)
    if family == "binary":
        return random_gf2_matroid(n, max(1, n // 2 + 1), rng)
    if family == "graphic":
        return random_graphic(n, max(2, n // 2 + 2), rng)
    if family == "laminar":
        return random_laminar(n, rng)
    if family == "free":
        return FreeMatroid(n)
    raise ValueError(f"unknown family {family!r}")


FAMILIES = ("rank1", "rank2", "binary", "graphic", "laminar", "free")


def random_weights(kind: str, n: int, rng: np.random.Generator) -> list[float]:
    if kind == "uniform":
        return [float(x) for x in rng.random(n)]
    if kind == "exp":
        return [float(x) for x in rng.exponential(1.0, n)]
    raise ValueError(f"unknown weight distribution {kind!r}")
