"""Approximate embeddings of binary matroids into free matroids.

A random basis b of F_2^n sends each nonzero vector x to the smallest index
i whose b_i appears when x is written in the basis.  Ranks never go up, and
on average they shrink only to about a logarithm.
"""

from __future__ import annotations

import csv
import io
import math
from dataclasses import dataclass, field
from typing import Sequence

import numpy as np

from .gf2 import GF2Matrix, gf2_rank, random_invertible, solve_in_span
from .matroids import FreeMatroid, LinearMatroid, Matroid, PrefixGatedOracle
from .ome import BinaryOMM, EmbeddingError

__all__ = [
    "LoopError",
    "f_b",
    "FreeApproxEmbedder",
    "free_embed",
    "trivial_n_embed",
    "expected_rank_lower_bound",
    "closed_form_bound",
    "binary_images",
    "SetSample",
    "sample_sets",
    "DistortionEstimate",
    "estimate_distortion",
    "no_inflation_violations",
    "full_binary_matroid",
]

E_FACTOR = 1 - 1 / math.e


class LoopError(EmbeddingError):
    """A loop reached f_b, which is only defined on nonzero vectors."""


def f_b(x: int, basis: Sequence[int]) -> int:
    """0-based index of the first basis vector used to write ``x``."""
    if x == 0:
        raise LoopError("f_b is undefined on the zero vector")
    used = solve_in_span(x, basis)
    if used is None:
        raise ValueError("basis does not span x")
    return min(used)


def _first_index(coords: np.ndarray) -> np.ndarray:
    """Lowest set bit of each nonzero entry."""
    low = coords & -coords
    return np.log2(low.astype(np.float64)).astype(np.int64)


def _coords(vectors: np.ndarray, inverse: GF2Matrix) -> np.ndarray:
    out = np.zeros_like(vectors)
    for i, col in enumerate(inverse.cols):
        out ^= np.where((vectors >> i) & 1, np.int64(col), np.int64(0))
    return out


class FreeApproxEmbedder:
    """Binary OMM followed by f_b for a basis drawn once at the start."""

    kind = "free"

    def __init__(self, dim: int, rng: np.random.Generator | None = None, basis: GF2Matrix | None = None):
        if basis is None:
            basis = random_invertible(dim, rng if rng is not None else np.random.default_rng())
        self.dim = dim
        self.basis = basis
        self._inverse = basis.inverse()
        self.omm = BinaryOMM(dim)
        self.images: dict[int, int] = {}

    @property
    def host(self) -> Matroid:
        return FreeMatroid(self.dim)

    def step(self, gate: PrefixGatedOracle, a: int) -> int:
        x = self.omm.step(gate, a)
        if x == 0:
            raise LoopError(f"element {a} is a loop")
        c = self._inverse(x)
        img = (c & -c).bit_length() - 1
        self.images[a] = img
        return img


def free_embed(matroid: Matroid, order: Sequence[int], rng: np.random.Generator, dim: int | None = None) -> dict[int, int]:
    """Stream ``order`` through a fresh FreeApproxEmbedder; returns element -> index in Fr_dim."""
    dim = matroid.full_rank() if dim is None else dim
    emb = FreeApproxEmbedder(max(dim, 1), rng)
    gate = PrefixGatedOracle(matroid)
    for a in order:
        gate.arrive(int(a))
        emb.step(gate, int(a))
    if not gate.audit():
        raise EmbeddingError("embedder queried elements outside the arrived prefix")
    return dict(emb.images)


def trivial_n_embed(matroid: Matroid) -> tuple[dict[int, int], Matroid]:
    """Every non-loop goes to the one element of Fr_1, loops to a loop."""
    host = FreeMatroid(1)
    return {u: 0 for u in range(matroid.n) if matroid.rank(1 << u)}, host


def expected_rank_lower_bound(r: int, n: int) -> tuple[float, float]:
    """(i.i.d. surrogate sum_j 1-(1-2^-j)^r, closed form (1-1/e) log2(max(r,2)/2))."""
    if not 1 <= r <= n:
        raise ValueError("need 1 <= r <= n")
    surrogate = sum(1 - (1 - 2.0**-j) ** r for j in range(1, n + 1))
    return surrogate, E_FACTOR * math.log2(max(r, 2) / 2)


def closed_form_bound(r: int, n: int) -> float:
    """Closed form with the explicit slack: (1-1/e) log2(r/2) - n/2^(n/2)."""
    return E_FACTOR * math.log2(max(r, 2) / 2) - n / 2 ** (n / 2)


def binary_images(matroid: Matroid, dim: int | None = None, order: Sequence[int] | None = None) -> tuple[list[int], int]:
    """F_2^dim images from one binary OMM run; loops are rejected."""
    dim = matroid.full_rank() if dim is None else dim
    omm = BinaryOMM(max(dim, 1))
    gate = PrefixGatedOracle(matroid)
    order = range(matroid.n) if order is None else order
    for a in order:
        gate.arrive(int(a))
        if omm.step(gate, int(a)) == 0:
            raise LoopError(f"element {a} is a loop")
    return [omm.images[u] for u in range(matroid.n)], max(dim, 1)


def full_binary_matroid(n: int) -> LinearMatroid:
    """All 2^n - 1 nonzero vectors of F_2^n."""
    return LinearMatroid(list(range(1, 1 << n)), 2, n, name=f"F2^{n}")


@dataclass
class SetSample:
    kind: str
    elements: list[int]
    rank: int


def sample_sets(
    images: Sequence[int], rng: np.random.Generator, subsets: int = 10, flats: int = 10, independents: int = 10
) -> list[SetSample]:
    """Full set, uniform random subsets, random flats, random independent sets.

    Ranks are taken from the images, which carry the source matroid exactly.
    """
    n = len(images)
    dim = max(1, max(images).bit_length()) if n else 1
    out = [SetSample("full", list(range(n)), gf2_rank(images))]
    for _ in range(subsets):
        s = [u for u in range(n) if rng.random() < 0.5] or [int(rng.integers(n))]
        out.append(SetSample("subset", s, gf2_rank(images[u] for u in s)))
    by_vec: dict[int, list[int]] = {}
    for u, x in enumerate(images):
        by_vec.setdefault(x, []).append(u)
    for _ in range(flats):
        gens = [images[int(rng.integers(n))] for _ in range(int(rng.integers(1, dim + 1)))]
        span = {0}
        for g in gens:
            span |= {v ^ g for v in span}
        s = [u for v in span for u in by_vec.get(v, ())]
        out.append(SetSample("flat", sorted(s), gf2_rank(gens)))
    for _ in range(independents):
        s: list[int] = []
        acc: list[int] = []
        for u in (int(x) for x in rng.permutation(n)):
            if gf2_rank(acc + [images[u]]) > len(acc):
                acc.append(images[u])
                s.append(u)
        # random size between 1 and the full rank
        size = int(rng.integers(1, len(s) + 1))
        out.append(SetSample("independent", sorted(s[:size]), size))
    return out


@dataclass
class DistortionEstimate:
    dim: int
    trials: int
    sets: list[SetSample]
    mean_rank: list[float]
    std_rank: list[float]
    lower_bound: list[float]
    asserted: list[bool]  # bound asserted only when rank <= dim/2
    violations: int  # no-inflation failures, must be 0
    beta_hat: float = field(init=False)

    def __post_init__(self):
        self.beta_hat = max((s.rank / m for s, m in zip(self.sets, self.mean_rank) if s.rank), default=1.0)

    def bound_failures(self, sigmas: float = 3.0) -> list[int]:
        """Asserted sets whose mean rank is below the bound by more than ``sigmas`` standard errors."""
        bad = []
        for i, ok in enumerate(self.asserted):
            se = self.std_rank[i] / math.sqrt(self.trials)
            if ok and self.mean_rank[i] + sigmas * se < self.lower_bound[i]:
                bad.append(i)
        return bad

    def to_csv(self) -> str:
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(["set_id", "rank_M", "mean_rank_Fr", "lower_bound", "beta_hat"])
        for i, (s, m, lb) in enumerate(zip(self.sets, self.mean_rank, self.lower_bound)):
            w.writerow([i, s.rank, repr(m), repr(lb), repr(s.rank / m) if m else ""])
        return buf.getvalue()

    def summary(self) -> str:
        kinds: dict[str, int] = {}
        for s in self.sets:
            kinds[s.kind] = kinds.get(s.kind, 0) + 1
        mix = " ".join(f"{k}={v}" for k, v in kinds.items())
        return "\n".join(
            [
                f"dim={self.dim} trials={self.trials} sets={len(self.sets)} ({mix})",
                f"beta_hat={self.beta_hat:.6f} (estimate over sampled sets)",
                f"no_inflation_violations={self.violations}",
                f"bound_failures={len(self.bound_failures())}",
            ]
        )


def estimate_distortion(
    matroid: Matroid,
    trials: int,
    rng: np.random.Generator,
    sets: list[SetSample] | None = None,
    dim: int | None = None,
) -> DistortionEstimate:
    """Monte-Carlo mean of rank_Fr(f_b(S)) over fresh random bases."""
    if trials < 1:
        raise ValueError("trials must be >= 1")
    images, dim = binary_images(matroid, dim)
    if sets is None:
        sets = sample_sets(images, rng)
    vecs = np.asarray(images, dtype=np.int64)
    member = np.zeros((len(sets), len(images)), dtype=np.float64)
    for i, s in enumerate(sets):
        member[i, s.elements] = 1.0
    ranks = np.asarray([s.rank for s in sets])
    total = np.zeros(len(sets))
    total_sq = np.zeros(len(sets))
    violations = 0
    eye = np.eye(dim)
    for _ in range(trials):
        inv = random_invertible(dim, rng).inverse()
        idx = _first_index(_coords(vecs, inv))
        hit = member @ eye[idx] > 0
        got = hit.sum(axis=1)
        violations += int(np.sum(got > ranks))
        total += got
        total_sq += got.astype(np.float64) ** 2
    mean = total / trials
    var = np.maximum(total_sq / trials - mean**2, 0.0) * trials / max(trials - 1, 1)
    lower = [closed_form_bound(s.rank, dim) if s.rank else 0.0 for s in sets]
    asserted = [0 < s.rank <= dim / 2 for s in sets]
    return DistortionEstimate(dim, trials, sets, mean.tolist(), np.sqrt(var).tolist(), lower, asserted, violations)


def no_inflation_violations(matroid: Matroid, bases: int, rng: np.random.Generator, dim: int | None = None) -> int:
    """Count (basis, subset) pairs with rank_Fr(f_b(S)) > rank_M(S), over every subset."""
    images, dim = binary_images(matroid, dim)
    n = len(images)
    table = np.asarray(matroid.rank_table(), dtype=np.int64)
    vecs = np.asarray(images, dtype=np.int64)
    bad = 0
    for _ in range(bases):
        idx = _first_index(_coords(vecs, random_invertible(dim, rng).inverse()))
        ors = np.zeros(1, dtype=np.int64)
        for u in range(n):
            ors = np.concatenate([ors, ors | (np.int64(1) << idx[u])])
        counts = np.zeros_like(ors)
        x = ors.copy()
        while x.any():
            counts += x & 1
            x >>= 1
        bad += int(np.sum(counts > table))
    return bad
