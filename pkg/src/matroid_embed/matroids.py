"""Matroid representations behind a common rank-oracle interface.

Subsets of a ground set ``{0, ..., n-1}`` are passed around as int bitmasks;
every public entry point also accepts an iterable of element ids.
"""

from __future__ import annotations

import itertools
from abc import ABC, abstractmethod
from dataclasses import dataclass
from typing import Callable, Iterable, Mapping, Sequence

import numpy as np

from .gf2 import gf2_rank
from .gfp import _Echelon, check_prime, gfp_rank

__all__ = [
    "as_mask",
    "members",
    "popcount",
    "Matroid",
    "UniformMatroid",
    "FreeMatroid",
    "TrivialMatroid",
    "LinearMatroid",
    "CompleteBinaryMatroid",
    "GraphicMatroid",
    "LaminarMatroid",
    "ExplicitMatroid",
    "DirectSumMatroid",
    "CopyMatroid",
    "RestrictedMatroid",
    "PrefixGatedOracle",
    "GateViolation",
    "restrict",
    "direct_sum",
    "copies",
    "span",
    "find_circuit",
    "AxiomReport",
    "check_axioms",
    "spot_check_axioms",
    "MorphismReport",
    "is_morphism",
    "greedy_max_weight_basis",
    "EXPLICIT_CAP",
]

EXPLICIT_CAP = 14


def as_mask(s) -> int:
    if isinstance(s, (int, np.integer)):
        return int(s)
    m = 0
    for x in s:
        m |= 1 << int(x)
    return m


def members(mask: int) -> list[int]:
    out = []
    while mask:
        low = mask & -mask
        out.append(low.bit_length() - 1)
        mask ^= low
    return out


def popcount(mask: int) -> int:
    return bin(mask).count("1")


class Matroid(ABC):
    """A matroid on ``{0..n-1}`` answering rank queries.

    Instances are immutable after construction.
    """

    n: int
    name: str = "matroid"

    def rank(self, s) -> int:
        mask = as_mask(s)
        if mask < 0 or mask >> self.n:
            bad = [x for x in members(mask) if x >= self.n] if mask >= 0 else [mask]
            raise ValueError(f"{self.name}: element(s) {bad} outside ground set of size {self.n}")
        return self._rank(mask)

    @abstractmethod
    def _rank(self, mask: int) -> int: ...

    @property
    def ground(self) -> int:
        return (1 << self.n) - 1

    def full_rank(self) -> int:
        return self._rank(self.ground)

    def is_independent(self, s) -> bool:
        mask = as_mask(s)
        return self.rank(mask) == popcount(mask)

    def rank_elements(self, elements: Iterable[int]) -> int:
        """Rank of a set given as element ids; avoids bitmasks on huge ground sets."""
        return self.rank(as_mask(elements))

    def rank_table(self) -> list[int]:
        """Ranks of all 2^n subsets, indexed by mask."""
        if self.n > 24:
            raise ValueError("rank table too large")
        return [self._rank(m) for m in range(1 << self.n)]

    def describe_element(self, x: int) -> str:
        return str(x)

    def __len__(self) -> int:
        return self.n

    def __repr__(self) -> str:
        return f"<{type(self).__name__} {self.name} n={self.n}>"


class UniformMatroid(Matroid):
    def __init__(self, n: int, r: int):
        if n < 0 or r < 0:
            raise ValueError("n and r must be non-negative")
        self.n, self.r = n, min(r, n)
        self.name = f"U_{n},{r}"

    def _rank(self, mask: int) -> int:
        return min(self.r, popcount(mask))

    def rank_elements(self, elements: Iterable[int]) -> int:
        return min(self.r, len(set(elements)))


class FreeMatroid(UniformMatroid):
    def __init__(self, n: int):
        super().__init__(n, n)
        self.name = f"Fr_{n}"


class TrivialMatroid(UniformMatroid):
    """``n`` loops; the one-element case is written T."""

    def __init__(self, n: int = 1):
        super().__init__(n, 0)
        self.name = "T" if n == 1 else f"T_{n}"


class LinearMatroid(Matroid):
    """Columns over GF(2) (packed ints) or GF(p) (tuples).

    ``p=2`` uses the bit-packed kernel; any other prime uses modular
    elimination.
    """

    def __init__(self, columns: Sequence, p: int = 2, dim: int | None = None, name: str | None = None):
        self.p = check_prime(p)
        if p == 2:
            cols = [int(c) for c in columns]
            if dim is None:
                dim = max((c.bit_length() for c in cols), default=0)
            for c in cols:
                if c < 0 or c >> dim:
                    raise ValueError(f"column {c:#x} does not fit in dimension {dim}")
        else:
            cols = [tuple(int(x) % p for x in c) for c in columns]
            dims = {len(c) for c in cols}
            if len(dims) > 1:
                raise ValueError("columns have mixed dimensions")
            if dim is None:
                dim = dims.pop() if dims else 0
            elif dims and dims != {dim}:
                raise ValueError(f"columns must have dimension {dim}")
        self.columns = tuple(cols)
        self.dim = dim
        self.n = len(cols)
        self.name = name or (f"GF2[{self.n}x{dim}]" if p == 2 else f"GF{p}[{self.n}x{dim}]")

    def _rank(self, mask: int) -> int:
        cols = self.columns
        if self.p == 2:
            return gf2_rank(cols[i] for i in members(mask))
        return gfp_rank([cols[i] for i in members(mask)], self.p)

    def rank_table(self) -> list[int]:
        n = self.n
        table = [0] * (1 << n)
        if self.p == 2:
            cols = self.columns

            def rec(i: int, mask: int, basis: dict, r: int) -> None:
                if i == n:
                    table[mask] = r
                    return
                rec(i + 1, mask, basis, r)
                v = cols[i]
                while v:
                    piv = (v & -v).bit_length() - 1
                    if piv not in basis:
                        break
                    v ^= basis[piv]
                if v:
                    nb = dict(basis)
                    nb[(v & -v).bit_length() - 1] = v
                    rec(i + 1, mask | 1 << i, nb, r + 1)
                else:
                    rec(i + 1, mask | 1 << i, basis, r)

            rec(0, 0, {}, 0)
        else:
            ech = _Echelon(self.p)
            cols = self.columns

            def rec(i: int, mask: int) -> None:
                if i == n:
                    table[mask] = len(ech.rows)
                    return
                rec(i + 1, mask)
                if ech.add(cols[i]):
                    rec(i + 1, mask | 1 << i)
                    ech.rows.pop()
                else:
                    rec(i + 1, mask | 1 << i)

            rec(0, 0)
        return table

    def describe_element(self, x: int) -> str:
        c = self.columns[x]
        if self.p == 2:
            return "".join(str(c >> i & 1) for i in range(self.dim))
        return "[" + ",".join(map(str, c)) + "]"


class CompleteBinaryMatroid(LinearMatroid):
    """All of F_2^dim; element id ``v`` is the vector ``v`` itself (0 is a loop)."""

    def __init__(self, dim: int):
        if dim > 20:
            raise ValueError("complete binary matroid limited to dim <= 20")
        super().__init__(range(1 << dim), 2, dim, name=f"F2^{dim}")

    def _rank(self, mask: int) -> int:
        return gf2_rank(members(mask))

    def rank_elements(self, elements: Iterable[int]) -> int:
        return gf2_rank(elements)


class GraphicMatroid(Matroid):
    """Cycle matroid of a multigraph; self-loops are matroid loops."""

    def __init__(self, vertex_count: int, edges: Sequence[tuple[int, int]], name: str | None = None):
        self.vertex_count = vertex_count
        self.edges = tuple((int(u), int(v)) for u, v in edges)
        for u, v in self.edges:
            if not (0 <= u < vertex_count and 0 <= v < vertex_count):
                raise ValueError(f"edge ({u},{v}) references a vertex outside 0..{vertex_count - 1}")
        self.n = len(self.edges)
        self.name = name or f"graphic[V={vertex_count},E={self.n}]"

    def _rank(self, mask: int) -> int:
        parent: dict[int, int] = {}

        def find(x: int) -> int:
            root = x
            while parent.get(root, root) != root:
                root = parent[root]
            while x != root:
                parent[x], x = root, parent.get(x, x)
            return root

        r = 0
        edges = self.edges
        for i in members(mask):
            u, v = edges[i]
            ru, rv = find(u), find(v)
            if ru != rv:
                parent[ru] = rv
                r += 1
        return r

    def incidence_columns(self) -> list[int]:
        """Columns e_u + e_v of the GF(2) incidence representation."""
        return [(1 << u) ^ (1 << v) for u, v in self.edges]


class LaminarMatroid(Matroid):
    """Independent sets are those meeting every family member A in at most c(A) elements."""

    def __init__(self, n: int, family: Sequence[tuple[object, int]], name: str | None = None):
        self.n = n
        merged: dict[int, int] = {}
        for s, cap in family:
            mask = as_mask(s)
            if cap < 0:
                raise ValueError("capacities must be non-negative")
            if mask >> n or mask < 0:
                raise ValueError(f"family set {members(mask)} leaves the ground set")
            if mask == 0:
                continue
            merged[mask] = min(cap, merged.get(mask, cap))
        sets = list(merged)
        for a, b in itertools.combinations(sets, 2):
            if a & b and a & ~b and b & ~a:
                raise ValueError(f"family is not laminar: {members(a)} and {members(b)} cross")
        self.family = tuple(sorted(merged.items(), key=lambda kv: (popcount(kv[0]), kv[0])))
        # children of each set: maximal proper subsets in the family
        order = [m for m, _ in self.family]
        self._parent: dict[int, int | None] = {}
        for i, a in enumerate(order):
            par = None
            for b in order[i + 1:]:
                if a & b == a and a != b:
                    par = b
                    break
            self._parent[a] = par
        self.name = name or f"laminar[n={n},|F|={len(self.family)}]"

    def _rank(self, mask: int) -> int:
        # bottom-up over the laminar tree; family is sorted by size
        child_sum: dict[int, int] = {}
        covered: dict[int, int] = {}
        total = 0
        outside = mask
        for a, cap in self.family:
            v = min(cap, child_sum.get(a, 0) + popcount(mask & a & ~covered.get(a, 0)))
            par = self._parent[a]
            if par is None:
                total += v
                outside &= ~a
            else:
                child_sum[par] = child_sum.get(par, 0) + v
                covered[par] = covered.get(par, 0) | a
        return total + popcount(outside)


class ExplicitMatroid(Matroid):
    """A matroid stored as its full rank table (n <= 14)."""

    def __init__(self, n: int, table: Sequence[int], name: str = "explicit"):
        if n > EXPLICIT_CAP:
            raise ValueError(f"explicit matroids are limited to {EXPLICIT_CAP} elements")
        if len(table) != 1 << n:
            raise ValueError("rank table must have 2^n entries")
        self.n = n
        self.table = tuple(int(x) for x in table)
        self.name = name

    @classmethod
    def from_bases(cls, n: int, bases: Iterable[Iterable[int]], name: str = "explicit") -> "ExplicitMatroid":
        if n > EXPLICIT_CAP:
            raise ValueError(f"explicit matroids are limited to {EXPLICIT_CAP} elements")
        bmasks = [as_mask(b) for b in bases] or [0]
        table = [max(popcount(m & b) for b in bmasks) for m in range(1 << n)]
        return cls(n, table, name)

    @classmethod
    def from_matroid(cls, m: Matroid) -> "ExplicitMatroid":
        return cls(m.n, m.rank_table(), name=m.name)

    def bases(self) -> list[int]:
        r = self.table[-1]
        return [m for m in range(1 << self.n) if popcount(m) == r and self.table[m] == r]

    def _rank(self, mask: int) -> int:
        return self.table[mask]

    def rank_table(self) -> list[int]:
        return list(self.table)


class DirectSumMatroid(Matroid):
    """Left elements keep their ids; right element j becomes ``left.n + j``."""

    def __init__(self, left: Matroid, right: Matroid):
        self.left, self.right = left, right
        self.n = left.n + right.n
        self.name = f"({left.name} + {right.name})"

    def _rank(self, mask: int) -> int:
        nl = self.left.n
        return self.left._rank(mask & ((1 << nl) - 1)) + self.right._rank(mask >> nl)

    def rank_elements(self, elements: Iterable[int]) -> int:
        nl = self.left.n
        els = list(elements)
        return self.left.rank_elements([x for x in els if x < nl]) + self.right.rank_elements(
            [x - nl for x in els if x >= nl]
        )


class CopyMatroid(Matroid):
    """``k`` parallel copies of each base element; copy j of u has id ``u*k + j``."""

    def __init__(self, base: Matroid, k: int):
        if k < 1:
            raise ValueError("k must be >= 1")
        self.base, self.k = base, k
        self.n = base.n * k
        self.name = f"{base.name}_[{k}]"

    def element(self, u: int, j: int) -> int:
        return u * self.k + j

    def split(self, x: int) -> tuple[int, int]:
        return divmod(x, self.k)

    def projection(self, x: int) -> int:
        return x // self.k

    def _rank(self, mask: int) -> int:
        k = self.k
        proj = 0
        for x in members(mask):
            proj |= 1 << (x // k)
        return self.base._rank(proj)

    def rank_elements(self, elements: Iterable[int]) -> int:
        k = self.k
        return self.base.rank_elements({x // k for x in elements})

    def describe_element(self, x: int) -> str:
        u, j = self.split(x)
        return f"{self.base.describe_element(u)}/{j}"


class RestrictedMatroid(Matroid):
    """Restriction to ``elements``; new id i stands for ``elements[i]``."""

    def __init__(self, base: Matroid, elements: Sequence[int]):
        self.base = base
        self.elements = tuple(int(e) for e in elements)
        if len(set(self.elements)) != len(self.elements):
            raise ValueError("restriction elements must be distinct")
        for e in self.elements:
            if not 0 <= e < base.n:
                raise ValueError(f"element {e} outside base ground set")
        self.n = len(self.elements)
        self.name = f"{base.name}|{len(self.elements)}"

    def lift(self, mask: int) -> int:
        out = 0
        els = self.elements
        for i in members(mask):
            out |= 1 << els[i]
        return out

    def _rank(self, mask: int) -> int:
        return self.base._rank(self.lift(mask))

    def describe_element(self, x: int) -> str:
        return self.base.describe_element(self.elements[x])


def restrict(m: Matroid, elements) -> Matroid:
    """Restriction of ``m`` to ``elements`` (ids renumbered in the given order)."""
    els = list(elements) if not isinstance(elements, int) else members(elements)
    if isinstance(m, LinearMatroid):
        for e in els:
            if not 0 <= e < m.n:
                raise ValueError(f"element {e} outside ground set")
        return LinearMatroid([m.columns[e] for e in els], m.p, m.dim, name=f"{m.name}|{len(els)}")
    return RestrictedMatroid(m, els)


def direct_sum(a: Matroid, b: Matroid) -> DirectSumMatroid:
    return DirectSumMatroid(a, b)


def copies(m: Matroid, k: int) -> CopyMatroid:
    return CopyMatroid(m, k)


class GateViolation(RuntimeError):
    """A rank query touched an element that has not arrived yet."""


class PrefixGatedOracle:
    """Rank access limited to the arrived prefix, with a query log."""

    def __init__(self, inner: Matroid):
        self.inner = inner
        self.arrived = 0
        self.order: list[int] = []
        self.log: list[tuple[int, int, int]] = []  # (arrival count, query mask, answer)
        self.violations = 0

    @property
    def n(self) -> int:
        return self.inner.n

    def arrive(self, x: int) -> None:
        if not 0 <= x < self.inner.n:
            raise ValueError(f"element {x} outside ground set")
        if self.arrived >> x & 1:
            raise ValueError(f"element {x} arrived twice")
        self.arrived |= 1 << x
        self.order.append(x)

    def rank(self, s) -> int:
        mask = as_mask(s)
        if mask & ~self.arrived:
            self.violations += 1
            raise GateViolation(f"query touches unarrived elements {members(mask & ~self.arrived)}")
        r = self.inner.rank(mask)
        self.log.append((len(self.order), mask, r))
        return r

    def audit(self) -> bool:
        """True iff every logged query stayed inside the prefix known at query time."""
        seen = 0
        arrivals = {}
        for t, x in enumerate(self.order, 1):
            seen |= 1 << x
            arrivals[t] = seen
        return all(mask & ~arrivals.get(t, 0) == 0 for t, mask, _ in self.log) and self.violations == 0


def span(m, s) -> int:
    """Closure of ``s``: every x with rank(S + x) = rank(S)."""
    mask = as_mask(s)
    r = m.rank(mask)
    out = mask
    for x in range(m.n):
        if not mask >> x & 1 and m.rank(mask | 1 << x) == r:
            out |= 1 << x
    return out


def find_circuit(oracle, x: int, arrived) -> int | None:
    """A circuit through ``x`` inside ``arrived``, or None if x is independent of the rest.

    ``oracle`` only needs ``rank``; passing a PrefixGatedOracle keeps the
    search online.  Greedy deletion in increasing id order.
    """
    arr = as_mask(arrived)
    bit = 1 << x
    if not arr & bit:
        raise ValueError(f"element {x} is not in the arrived set")
    rest = arr & ~bit
    if oracle.rank(arr) == oracle.rank(rest) + 1:
        return None
    c = arr
    for y in members(rest):
        trial = c & ~(1 << y)
        # x stays spanned by trial - x
        if oracle.rank(trial) == oracle.rank(trial & ~bit):
            c = trial
    return c


@dataclass
class AxiomReport:
    ok: bool
    axiom: str | None = None
    witness: tuple = ()
    checked: int = 0

    def __bool__(self) -> bool:
        return self.ok


def _axioms_from_table(n: int, table: Sequence[int]) -> AxiomReport:
    if table[0] != 0:
        return AxiomReport(False, "normalization", (0,), 1)
    checked = 1
    full = 1 << n
    for s in range(full):
        rs = table[s]
        for x in range(n):
            bx = 1 << x
            if s & bx:
                continue
            d = table[s | bx] - rs
            checked += 1
            if d not in (0, 1):
                return AxiomReport(False, "unit-increase", (members(s), x), checked)
    # local submodularity is equivalent to full submodularity given unit increase
    for s in range(full):
        rs = table[s]
        for x in range(n):
            bx = 1 << x
            if s & bx:
                continue
            rx = table[s | bx]
            for y in range(x + 1, n):
                by = 1 << y
                if s & by:
                    continue
                checked += 1
                if rx + table[s | by] < table[s | bx | by] + rs:
                    return AxiomReport(False, "submodularity", (members(s | bx), members(s | by)), checked)
    return AxiomReport(True, None, (), checked)


def check_axioms(m: Matroid, cap: int = EXPLICIT_CAP) -> AxiomReport:
    """Exhaustive check of the rank axioms; refuses above ``cap`` elements."""
    if m.n > cap:
        raise ValueError(
            f"{m.name} has {m.n} elements, above the exhaustive cap {cap}; use spot_check_axioms"
        )
    return _axioms_from_table(m.n, m.rank_table())


def spot_check_axioms(m: Matroid, samples: int, rng: np.random.Generator) -> AxiomReport:
    """Randomized check of the local axioms at sampled sets."""
    from .gf2 import random_bits

    n = m.n
    if m.rank(0) != 0:
        return AxiomReport(False, "normalization", (0,), 1)
    for i in range(samples):
        s = random_bits(n, rng)
        outside = [x for x in range(n) if not s >> x & 1]
        if len(outside) < 2:
            continue
        x, y = (int(v) for v in rng.choice(outside, size=2, replace=False))
        rs, rx, ry = m.rank(s), m.rank(s | 1 << x), m.rank(s | 1 << y)
        rxy = m.rank(s | 1 << x | 1 << y)
        if rx - rs not in (0, 1):
            return AxiomReport(False, "unit-increase", (members(s), x), i + 1)
        if rx + ry < rxy + rs:
            return AxiomReport(False, "submodularity", (members(s | 1 << x), members(s | 1 << y)), i + 1)
    return AxiomReport(True, None, (), samples)


@dataclass
class MorphismReport:
    ok: bool
    injective: bool
    witness: list[int] | None = None
    src_rank: int | None = None
    dst_rank: int | None = None
    exhaustive: bool = True

    @property
    def monomorphism(self) -> bool:
        return self.ok and self.injective

    def __bool__(self) -> bool:
        return self.ok


def _image_masks(images: Sequence[int], n: int) -> list[int]:
    out = [0] * (1 << n)
    for s in range(1, 1 << n):
        low = s & -s
        out[s] = out[s ^ low] | 1 << images[low.bit_length() - 1]
    return out


def is_morphism(
    f: Mapping[int, int] | Sequence[int] | Callable[[int], int],
    src: Matroid,
    dst: Matroid,
    cap: int = EXPLICIT_CAP,
    samples: int = 2000,
    rng: np.random.Generator | None = None,
) -> MorphismReport:
    """Does ``f`` preserve rank on every subset of ``src``?

    Exhaustive up to ``cap`` source elements, random subsets beyond.
    """
    if callable(f) and not isinstance(f, (Mapping, Sequence)):
        fmap = [int(f(u)) for u in range(src.n)]
    else:
        fmap = [int(f[u]) for u in range(src.n)]
    for u, v in enumerate(fmap):
        if not 0 <= v < dst.n:
            raise ValueError(f"image {v} of element {u} outside destination ground set")
    injective = len(set(fmap)) == len(fmap)
    if src.n <= cap:
        distinct = sorted(set(fmap))
        pos = {v: i for i, v in enumerate(distinct)}
        local = [pos[v] for v in fmap]
        img_table = restrict(dst, distinct).rank_table()
        src_table = src.rank_table()
        masks = _image_masks(local, src.n)
        for s in range(1 << src.n):
            if src_table[s] != img_table[masks[s]]:
                return MorphismReport(False, injective, members(s), src_table[s], img_table[masks[s]])
        return MorphismReport(True, injective)
    rng = rng or np.random.default_rng(0)
    from .gf2 import random_bits

    for _ in range(samples):
        s = random_bits(src.n, rng)
        img = 0
        for u in members(s):
            img |= 1 << fmap[u]
        rs, rd = src.rank(s), dst.rank(img)
        if rs != rd:
            return MorphismReport(False, injective, members(s), rs, rd, exhaustive=False)
    return MorphismReport(True, injective, exhaustive=False)


def greedy_max_weight_basis(m: Matroid, weights: Sequence[float]) -> tuple[int, float]:
    """Max-weight independent set via the matroid greedy algorithm.

    Zero weights are skipped; ties go to the lower id.
    """
    order = sorted(range(m.n), key=lambda u: (-weights[u], u))
    chosen, total, r = 0, 0.0, 0
    for u in order:
        if weights[u] <= 0:
            break
        cand = chosen | 1 << u
        rc = m.rank(cand)
        if rc > r:
            chosen, r = cand, rc
            total += weights[u]
    return chosen, total
