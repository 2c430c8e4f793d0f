"""Online matroid morphisms/embeddings.

An embedder run sees one arrival at a time through a PrefixGatedOracle and
commits the image of that element immediately; earlier images never change.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from typing import Callable, Sequence

import numpy as np

from .gf2 import GF2Matrix, gf2_rank, mat_vec, random_invertible
from .gfp import _Echelon, gfp_rank, random_vector_in_span, smallest_prime_above
from .matroids import (
    CompleteBinaryMatroid,
    CopyMatroid,
    FreeMatroid,
    LinearMatroid,
    Matroid,
    PrefixGatedOracle,
    TrivialMatroid,
    UniformMatroid,
    as_mask,
    direct_sum,
    find_circuit,
    members,
)

__all__ = [
    "EmbeddingError",
    "PromiseViolation",
    "NotBinaryError",
    "LaminarEmbeddingError",
    "AlignmentError",
    "BinaryOMM",
    "Rank1OMM",
    "Rank2OMM",
    "FreeOMM",
    "LaminarOME",
    "Automorphism",
    "CopyLift",
    "EmbeddingScheme",
    "EmbeddingRecord",
    "run_embedding",
    "replay_prefixes",
    "copy_lift",
    "randomize_order_independent",
    "solve_alignment",
    "binary_scheme",
    "rank1_scheme",
    "rank2_scheme",
    "free_scheme",
    "laminar_scheme",
    "SCHEMES",
    "image_matroid",
]


class EmbeddingError(RuntimeError):
    pass


class PromiseViolation(EmbeddingError):
    """The source matroid is outside the class the embedder was promised."""


class NotBinaryError(PromiseViolation):
    pass


class LaminarEmbeddingError(PromiseViolation):
    pass


class AlignmentError(EmbeddingError):
    pass


def _audit(gate: PrefixGatedOracle, images: dict, rank_images: Callable[[list], int], what: str) -> None:
    """Exhaustive morphism check on the arrived prefix (up to 12 elements)."""
    arrived = gate.order
    if len(arrived) > 12:
        arrived_sets = [as_mask(arrived)]
    else:
        arrived_sets = range(1 << len(arrived))
    for local in arrived_sets:
        if len(arrived) > 12:
            s = local
            els = arrived
        else:
            els = [arrived[i] for i in members(local)]
            s = as_mask(els)
        rs = gate.rank(s)
        rd = rank_images([images[u] for u in els])
        if rs != rd:
            raise PromiseViolation(f"{what}: prefix map not rank preserving on {sorted(els)} ({rs} vs {rd})")


class BinaryOMM:
    """Online morphism of a binary matroid into F_2^dim.

    Independent arrivals get the next standard basis vector; a dependent
    arrival gets the XOR of the images of the rest of its circuit.
    """

    kind = "binary"

    def __init__(self, dim: int, audit: bool = False):
        self.dim = dim
        self.audit = audit
        self.k = 0
        self.images: dict[int, int] = {}
        self._basis = 0  # arrived elements that received e_k

    @property
    def host(self) -> Matroid:
        return CompleteBinaryMatroid(self.dim)

    def step(self, gate: PrefixGatedOracle, a: int) -> int:
        c = find_circuit(gate, a, self._basis | 1 << a)
        if c is None:
            if self.k >= self.dim:
                raise NotBinaryError(f"rank exceeds host dimension {self.dim}")
            img = 1 << self.k
            self.k += 1
            self._basis |= 1 << a
        else:
            img = 0
            for u in members(c & ~(1 << a)):
                img ^= self.images[u]
        self.images[a] = img
        if self.audit:
            try:
                _audit(gate, self.images, gf2_rank, "binary OMM")
            except PromiseViolation as exc:
                raise NotBinaryError(f"source is not binary: {exc}") from None
        return img


class Rank1OMM:
    """Rank <= 1 sources into U_{1,1} + T: host id 0 is the loop, 1 the other element."""

    kind = "index"

    def __init__(self):
        self.images: dict[int, int] = {}
        self._nonloop: int | None = None

    @property
    def host(self) -> Matroid:
        return direct_sum(TrivialMatroid(1), UniformMatroid(1, 1))

    def step(self, gate: PrefixGatedOracle, a: int) -> int:
        img = 1 if gate.rank(1 << a) == 1 else 0
        if img:
            if self._nonloop is None:
                self._nonloop = a
            elif gate.rank(1 << a | 1 << self._nonloop) != 1:
                raise PromiseViolation("source has rank above 1")
        self.images[a] = img
        return img


class Rank2OMM:
    """Rank <= 2 sources into U_{n,2} + T: host id 0 is the loop, 1..n the rest."""

    kind = "index"

    def __init__(self, n: int):
        self.n = n
        self.images: dict[int, int] = {}
        self._reps: list[int] = []  # one non-loop per parallel class, in arrival order

    @property
    def host(self) -> Matroid:
        return direct_sum(TrivialMatroid(1), UniformMatroid(self.n, 2))

    def step(self, gate: PrefixGatedOracle, a: int) -> int:
        if gate.rank(1 << a) == 0:
            img = 0
        else:
            # loops never count as parallel partners
            img = None
            for b in self._reps:
                if gate.rank(1 << a | 1 << b) == 1:
                    img = self.images[b]
                    break
            if img is None:
                if len(self._reps) >= 2 and gate.rank(1 << a | 1 << self._reps[0] | 1 << self._reps[1]) > 2:
                    raise PromiseViolation("source has rank above 2")
                if len(self._reps) >= self.n:
                    raise EmbeddingError(f"more than {self.n} parallel classes")
                img = len(self._reps) + 1
                self._reps.append(a)
        self.images[a] = img
        return img


class FreeOMM:
    """Free matroids into Fr_n: the s-th arrival goes to host element s-1."""

    kind = "index"

    def __init__(self, n: int):
        self.n = n
        self.images: dict[int, int] = {}

    @property
    def host(self) -> Matroid:
        return FreeMatroid(self.n)

    def step(self, gate: PrefixGatedOracle, a: int) -> int:
        t = len(self.images)
        if t >= self.n:
            raise EmbeddingError(f"more than {self.n} arrivals")
        if gate.rank(gate.arrived) != t + 1:
            raise PromiseViolation("source is not a free matroid")
        self.images[a] = t
        return t


class LaminarOME:
    """Online morphism of a laminar matroid into GF(p)^n with p > 2^n.

    Images are tuples of residues mod p.
    """

    kind = "gfp"
    RETRIES = 64

    def __init__(self, n: int, rng: np.random.Generator, p: int | None = None, audit: bool = False):
        if n > 30:
            raise ValueError("laminar OME supports n <= 30")
        self.n = n
        self.p = p if p is not None else smallest_prime_above(1 << n)
        if self.p <= 1 << n:
            raise ValueError("field must have more than 2^n elements")
        self.rng = rng
        self.audit = audit
        self.k = 0
        self.images: dict[int, tuple[int, ...]] = {}
        self.fallbacks = 0
        self.attempts = 0

    @property
    def host(self) -> str:
        return f"GF({self.p})^{self.n}"

    def _unit(self, i: int) -> tuple[int, ...]:
        return tuple(1 if j == i else 0 for j in range(self.n))

    def _circuit_flat(self, gate: PrefixGatedOracle, u: int) -> int:
        """Intersection of span(C) over arrived circuits C through u."""
        prev = members(gate.arrived & ~(1 << u))
        ubit = 1 << u
        spans = []
        # circuits C = S + u: S independent, u in span(S), no proper subset of S spans u
        remainders: list[int] = []

        def dfs(start: int, s: int, size: int) -> None:
            for idx in range(start, len(prev)):
                t = s | 1 << prev[idx]
                if any(r & t == r for r in remainders):
                    continue
                if gate.rank(t) != size + 1:
                    continue
                if gate.rank(t | ubit) == size + 1:
                    # t is independent, so t + u holds exactly one circuit
                    c = find_circuit(gate, u, t | ubit)
                    rem = c & ~ubit
                    if rem not in remainders:
                        remainders.append(rem)
                    continue
                dfs(idx + 1, t, size + 1)

        if gate.rank(ubit) == 0:
            remainders.append(0)
        else:
            dfs(0, 0, 0)
        arrived = gate.arrived
        flat = arrived
        for r in remainders:
            c = r | ubit
            rc = gate.rank(c)
            sp = c
            for y in members(arrived & ~c):
                if gate.rank(c | 1 << y) == rc:
                    sp |= 1 << y
            spans.append(sp)
            flat &= sp
        return flat

    def _blocking_sets(self, gate: PrefixGatedOracle, u: int) -> list[int]:
        """Maximal arrived S with S + u independent."""
        prev = members(gate.arrived & ~(1 << u))
        r = gate.rank(gate.arrived)
        ubit = 1 << u
        out = []
        for combo in itertools.combinations(prev, r - 1):
            s = as_mask(combo)
            if gate.rank(s | ubit) == r:
                out.append(s)
        return out

    def step(self, gate: PrefixGatedOracle, u: int) -> tuple[int, ...]:
        p = self.p
        arrived = gate.arrived
        prev = arrived & ~(1 << u)
        if gate.rank(arrived) == gate.rank(prev) + 1:
            if self.k >= self.n:
                raise LaminarEmbeddingError(f"rank exceeds host dimension {self.n}")
            img = self._unit(self.k)
            self.k += 1
        else:
            flat = self._circuit_flat(gate, u)
            span_src = [self.images[y] for y in members(flat & ~(1 << u))]
            ech = _Echelon(p)
            basis = []
            for v in span_src:
                if ech.add(v):
                    basis.append(v)
            if not basis:
                img = tuple([0] * self.n)
            else:
                blockers = [[self.images[y] for y in members(s)] for s in self._blocking_sets(gate, u)]
                blocker_ranks = [gfp_rank(b, p) if b else 0 for b in blockers]

                def valid(v) -> bool:
                    if not any(v):
                        return False
                    return all(
                        gfp_rank(b + [v], p) == rb + 1 for b, rb in zip(blockers, blocker_ranks)
                    )

                img = None
                for _ in range(self.RETRIES):
                    self.attempts += 1
                    v = random_vector_in_span(basis, p, self.rng)
                    if valid(v):
                        img = v
                        break
                if img is None:
                    self.fallbacks += 1
                    img = self._fallback(basis, valid)
        self.images[u] = img
        if self.audit:
            _audit(gate, self.images, lambda vs: gfp_rank(vs, p) if vs else 0, "laminar OME")
        return img

    def _fallback(self, basis, valid) -> tuple[int, ...]:
        p, dim = self.p, self.n
        for bound in range(1, 8):
            for coeffs in itertools.product(range(1, bound + 1), repeat=len(basis)):
                if max(coeffs) != bound:
                    continue
                v = [0] * dim
                for c, b in zip(coeffs, basis):
                    for j in range(dim):
                        v[j] = (v[j] + c * b[j]) % p
                v = tuple(v)
                if valid(v):
                    return v
        raise LaminarEmbeddingError("no admissible image found: source not laminar or field too small")


class Automorphism:
    """Wraps an embedder and applies a fixed host automorphism to each image."""

    def __init__(self, inner, act: Callable[[int], int], label: str = ""):
        self.inner = inner
        self.act = act
        self.label = label
        self.kind = inner.kind
        self.images: dict[int, int] = {}

    @property
    def host(self):
        return self.inner.host

    def step(self, gate: PrefixGatedOracle, a: int) -> int:
        img = self.act(self.inner.step(gate, a))
        self.images[a] = img
        return img


class CopyLift:
    """Turn a morphism into a monomorphism by spreading parallel images over copies.

    Host element (v, j) has id ``v * k + j``.  ``rng`` switches on a uniformly
    random relabeling of the copies of each host element.
    """

    def __init__(self, inner, k: int, rng: np.random.Generator | None = None):
        self.inner = inner
        self.k = k
        self.rng = rng
        self.kind = inner.kind
        self.images: dict[int, int] = {}
        self._used: dict[int, int] = {}
        self._perm: dict[int, np.ndarray] = {}

    @property
    def host(self) -> CopyMatroid:
        return CopyMatroid(self.inner.host, self.k)

    def step(self, gate: PrefixGatedOracle, a: int) -> int:
        v = self.inner.step(gate, a)
        j = self._used.get(v, 0)
        if j >= self.k:
            raise EmbeddingError(f"more than {self.k} arrivals mapped to host element {v}")
        self._used[v] = j + 1
        if self.rng is not None:
            if v not in self._perm:
                self._perm[v] = self.rng.permutation(self.k)
            j = int(self._perm[v][j])
        img = v * self.k + j
        self.images[a] = img
        return img


def copy_lift(make_inner: Callable[[np.random.Generator], object], k: int, randomize: bool = False):
    """Factory for the copy-lifted embedder; lifting turns an OMM into an OME."""

    def make(rng: np.random.Generator):
        return CopyLift(make_inner(rng), k, rng if randomize else None)

    return make


def randomize_order_independent(
    make_inner: Callable[[np.random.Generator], object],
    sample_automorphism: Callable[[np.random.Generator], Callable[[int], int]],
):
    """Compose each run with a host automorphism drawn once at stream start."""

    def make(rng: np.random.Generator):
        act = sample_automorphism(rng)
        return Automorphism(make_inner(rng), act)

    return make


def _gl_sampler(dim: int):
    def sample(rng: np.random.Generator):
        a = random_invertible(dim, rng)
        return a.__call__

    return sample


def _perm_sampler(size: int, offset: int = 0):
    """Random permutation of host ids offset..offset+size-1, fixing the rest."""

    def sample(rng: np.random.Generator):
        perm = rng.permutation(size)

        def act(x: int) -> int:
            if offset <= x < offset + size:
                return offset + int(perm[x - offset])
            return x

        return act

    return sample


@dataclass
class EmbeddingScheme:
    """A (possibly randomized) online embedding for a matroid class.

    ``make(rng)`` starts a fresh run; ``host`` is the target matroid.
    """

    name: str
    n: int
    host: Matroid | str
    make: Callable[[np.random.Generator], object]
    order_independent: bool = False
    injective: bool = False


def binary_scheme(n: int, dim: int | None = None, lift: bool = True, randomize: bool = True, audit: bool = False) -> EmbeddingScheme:
    dim = n if dim is None else dim
    make = lambda rng: BinaryOMM(dim, audit=audit)
    if randomize:
        make = randomize_order_independent(make, _gl_sampler(dim))
    host: Matroid = CompleteBinaryMatroid(dim)
    if lift:
        make = copy_lift(make, n, randomize=randomize)
        host = CopyMatroid(host, n)
    return EmbeddingScheme(f"binary(n={n},dim={dim})", n, host, make, randomize, lift)


def rank1_scheme(n: int, lift: bool = True, randomize: bool = True) -> EmbeddingScheme:
    make = lambda rng: Rank1OMM()
    host: Matroid = direct_sum(TrivialMatroid(1), UniformMatroid(1, 1))
    if lift:
        make = copy_lift(make, n, randomize=randomize)
        host = CopyMatroid(host, n)
    # images do not depend on order; only copy indices do
    return EmbeddingScheme(f"rank1(n={n})", n, host, make, randomize or not lift, lift)


def rank2_scheme(n: int, lift: bool = True, randomize: bool = True) -> EmbeddingScheme:
    make = lambda rng: Rank2OMM(n)
    if randomize:
        make = randomize_order_independent(make, _perm_sampler(n, offset=1))
    host: Matroid = direct_sum(TrivialMatroid(1), UniformMatroid(n, 2))
    if lift:
        make = copy_lift(make, n, randomize=randomize)
        host = CopyMatroid(host, n)
    return EmbeddingScheme(f"rank2(n={n})", n, host, make, randomize, lift)


def free_scheme(n: int, randomize: bool = True) -> EmbeddingScheme:
    make = lambda rng: FreeOMM(n)
    if randomize:
        make = randomize_order_independent(make, _perm_sampler(n))
    return EmbeddingScheme(f"free(n={n})", n, FreeMatroid(n), make, randomize, True)


def laminar_scheme(n: int, audit: bool = False) -> EmbeddingScheme:
    p = smallest_prime_above(1 << n)
    make = lambda rng: LaminarOME(n, rng, p=p, audit=audit)
    return EmbeddingScheme(f"laminar(n={n})", n, f"GF({p})^{n}", make, False, False)


SCHEMES = {
    "binary": binary_scheme,
    "rank1": rank1_scheme,
    "rank2": rank2_scheme,
    "free": free_scheme,
    "laminar": laminar_scheme,
}


def _host_kind(embedder) -> tuple[str, int, int]:
    """(element kind, copies, p) for record descriptors."""
    k = 0
    e = embedder
    while True:
        if isinstance(e, CopyLift):
            k = e.k
            e = e.inner
        elif isinstance(e, Automorphism):
            e = e.inner
        else:
            break
    p = getattr(e, "p", 2)
    return e.kind, k, p


def _describe(x, kind: str, copies: int, dim: int) -> str:
    if copies:
        v, j = divmod(x, copies)
        return f"{_describe(v, kind, 0, dim)}/{j}"
    if kind == "binary":
        return "".join(str(x >> i & 1) for i in range(dim))
    if kind == "gfp":
        return "[" + ",".join(map(str, x)) + "]"
    return str(x)


def _parse(desc: str, kind: str, copies: int):
    if copies:
        base, j = desc.rsplit("/", 1)
        return _parse(base, kind, 0) * copies + int(j)
    if kind == "binary":
        return int(desc[::-1], 2) if desc else 0
    if kind == "gfp":
        return tuple(int(t) for t in desc.strip("[]").split(",") if t)
    return int(desc)


@dataclass
class EmbeddingRecord:
    """The arrival-ordered pairs (source element, host element) of one run."""

    pairs: list[tuple[int, object]]
    host: str
    kind: str = "index"
    copies: int = 0
    dim: int = 0
    seed: int | None = None
    gate_ok: bool = True
    p: int = 2

    @property
    def mapping(self) -> dict[int, object]:
        return dict(self.pairs)

    def images(self, n: int) -> list:
        m = self.mapping
        return [m[u] for u in range(n)]

    def to_text(self) -> str:
        lines = [
            f"# host {self.host}",
            f"# kind={self.kind} copies={self.copies} dim={self.dim} p={self.p}",
            f"# seed {self.seed if self.seed is not None else 'none'}",
        ]
        for t, (src, img) in enumerate(self.pairs):
            lines.append(f"step {t} src={src} img={_describe(img, self.kind, self.copies, self.dim)}")
        return "\n".join(lines) + "\n"

    @classmethod
    def from_text(cls, text: str) -> "EmbeddingRecord":
        host, seed = "", None
        meta: dict[str, str] = {}
        pairs = []
        for ln in text.splitlines():
            ln = ln.strip()
            if ln.startswith("# host "):
                host = ln[len("# host "):]
            elif ln.startswith("# seed "):
                s = ln[len("# seed "):]
                seed = None if s == "none" else int(s)
            elif ln.startswith("# kind="):
                meta = dict(tok.split("=", 1) for tok in ln[2:].split())
            elif ln.startswith("step "):
                fields = dict(tok.split("=", 1) for tok in ln.split()[2:])
                pairs.append((int(fields["src"]), fields["img"]))
        kind, copies = meta.get("kind", "index"), int(meta.get("copies", 0))
        pairs = [(s, _parse(d, kind, copies)) for s, d in pairs]
        return cls(pairs, host, kind, copies, int(meta.get("dim", 0)), seed, True, int(meta.get("p", 2)))


def run_embedding(matroid: Matroid, order: Sequence[int], embedder, seed: int | None = None) -> EmbeddingRecord:
    """Stream ``order`` through ``embedder`` behind a prefix gate."""
    gate = PrefixGatedOracle(matroid)
    pairs = []
    for a in order:
        gate.arrive(int(a))
        pairs.append((int(a), embedder.step(gate, int(a))))
    kind, copies, p = _host_kind(embedder)
    host = embedder.host
    host_name = host if isinstance(host, str) else host.name
    inner = embedder
    while hasattr(inner, "inner"):
        inner = inner.inner
    dim = getattr(inner, "dim", getattr(inner, "n", 0))
    return EmbeddingRecord(pairs, host_name, kind, copies, dim, seed, gate.audit(), p)


def replay_prefixes(matroid: Matroid, order: Sequence[int], make: Callable[[np.random.Generator], object], seed: int) -> bool:
    """Re-run every truncation of ``order`` with the same seed and compare images."""
    full = run_embedding(matroid, order, make(np.random.default_rng(seed)), seed)
    for t in range(len(order) + 1):
        part = run_embedding(matroid, order[:t], make(np.random.default_rng(seed)), seed)
        if part.pairs != full.pairs[:t]:
            return False
    return True


def image_matroid(images: Sequence, p: int = 2) -> tuple[LinearMatroid, list[int]]:
    """Linear matroid on the distinct image vectors, plus the element -> column map."""
    distinct = list(dict.fromkeys(images))
    pos = {v: i for i, v in enumerate(distinct)}
    if p == 2:
        dim = max((v.bit_length() for v in distinct), default=0)
        lm = LinearMatroid(distinct, 2, dim)
    else:
        lm = LinearMatroid(distinct, p)
    return lm, [pos[v] for v in images]


def solve_alignment(f: Sequence[int], g: Sequence[int], dim: int) -> GF2Matrix:
    """Invertible A over GF(2) with A g(u) = f(u) for every u."""
    if len(f) != len(g):
        raise ValueError("f and g must cover the same elements")
    # elements whose g-images form a basis of span(g)
    chosen: list[int] = []
    ech: dict[int, int] = {}
    for u, v in enumerate(g):
        w = v
        while w:
            piv = (w & -w).bit_length() - 1
            if piv not in ech:
                ech[piv] = w
                chosen.append(u)
                break
            w ^= ech[piv]
    src = [g[u] for u in chosen]
    dst = [f[u] for u in chosen]
    if gf2_rank(dst) != len(dst):
        raise AlignmentError(f"f-images of a g-basis are dependent: elements {chosen}")

    def complete(vecs: list[int]) -> list[int]:
        out = list(vecs)
        for i in range(dim):
            if gf2_rank(out + [1 << i]) > len(out):
                out.append(1 << i)
        return out

    gmat = GF2Matrix(complete(src), dim)
    fmat = GF2Matrix(complete(dst), dim)
    a = fmat @ gmat.inverse()
    for u, (fu, gu) in enumerate(zip(f, g)):
        if mat_vec(a, gu) != fu:
            raise AlignmentError(f"no automorphism aligns the maps: element {u} has f={fu:#x}, A g={mat_vec(a, gu):#x}")
    return a
