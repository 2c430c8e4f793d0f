"""Finite witnesses behind the no-host results.

Each search is exhaustive inside declared bounds and reports how many
candidates it examined.  "No counterexample within bounds" is all a search
can say; it mirrors, not proves, the general statement.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field

import numpy as np

from .gfp import det_mod, gfp_rank
from .matroids import (
    GraphicMatroid,
    LaminarMatroid,
    LinearMatroid,
    Matroid,
    members,
    restrict,
    UniformMatroid,
)

__all__ = [
    "M1_COLUMNS",
    "M2_COLUMNS",
    "LABELS",
    "Rank3Fixture",
    "rank3_fixture",
    "graphic_fixture",
    "laminar_fixtures",
    "FixtureReport",
    "verify_fixture",
    "verify_graphic_fixture",
    "verify_laminar_fixtures",
    "SearchReport",
    "rank3_extension_search",
    "graphic_host_search",
    "laminar_host_search",
    "ContradictionAlarm",
]

LABELS = "abcdefg"
# columns a..g over GF(7)
M1_COLUMNS = [(0, 1, 2), (2, 1, 0), (1, 2, 0), (1, 0, 2), (2, 0, 1), (0, 2, 1), (1, 1, 1)]
M2_COLUMNS = [(0, 1, 2), (2, 1, 0), (1, 2, 0), (1, 0, 2), (2, 0, 1), (0, 1, 1), (1, 1, 1)]


class ContradictionAlarm(AssertionError):
    """A search found an object the impossibility argument rules out."""


def _ids(names: str) -> list[int]:
    return [LABELS.index(c) for c in names]


@dataclass
class Rank3Fixture:
    name: str
    columns: list[tuple[int, int, int]]
    p: int
    dependent: list[str]
    independent: list[str]

    def matroid(self) -> LinearMatroid:
        return LinearMatroid(self.columns, self.p, 3, name=self.name)


def rank3_fixture(which: int, p: int = 7) -> Rank3Fixture:
    if which == 1:
        return Rank3Fixture("M1", list(M1_COLUMNS), p, ["abg", "cdg", "efg"], [])
    if which == 2:
        return Rank3Fixture("M2", list(M2_COLUMNS), p, ["abg", "cdg"], ["efg"])
    raise ValueError("fixture is 1 or 2")


def graphic_fixture(which: str) -> GraphicMatroid:
    """Left: K4 with a,b,c at a common vertex.  Right: the 4-cycle a,b,c,g."""
    if which == "left":
        # a b c d e f
        return GraphicMatroid(4, [(0, 1), (0, 2), (0, 3), (1, 2), (2, 3), (3, 1)], name="K4")
    if which == "right":
        # a b c g
        return GraphicMatroid(4, [(0, 1), (1, 2), (2, 3), (3, 0)], name="C4")
    raise ValueError("which is 'left' or 'right'")


def laminar_fixtures() -> list[LaminarMatroid]:
    """U_{3,2}(S + d) (+) U_{1,1}(x) on a,b,c,d for each 2-subset S of a,b,c; d has id 3."""
    out = []
    for x in range(3):
        s = [i for i in range(3) if i != x] + [3]
        out.append(LaminarMatroid(4, [(s, 2)], name=f"U32({''.join(LABELS[i] for i in s[:2])}d)+U11({LABELS[x]})"))
    return out


@dataclass
class FixtureReport:
    ok: bool
    checks: list[tuple[str, bool]]
    witness: tuple | None = None

    def to_text(self) -> str:
        lines = [f"{'ok ' if good else 'FAIL'} {what}" for what, good in self.checks]
        if self.witness is not None:
            lines.append(f"witness: {self.witness}")
        return "\n".join(lines)


def _same_tables(a: Matroid, b: Matroid) -> int | None:
    """First subset where the rank tables differ, or None."""
    ta, tb = a.rank_table(), b.rank_table()
    for s, (x, y) in enumerate(zip(ta, tb)):
        if x != y:
            return s
    return None


def verify_fixture(f1: Rank3Fixture | None = None, f2: Rank3Fixture | None = None) -> FixtureReport:
    """Stated dependencies by determinant, U_{6,3} prefix, and prefix equality."""
    f1 = f1 or rank3_fixture(1)
    f2 = f2 or rank3_fixture(2)
    checks: list[tuple[str, bool]] = []
    witness = None
    for fx in (f1, f2):
        for t in fx.dependent:
            d = det_mod([fx.columns[i] for i in _ids(t)], fx.p)
            checks.append((f"{fx.name}: det({','.join(t)}) = {d} mod {fx.p}, dependent", d == 0))
        for t in fx.independent:
            d = det_mod([fx.columns[i] for i in _ids(t)], fx.p)
            checks.append((f"{fx.name}: det({','.join(t)}) = {d} mod {fx.p}, independent", d != 0))
        prefix = restrict(fx.matroid(), range(6))
        bad = _same_tables(prefix, UniformMatroid(6, 3))
        checks.append((f"{fx.name}: restriction to a..f is U_6,3", bad is None))
        if bad is not None and witness is None:
            witness = (fx.name, [LABELS[i] for i in members(bad)])
        # a..f in general position
        gp = all(det_mod([fx.columns[i] for i in t], fx.p) for t in itertools.combinations(range(6), 3))
        checks.append((f"{fx.name}: a..f in general position", gp))
    bad = _same_tables(restrict(f1.matroid(), range(6)), restrict(f2.matroid(), range(6)))
    checks.append(("M1 and M2 agree on every subset of a..f", bad is None))
    if bad is not None and witness is None:
        witness = ("prefix", [LABELS[i] for i in members(bad)])
    return FixtureReport(all(ok for _, ok in checks), checks, witness)


def verify_graphic_fixture() -> FixtureReport:
    left, right = graphic_fixture("left"), graphic_fixture("right")
    checks = []
    for t in ("abd", "bce", "acf"):
        ids = _ids(t)
        s = sum(1 << i for i in ids)
        circuit = left.rank(s) == 2 and all(left.rank(s & ~(1 << i)) == 2 for i in ids)
        checks.append((f"left: {{{','.join(t)}}} is a circuit", circuit))
    checks.append(("right: {a,b,c,g} is a circuit", right.rank(0b1111) == 3 and all(right.rank(0b1111 & ~(1 << i)) == 3 for i in range(4))))
    bad = _same_tables(restrict(left, range(3)), restrict(right, range(3)))
    checks.append(("left and right agree on {a,b,c} (free)", bad is None and left.rank(0b111) == 3))
    return FixtureReport(all(ok for _, ok in checks), checks)


def verify_laminar_fixtures() -> FixtureReport:
    checks = []
    for m in laminar_fixtures():
        checks.append((f"{m.name}: restriction to a,b,c is free", m.rank(0b111) == 3))
        checks.append((f"{m.name}: rank 3 with one 3-circuit through d", m.full_rank() == 3))
    return FixtureReport(all(ok for _, ok in checks), checks)


@dataclass
class SearchReport:
    which: str
    bounds: dict
    examined: int
    found: int
    skipped: int = 0
    extra: dict = field(default_factory=dict)

    @property
    def ok(self) -> bool:
        return self.found == 0

    def to_text(self) -> str:
        b = " ".join(f"{k}={v}" for k, v in self.bounds.items())
        unit = {"rank3": "satisfying pairs", "graphic": "simultaneous hosts", "laminar": "simultaneous hosts"}[self.which]
        lines = [f"search: {self.which} ({b})", f"{self.found} {unit} / {self.examined:,} examined"]
        if self.skipped:
            lines.append(f"skipped: {self.skipped}")
        for k, v in self.extra.items():
            lines.append(f"{k}: {v}")
        lines.append("verdict: " + ("no counterexample within bounds" if self.ok else "COUNTEREXAMPLE FOUND"))
        return "\n".join(lines)


def _general_position(vecs, p: int) -> bool:
    return all(det_mod(t, p) for t in itertools.combinations(vecs, 3))


def _pattern_ok(dets: np.ndarray, nonzero: np.ndarray, dependent: list[int], pairs: int) -> np.ndarray:
    """Candidates whose triple pattern with the prefix pairs is exactly ``dependent``."""
    want = np.zeros(pairs, dtype=bool)
    want[dependent] = True
    return nonzero & np.all((dets == 0) == want[:, None], axis=0)


def rank3_extension_search(
    q: int = 7,
    m: int = 3,
    prefix_samples: int = 100,
    rng: np.random.Generator | None = None,
    prefixes: list | None = None,
) -> SearchReport:
    """Look for a shared U_{6,3} prefix in GF(q)^m admitting both the M1 and the M2 extension.

    Each candidate g must reproduce the full rank pattern of the fixture:
    nonzero, and the triple {X,Y,g} dependent exactly for the listed pairs.
    """
    if m != 3:
        raise ValueError("the fixtures live in rank 3; only m=3 is supported")
    rng = rng if rng is not None else np.random.default_rng(0)
    cand = np.array(list(itertools.product(range(q), repeat=m)), dtype=np.int64)  # q^m x 3
    nonzero = cand.any(axis=1)
    pair_list = list(itertools.combinations(range(6), 2))
    idx = {pr: i for i, pr in enumerate(pair_list)}
    dep1 = [idx[(0, 1)], idx[(2, 3)], idx[(4, 5)]]
    dep2 = [idx[(0, 1)], idx[(2, 3)]]
    ab_cd = [idx[(0, 1)], idx[(2, 3)]]
    examined = found = skipped = near = chain = 0
    samples = list(prefixes) if prefixes is not None else []
    while len(samples) < prefix_samples and prefixes is None:
        vecs = [tuple(int(x) for x in rng.integers(0, q, size=3)) for _ in range(6)]
        if _general_position(vecs, q):
            samples.append(vecs)
        else:
            skipped += 1
    for vecs in samples:
        if not _general_position(vecs, q):
            skipped += 1
            continue
        P = np.array(vecs, dtype=np.int64)
        cross = np.array([np.cross(P[i], P[j]) for i, j in pair_list]) % q
        dets = (cross @ cand.T) % q  # 15 x q^3
        ok1 = _pattern_ok(dets, nonzero, dep1, len(pair_list))
        ok2 = _pattern_ok(dets, nonzero, dep2, len(pair_list))
        # every (G1, G2) pair
        both = np.outer(ok1, ok2)
        examined += both.size
        found += int(both.sum())
        # near misses: G1, G2 both on lines AB and CD
        on_lines = nonzero & np.all(dets[ab_cd] == 0, axis=0)
        g_idx = np.nonzero(on_lines)[0]
        ef = cross[idx[(4, 5)]]
        for i1 in g_idx:
            for i2 in g_idx:
                near += 1
                g1, g2 = tuple(int(x) for x in cand[i1]), tuple(int(x) for x in cand[i2])
                if gfp_rank([g1, g2], q) != 1:
                    raise ContradictionAlarm(f"rank(G1,G2) != 1 for prefix {vecs}")
                if int(ef @ cand[i1]) % q == 0:
                    chain += 1
                    if gfp_rank([vecs[4], vecs[5], g1, g2], q) > 2:
                        raise ContradictionAlarm(f"rank(E,F,G1,G2) > 2 for prefix {vecs}")
    if found:
        raise ContradictionAlarm(f"{found} satisfying pairs found")
    return SearchReport(
        "rank3",
        {"q": q, "m": m, "prefixes": len(samples)},
        examined,
        found,
        skipped,
        {"near_misses": near, "chain_checks": chain},
    )


def _edge_rank(edges) -> int:
    parent: dict[int, int] = {}

    def find(x):
        while parent.get(x, x) != x:
            x = parent[x]
        return x

    r = 0
    for u, v in edges:
        a, b = find(u), find(v)
        if a != b:
            parent[a] = b
            r += 1
    return r


def _realizes(edges, target_table) -> bool:
    n = len(edges)
    for s in range(1 << n):
        if _edge_rank([edges[i] for i in range(n) if s >> i & 1]) != target_table[s]:
            return False
    return True


def graphic_host_search(max_vertices: int = 6) -> SearchReport:
    """All placements of a',b',c' as independent edges; look for completions of both graphs."""
    if not 3 <= max_vertices <= 8:
        raise ValueError("max_vertices must lie in 3..8")
    left = graphic_fixture("left").rank_table()
    right = graphic_fixture("right").rank_table()
    edges = list(itertools.combinations(range(max_vertices), 2))
    examined = found = left_ok = right_ok = 0
    non_star = 0
    for abc in itertools.product(edges, repeat=3):
        if _edge_rank(abc) != 3:
            continue
        examined += 1
        # each of d', e', f' closes one triangle, so try them one at a time first
        cands = []
        for pair in ((0, 1), (1, 2), (0, 2)):
            x, y = abc[pair[0]], abc[pair[1]]
            cands.append([e for e in edges if _edge_rank([x, y, e]) == 2 and _edge_rank([x, e]) == 2 and _edge_rank([y, e]) == 2])
        has_left = any(_realizes(list(abc) + [d, e, f], left) for d, e, f in itertools.product(*cands))
        has_right = any(_realizes(list(abc) + [g], right) for g in edges)
        left_ok += has_left
        right_ok += has_right
        if has_left:
            common = set(abc[0]) & set(abc[1]) & set(abc[2])
            if not common:
                non_star += 1
        if has_left and has_right:
            found += 1
    if found or non_star:
        raise ContradictionAlarm(f"{found} simultaneous hosts, {non_star} left completions without a shared endpoint")
    return SearchReport(
        "graphic",
        {"max_vertices": max_vertices},
        examined,
        found,
        extra={"left_completable": left_ok, "right_completable": right_ok, "left_without_common_endpoint": non_star},
    )


def _laminar_families(g: int, max_family: int, rejected: list[int]):
    """Laminar families on range(g) keeping 0, 1, 2 independent.

    Families are tuples of (mask, cap) with cap < |mask| and masks increasing.
    Families extending a prefix-rejecting one are pruned; ``rejected[0]``
    counts the pruned roots.
    """
    masks = list(range(1, 1 << g))
    sizes = [bin(s).count("1") for s in range(1 << g)]

    def rec(start: int, chosen: list[tuple[int, int]]):
        yield tuple(chosen)
        if len(chosen) == max_family:
            return
        for i in range(start, len(masks)):
            a = masks[i]
            if all(a & b == 0 or a & b == a or a & b == b for b, _ in chosen):
                # caps below |A & {0,1,2}| make the prefix dependent; counted, not expanded
                low = sizes[a & 0b111]
                for cap in range(sizes[a]):
                    if cap < low:
                        rejected[0] += 1
                        continue
                    chosen.append((a, cap))
                    yield from rec(i + 1, chosen)
                    chosen.pop()

    yield from rec(0, [])


def laminar_host_search(max_ground: int = 6, max_family: int = 4) -> SearchReport:
    """Laminar hosts on at most ``max_ground`` elements with at most ``max_family`` constrained sets.

    a', b', c' are taken as 0, 1, 2 (any placement is a relabeling).  A host
    is simultaneous if every fixture has some d' in the rest of the ground set
    making (a,b,c,d) -> (0,1,2,d') a monomorphism.
    """
    if not 4 <= max_ground <= 6:
        raise ValueError("max_ground must lie in 4..6")
    fixtures = [m.rank_table() for m in laminar_fixtures()]
    examined = found = prefix_rejected = 0
    seen: set[tuple[int, ...]] = set()
    distinct = 0
    ext_counts = [0, 0, 0]
    for g in range(4, max_ground + 1):
        rejected = [0]
        for fam in _laminar_families(g, max_family, rejected):
            examined += 1
            host = LaminarMatroid(g, [(members(a), c) for a, c in fam])
            key = tuple(host.rank_table())
            if key in seen:
                continue
            seen.add(key)
            distinct += 1
            ok = []
            for i, table in enumerate(fixtures):
                hit = False
                for d in range(3, g):
                    imgs = [1, 2, 4, 1 << d]
                    if all(host.rank(sum(imgs[j] for j in range(4) if s >> j & 1)) == table[s] for s in range(16)):
                        hit = True
                        break
                ok.append(hit)
                ext_counts[i] += hit
            if all(ok):
                found += 1
        prefix_rejected += rejected[0]
    if found:
        raise ContradictionAlarm(f"{found} laminar hosts extend to all three fixtures")
    return SearchReport(
        "laminar",
        {"max_ground": max_ground, "max_family": max_family},
        examined,
        found,
        extra={"prefix_rejected": prefix_rejected, "distinct_hosts": distinct, "extensions_per_fixture": ext_counts},
    )
