"""Brute-force reference implementations, independent of the package code."""

import itertools
import math


def span_size_gf2(vectors):
    seen = {0}
    for v in vectors:
        seen |= {x ^ v for x in seen}
    return len(seen)


def rank_gf2(vectors):
    return int(math.log2(span_size_gf2(vectors)))


def rank_gfp(vectors, p):
    """Rank from the size of the span, enumerated combination by combination."""
    vectors = [tuple(v) for v in vectors]
    if not vectors:
        return 0
    dim = len(vectors[0])
    pts = set()
    for coeffs in itertools.product(range(p), repeat=len(vectors)):
        pts.add(tuple(sum(c * v[j] for c, v in zip(coeffs, vectors)) % p for j in range(dim)))
    return round(math.log(len(pts), p))


def rank_graph(edges):
    """|touched vertices| - |components| by depth-first search."""
    adj = {}
    for u, v in edges:
        adj.setdefault(u, set()).add(v)
        adj.setdefault(v, set()).add(u)
    seen, comps = set(), 0
    for s in adj:
        if s in seen:
            continue
        comps += 1
        stack = [s]
        while stack:
            x = stack.pop()
            if x in seen:
                continue
            seen.add(x)
            stack.extend(adj[x] - seen)
    return len(adj) - comps


def rank_laminar(family, subset):
    """Largest I inside ``subset`` with |I & A| <= cap(A) for every (A, cap)."""
    subset = list(subset)
    for size in range(len(subset), -1, -1):
        for combo in itertools.combinations(subset, size):
            s = set(combo)
            if all(len(s & set(a)) <= cap for a, cap in family):
                return size
    return 0


def subsets(n):
    for mask in range(1 << n):
        yield mask, [i for i in range(n) if mask >> i & 1]
