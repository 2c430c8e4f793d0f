import itertools
import math

import numpy as np
import pytest

from matroid_embed.gfp import det_mod
from matroid_embed.impossibility import (
    M1_COLUMNS,
    M2_COLUMNS,
    graphic_fixture,
    graphic_host_search,
    laminar_fixtures,
    laminar_host_search,
    rank3_extension_search,
    rank3_fixture,
    verify_fixture,
    verify_graphic_fixture,
    verify_laminar_fixtures,
)
from matroid_embed.impossibility import _laminar_families
from matroid_embed.matroids import UniformMatroid, restrict


def test_fixture_columns():
    # same a..e and g; f differs but the prefix matroids coincide
    assert M1_COLUMNS[:5] == M2_COLUMNS[:5]
    assert M1_COLUMNS[5] == (0, 2, 1) and M2_COLUMNS[5] == (0, 1, 1)
    assert M1_COLUMNS[6] == M2_COLUMNS[6] == (1, 1, 1)


def test_fixture_determinants():
    for t in ((0, 1, 6), (2, 3, 6), (4, 5, 6)):
        assert det_mod([M1_COLUMNS[i] for i in t], 7) == 0
    assert det_mod([M2_COLUMNS[i] for i in (0, 1, 6)], 7) == 0
    assert det_mod([M2_COLUMNS[i] for i in (2, 3, 6)], 7) == 0
    # -1 mod 7
    assert det_mod([M2_COLUMNS[i] for i in (4, 5, 6)], 7) == 6


def test_verify_fixture_passes():
    rep = verify_fixture()
    assert rep.ok
    assert rep.witness is None
    assert "det(e,f,g) = 6 mod 7, independent" in rep.to_text()


def test_verify_fixture_reports_a_broken_prefix():
    f1 = rank3_fixture(1)
    f1.columns[5] = (1, 0, 2)  # f = d: prefix no longer uniform
    rep = verify_fixture(f1, rank3_fixture(2))
    assert not rep.ok
    assert rep.witness is not None


def test_fixture_prefixes_are_uniform():
    for which in (1, 2):
        m = rank3_fixture(which).matroid()
        assert restrict(m, range(6)).rank_table() == UniformMatroid(6, 3).rank_table()
    with pytest.raises(ValueError):
        rank3_fixture(3)


def test_graphic_and_laminar_fixtures():
    assert verify_graphic_fixture().ok
    assert verify_laminar_fixtures().ok
    assert graphic_fixture("left").n == 6 and graphic_fixture("right").n == 4
    fams = laminar_fixtures()
    assert len(fams) == 3
    for m in fams:
        # exactly one 3-circuit, and it contains d
        circuits = [t for t in itertools.combinations(range(4), 3) if m.rank(sum(1 << i for i in t)) == 2]
        assert len(circuits) == 1 and 3 in circuits[0]


def test_rank3_search_own_prefix():
    rep = rank3_extension_search(prefixes=[M1_COLUMNS[:6]])
    assert rep.found == 0
    assert rep.examined == 343**2
    # G on both lines AB and CD: one projective point, 6 scalings each side
    assert rep.extra["near_misses"] == 36
    assert "0 satisfying pairs / 117,649 examined" in rep.to_text()
    assert "verdict: no counterexample within bounds" in rep.to_text()


def test_rank3_search_skips_degenerate_prefix():
    flat = [(1, 0, 0), (2, 0, 0), (0, 1, 0), (0, 0, 1), (1, 1, 1), (1, 2, 3)]
    rep = rank3_extension_search(prefixes=[flat])
    assert rep.skipped == 1 and rep.examined == 0


def test_rank3_search_sampled():
    rep = rank3_extension_search(prefix_samples=3, rng=np.random.default_rng(1))
    assert rep.found == 0
    assert rep.examined == 3 * 343**2
    with pytest.raises(ValueError):
        rank3_extension_search(m=4)


def _forests(v):
    edges = list(itertools.combinations(range(v), 2))
    return math.comb(len(edges), 3) - math.comb(v, 3)


@pytest.mark.parametrize("v", [4, 5])
def test_graphic_search_counts(v):
    rep = graphic_host_search(v)
    assert rep.found == 0
    # ordered 3-edge forests; stars complete the left graph, 3-edge paths the right
    assert rep.examined == 6 * _forests(v)
    assert rep.extra["left_completable"] == 6 * v * math.comb(v - 1, 3)
    assert rep.extra["right_completable"] == 6 * math.perm(v, 4) // 2
    assert rep.extra["left_without_common_endpoint"] == 0


def test_graphic_search_bounds():
    with pytest.raises(ValueError):
        graphic_host_search(2)


def _brute_laminar_families(g, max_family):
    """Sets of (mask, cap) pairs, distinct masks, cap < |mask|, laminar, 0,1,2 independent."""
    pairs = [(a, c) for a in range(1, 1 << g) for c in range(bin(a).count("1"))]
    count = 0
    for size in range(max_family + 1):
        for fam in itertools.combinations(pairs, size):
            masks = [a for a, _ in fam]
            if len(set(masks)) < size:
                continue
            if any(a & b not in (0, a, b) for a, b in itertools.combinations(masks, 2)):
                continue
            if any(c < bin(a & 0b111).count("1") for a, c in fam):
                continue
            count += 1
    return count


@pytest.mark.parametrize("g, k", [(4, 1), (4, 2), (4, 3), (5, 2)])
def test_laminar_family_enumeration_matches_brute_force(g, k):
    got = sum(1 for _ in _laminar_families(g, k, [0]))
    assert got == _brute_laminar_families(g, k)


def test_laminar_search_small_bounds():
    rep = laminar_host_search(5, 3)
    assert rep.found == 0
    assert rep.examined == sum(_brute_laminar_families(g, 3) for g in (4, 5))
    # each fixture on its own is realizable by some host
    assert all(c > 0 for c in rep.extra["extensions_per_fixture"])
    with pytest.raises(ValueError):
        laminar_host_search(7, 2)
