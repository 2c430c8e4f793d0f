import itertools

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from matroid_embed.generators import random_gf2_matroid, random_graphic, random_laminar
from matroid_embed.matroids import (
    CompleteBinaryMatroid,
    CopyMatroid,
    ExplicitMatroid,
    FreeMatroid,
    GateViolation,
    GraphicMatroid,
    LaminarMatroid,
    LinearMatroid,
    PrefixGatedOracle,
    TrivialMatroid,
    UniformMatroid,
    check_axioms,
    copies,
    direct_sum,
    find_circuit,
    greedy_max_weight_basis,
    is_morphism,
    members,
    restrict,
    span,
    spot_check_axioms,
)

from oracles import rank_gf2, rank_graph, rank_laminar, subsets


def full_submodular(n, table):
    return all(
        table[a] + table[b] >= table[a | b] + table[a & b] for a in range(1 << n) for b in range(1 << n)
    )


def unit_increase_tables(n, rng):
    """Random tables obeying normalization and unit increase, built along a chain."""
    table = [None] * (1 << n)
    table[0] = 0
    for s in range(1, 1 << n):
        low = s & -s
        table[s] = table[s ^ low] + int(rng.integers(0, 2))
    return table


def test_local_submodularity_agrees_with_full_check():
    rng = np.random.default_rng(5)
    seen = {True: 0, False: 0}
    for n in (2, 3, 4):
        for _ in range(300):
            table = unit_increase_tables(n, rng)
            if any(table[s | 1 << x] - table[s] not in (0, 1) for s in range(1 << n) for x in range(n)):
                continue
            got = check_axioms(ExplicitMatroid(n, table)).ok
            assert got == full_submodular(n, table)
            seen[got] += 1
    # both outcomes exercised
    assert seen[True] and seen[False]


def test_uniform_passes_axioms():
    assert check_axioms(UniformMatroid(6, 3)).ok


def test_explicit_unit_increase_violation_witness():
    # rank({0}) = 0 but rank({0,1}) = 2
    rep = check_axioms(ExplicitMatroid(2, [0, 0, 1, 2]))
    assert not rep.ok
    assert rep.axiom == "unit-increase"
    assert rep.witness == ([0], 1)


def test_check_axioms_refuses_above_cap():
    with pytest.raises(ValueError, match="spot_check"):
        check_axioms(FreeMatroid(15))
    assert spot_check_axioms(FreeMatroid(40), 200, np.random.default_rng(0)).ok


def test_rank_rejects_elements_outside_ground():
    with pytest.raises(ValueError):
        UniformMatroid(3, 2).rank(0b1000)


@settings(max_examples=40, deadline=None)
@given(st.integers(0, 2**32 - 1), st.integers(1, 8), st.integers(1, 5))
def test_linear_gf2_rank_matches_brute_force(seed, n, dim):
    m = random_gf2_matroid(n, dim, np.random.default_rng(seed), loop_prob=0.2)
    table = m.rank_table()
    for mask, els in subsets(n):
        assert table[mask] == rank_gf2([m.columns[i] for i in els])
    assert check_axioms(m).ok


@settings(max_examples=40, deadline=None)
@given(st.integers(0, 2**32 - 1), st.integers(1, 8), st.integers(2, 5))
def test_graphic_rank_matches_dfs_and_incidence(seed, n, v):
    g = random_graphic(n, v, np.random.default_rng(seed), loop_prob=0.2)
    inc = g.incidence_columns()
    for mask, els in subsets(n):
        r = g.rank(mask)
        assert r == rank_graph([g.edges[i] for i in els if g.edges[i][0] != g.edges[i][1]])
        assert r == rank_gf2([inc[i] for i in els])


@settings(max_examples=40, deadline=None)
@given(st.integers(0, 2**32 - 1), st.integers(1, 7))
def test_laminar_rank_matches_brute_force(seed, n):
    m = random_laminar(n, np.random.default_rng(seed))
    fam = [(members(a), c) for a, c in m.family]
    for mask, els in subsets(n):
        assert m.rank(mask) == rank_laminar(fam, els)
    assert check_axioms(m).ok


def test_laminar_rejects_crossing_sets():
    with pytest.raises(ValueError, match="not laminar"):
        LaminarMatroid(3, [([0, 1], 1), ([1, 2], 1)])


def test_laminar_duplicate_sets_take_min_cap():
    m = LaminarMatroid(3, [([0, 1], 2), ([0, 1], 1)])
    assert m.rank(0b011) == 1


def test_copies_rank_collapses():
    assert copies(UniformMatroid(1, 1), 3).rank(0b111) == 1


def test_direct_sum_rank():
    assert direct_sum(UniformMatroid(2, 1), UniformMatroid(2, 1)).rank(0b1111) == 2


def test_restriction_of_k4_to_star_is_free():
    k4 = GraphicMatroid(4, [(0, 1), (0, 2), (0, 3), (1, 2), (2, 3), (3, 1)])
    r = restrict(k4, [0, 1, 2])
    assert r.rank_table() == FreeMatroid(3).rank_table()


def test_copy_projection_is_morphism():
    rng = np.random.default_rng(2)
    for _ in range(10):
        m = random_gf2_matroid(5, 3, rng)
        cm = CopyMatroid(m, 2)
        assert is_morphism([cm.projection(x) for x in range(cm.n)], cm, m).ok


def test_trivial_and_complete_binary():
    assert TrivialMatroid(3).rank(0b111) == 0
    f2 = CompleteBinaryMatroid(3)
    assert f2.n == 8 and f2.rank(0b1) == 0 and f2.full_rank() == 3
    assert f2.rank_elements([1, 2, 3]) == 2


def test_explicit_from_bases_round_trip():
    u = UniformMatroid(4, 2)
    e = ExplicitMatroid.from_bases(4, [members(b) for b in ExplicitMatroid.from_matroid(u).bases()])
    assert e.rank_table() == u.rank_table()
    with pytest.raises(ValueError):
        ExplicitMatroid(15, [0] * (1 << 15))


def test_span_properties():
    rng = np.random.default_rng(4)
    for _ in range(20):
        m = random_gf2_matroid(7, 3, rng)
        for s in range(0, 1 << 7, 5):
            sp = span(m, s)
            assert sp & s == s
            assert span(m, sp) == sp
            assert m.rank(sp) == m.rank(s)


def test_find_circuit_is_a_circuit():
    rng = np.random.default_rng(9)
    for _ in range(50):
        m = random_gf2_matroid(7, 3, rng)
        for x in range(7):
            c = find_circuit(m, x, m.ground)
            if c is None:
                assert m.rank(m.ground) == m.rank(m.ground & ~(1 << x)) + 1
                continue
            assert c >> x & 1
            assert m.rank(c) == bin(c).count("1") - 1
            assert all(m.is_independent(c & ~(1 << y)) for y in members(c))


def test_prefix_gate_blocks_unarrived_queries():
    gate = PrefixGatedOracle(FreeMatroid(3))
    gate.arrive(1)
    assert gate.rank(0b010) == 1
    with pytest.raises(GateViolation):
        gate.rank(0b001)
    assert not gate.audit()
    with pytest.raises(ValueError):
        gate.arrive(1)


def test_prefix_gate_log():
    gate = PrefixGatedOracle(FreeMatroid(3))
    gate.arrive(2)
    gate.rank(0b100)
    gate.arrive(0)
    gate.rank(0b101)
    assert gate.audit()
    assert gate.log == [(1, 0b100, 1), (2, 0b101, 2)]


def test_is_morphism_examples():
    assert is_morphism(list(range(5)), UniformMatroid(5, 2), UniformMatroid(5, 2)).ok
    rep = is_morphism([0, 0], FreeMatroid(2), FreeMatroid(1))
    assert not rep.ok
    assert rep.witness == [0, 1]
    assert not rep.injective


def test_is_morphism_sampled_mode():
    rep = is_morphism(list(range(20)), FreeMatroid(20), FreeMatroid(20), cap=10, samples=50)
    assert rep.ok and not rep.exhaustive


def test_greedy_matches_brute_force_optimum():
    rng = np.random.default_rng(11)
    for _ in range(30):
        m = random_gf2_matroid(6, 3, rng)
        w = [float(x) for x in rng.random(6)]
        best = max(
            sum(w[i] for i in els) for mask, els in subsets(6) if m.is_independent(mask)
        )
        mask, total = greedy_max_weight_basis(m, w)
        assert m.is_independent(mask)
        assert total == pytest.approx(best)


def test_greedy_skips_zero_weights_and_breaks_ties_by_id():
    mask, total = greedy_max_weight_basis(UniformMatroid(3, 1), [1.0, 1.0, 0.0])
    assert mask == 0b001 and total == 1.0
    assert greedy_max_weight_basis(FreeMatroid(2), [0.0, 0.0]) == (0, 0.0)


def test_linear_gfp_column_validation():
    with pytest.raises(ValueError):
        LinearMatroid([(1, 0), (1, 0, 0)], 5)
    with pytest.raises(ValueError):
        LinearMatroid([(1, 0)], 4)


@pytest.mark.parametrize("cls_args", [(UniformMatroid, (5, 3)), (FreeMatroid, (4,)), (TrivialMatroid, (3,))])
def test_simple_types_pass_axioms(cls_args):
    cls, args = cls_args
    assert check_axioms(cls(*args)).ok


def test_rank_table_size_guard():
    with pytest.raises(ValueError):
        FreeMatroid(30).rank_table()


def test_direct_sum_ids_and_rank_elements():
    ds = direct_sum(FreeMatroid(2), UniformMatroid(3, 1))
    assert ds.n == 5
    assert ds.rank_elements([0, 2, 3]) == 2
    for mask in range(32):
        els = members(mask)
        assert ds.rank(mask) == ds.rank_elements(els)


def test_copy_rank_elements_agrees_with_masks():
    cm = CopyMatroid(UniformMatroid(3, 2), 4)
    for combo in itertools.combinations(range(cm.n), 3):
        mask = sum(1 << x for x in combo)
        assert cm.rank(mask) == cm.rank_elements(combo)
