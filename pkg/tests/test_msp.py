import itertools
import math
from fractions import Fraction

import numpy as np
import pytest
from scipy import stats

from matroid_embed.generators import random_matroid
from matroid_embed.matroids import FreeMatroid, LinearMatroid, UniformMatroid
from matroid_embed.msp import (
    DynkinSingleItem,
    InfeasibleAcceptance,
    KnownMatroidAlgorithm,
    MSPInstance,
    SampleThresholdGreedy,
    compressed_reduction,
    estimate_competitive_ratio,
    exact_mostly_online_distribution,
    exact_offline_distribution,
    flag_bound_terms,
    flag_probability_bound,
    mostly_online_reduction,
    offline_reduction_sample,
    online_realizable,
    reduction_parameters,
    run_known_msp,
    trial_rng,
)
from matroid_embed.ome import free_scheme, laminar_scheme, rank1_scheme, rank2_scheme


class AcceptEverything(KnownMatroidAlgorithm):
    name = "greedy-all"

    def reset(self, host, total, rng):
        super().reset(host, total, rng)

    def observe(self, x, w):
        self.accepted.append(x)
        return True


def test_dependent_acceptance_is_a_hard_error():
    with pytest.raises(InfeasibleAcceptance):
        run_known_msp(AcceptEverything(), UniformMatroid(3, 1), [(0, 1.0), (1, 2.0), (2, 3.0)], np.random.default_rng(0))


def test_stream_must_cover_ground_set():
    with pytest.raises(ValueError):
        run_known_msp(DynkinSingleItem(), UniformMatroid(3, 1), [(0, 1.0), (0, 2.0)], np.random.default_rng(0))


def test_dynkin_picks_best_with_probability_one_over_e():
    rng = np.random.default_rng(0)
    host = UniformMatroid(50, 1)
    alg = DynkinSingleItem()
    trials = 100_000
    wins = 0
    for _ in range(trials):
        w = rng.random(50).tolist()
        perm = rng.permutation(50).tolist()
        acc, _ = run_known_msp(alg, host, [(x, w[x]) for x in perm], rng)
        wins += acc == [int(np.argmax(w))]
    assert wins / trials >= 1 / math.e - 0.02


def test_threshold_greedy_on_free_matroid_accepts_everything_above_threshold():
    rng = np.random.default_rng(1)
    alg = SampleThresholdGreedy()
    for _ in range(200):
        n = 12
        w = rng.random(n).tolist()
        stream = [(x, w[x]) for x in rng.permutation(n).tolist()]
        acc, total = run_known_msp(alg, FreeMatroid(n), stream, rng)
        after = [x for x, wx in stream[alg.sample:] if wx > alg.threshold]
        assert acc == after
        assert total == pytest.approx(sum(w[x] for x in acc))


def test_zero_bulk_matches_one_by_one():
    for cls in (DynkinSingleItem, SampleThresholdGreedy):
        for seed in range(50):
            rng = np.random.default_rng(seed)
            w = [0.0] * 30
            for i in rng.choice(30, 4, replace=False):
                w[int(i)] = float(rng.random())
            a, b = cls(), cls()
            a.reset(FreeMatroid(30), 30, np.random.default_rng(seed))
            b.reset(FreeMatroid(30), 30, np.random.default_rng(seed))
            zeros = 0
            for x in range(30):
                a.observe(x, w[x])
                if w[x] == 0:
                    zeros += 1
                else:
                    b.observe_zeros(zeros)
                    zeros = 0
                    b.observe(x, w[x])
            assert a.accepted == b.accepted


def test_opt_is_greedy_basis_weight():
    m = UniformMatroid(4, 2)
    assert MSPInstance(m, [1.0, 5.0, 3.0, 2.0], [0, 1, 2, 3]).opt() == 8.0
    with pytest.raises(ValueError):
        MSPInstance(m, [1.0, -1.0, 0.0, 0.0], [0, 1, 2, 3])


def _inst(n, weights=None):
    return MSPInstance(FreeMatroid(n), weights or [1.0] * n, list(range(n)))


def test_offline_single_element_copy_is_uniform():
    rng = np.random.default_rng(2)
    trials = 10_000
    first = 0
    for _ in range(trials):
        seq = offline_reduction_sample(_inst(1), free_scheme(1), 2, 1, rng)
        (pos,) = [i for i, s in enumerate(seq.sources) if s == 0]
        first += seq.elements[pos] % 2 == 0
    assert abs(first / trials - 0.5) <= 3 * math.sqrt(0.25 / trials)


def test_offline_all_zero_weights():
    rng = np.random.default_rng(0)
    seq = offline_reduction_sample(_inst(2, [0.0, 0.0]), free_scheme(2), 2, 1, rng)
    assert all(w == 0 for w in seq.weights)


def test_offline_arrival_order_uniform_exact():
    # N*k = 4: every host order has probability 1/4!
    dist = exact_offline_distribution(2, 1, 2, [(Fraction(1), (0,))])
    orders = {}
    for key, p in dist.items():
        o = tuple((v, j) for v, j, _ in key)
        orders[o] = orders.get(o, 0) + p
    assert len(orders) == 24
    assert set(orders.values()) == {Fraction(1, 24)}


def test_offline_arrival_order_uniform_sampled():
    rng = np.random.default_rng(3)
    counts = {}
    for _ in range(6000):
        seq = offline_reduction_sample(_inst(1), free_scheme(1), 3, 1, rng)
        counts[tuple(seq.elements)] = counts.get(tuple(seq.elements), 0) + 1
    assert len(counts) == 6
    assert stats.chisquare(list(counts.values())).pvalue > 0.001


@pytest.mark.parametrize(
    "N, n, k, d, f_dist",
    [
        (1, 1, 2, 2, [(Fraction(1), (0,))]),
        (1, 1, 4, 2, [(Fraction(1), (0,))]),
        (2, 1, 2, 2, [(Fraction(1, 2), (0,)), (Fraction(1, 2), (1,))]),
        (2, 2, 2, 2, [(Fraction(1, 2), (0, 1)), (Fraction(1, 2), (1, 0))]),
    ],
)
def test_exact_sampler_equivalence(N, n, k, d, f_dist):
    off = exact_offline_distribution(N, n, k, f_dist)
    on = exact_mostly_online_distribution(N, n, k, d, f_dist)
    assert sum(off.values()) == 1 == sum(on.values())
    assert off == on


def _copy_choice_probs(cells, v, i, k, d):
    """Probability of each copy of v under the three-branch rule, given T in interval i."""
    q = k // d
    here = [c for c in range(k) if cells[c] == i]
    stay = Fraction(min(q, len(here)), q)
    probs = {c: Fraction(0) for c in range(k)}
    for c in here:
        probs[c] += stay / len(here)
    excess = {j: max(0, sum(1 for c in range(k) if cells[c] == j) - q) for j in range(d)}
    tot = sum(excess.values())
    for c in range(k):
        j = cells[c]
        if excess[j]:
            probs[c] += (1 - stay) * Fraction(excess[j], tot) / sum(1 for x in range(k) if cells[x] == j)
    return probs


def test_each_copy_chosen_with_probability_one_over_k():
    # averaged over the interval of T, every fixed timestamp layout gives exactly 1/k
    k, d = 4, 2
    for cells in itertools.product(range(d), repeat=k):
        total = {c: Fraction(0) for c in range(k)}
        for i in range(d):
            for c, p in _copy_choice_probs(cells, 0, i, k, d).items():
                total[c] += Fraction(1, d) * p
        assert set(total.values()) == {Fraction(1, k)}


def test_d_equal_one_always_flags():
    rng = np.random.default_rng(0)
    for _ in range(20):
        run = mostly_online_reduction(_inst(3), free_scheme(3), 2, 1, rng)
        assert run.flagged and "collision" in run.flag_reasons
    run = compressed_reduction(_inst(2), free_scheme(2), 2, 1, rng, DynkinSingleItem())
    assert run.flagged


def test_k_must_be_multiple_of_d():
    with pytest.raises(ValueError):
        mostly_online_reduction(_inst(1), free_scheme(1), 3, 2, np.random.default_rng(0))


def test_reduction_needs_monomorphism_into_enumerable_host():
    with pytest.raises(ValueError):
        mostly_online_reduction(_inst(1), rank1_scheme(1, lift=False), 2, 1, np.random.default_rng(0))
    with pytest.raises(ValueError):
        mostly_online_reduction(_inst(1), laminar_scheme(1), 2, 1, np.random.default_rng(0))


@pytest.mark.parametrize("family, scheme_fn", [("rank1", rank1_scheme), ("rank2", rank2_scheme), ("free", free_scheme)])
def test_unflagged_runs_are_feasible_mirrored_and_online(family, scheme_fn):
    rng = np.random.default_rng(5)
    n = 3
    scheme = scheme_fn(n)
    unflagged = 0
    for _ in range(150):
        m = random_matroid(family, n, rng)
        w = rng.random(n).tolist()
        inst = MSPInstance(m, w, rng.permutation(n).tolist())
        run = mostly_online_reduction(inst, scheme, 400, 20, rng, SampleThresholdGreedy())
        if run.flagged:
            assert run.weight == 0.0
            continue
        unflagged += 1
        assert m.is_independent(sum(1 << u for u in run.accepted))
        assert run.weight == pytest.approx(run.host_weight)
        assert online_realizable(run.events)
    assert unflagged > 50


def test_online_realizable_detects_early_emission():
    assert not online_realizable([("emit", 3, 1.0, 0), ("arrive", 0, 0)])
    assert online_realizable([("emit", 3, 0.0, -1), ("arrive", 0, 0), ("emit", 2, 1.0, 0)])


def test_materialized_host_sequence_places_every_source_once():
    rng = np.random.default_rng(6)
    for _ in range(50):
        run = mostly_online_reduction(_inst(3, [1.0, 2.0, 3.0]), free_scheme(3), 8, 4, rng)
        srcs = [s for s in run.sequence.sources if s >= 0]
        assert sorted(srcs) == [0, 1, 2]


def test_compressed_and_materialized_agree_in_distribution():
    n, k, d, trials = 2, 40, 8, 4000
    scheme = rank1_scheme(n)
    inst = MSPInstance(LinearMatroid([1, 1], 2, 1), [1.0, 2.0], [0, 1])
    res = {}
    for name, fn in (("mat", mostly_online_reduction), ("cmp", compressed_reduction)):
        flags, reward = 0, 0.0
        for t in range(trials):
            run = fn(inst, scheme, k, d, trial_rng(9, t + (0 if name == "mat" else 10**6)), DynkinSingleItem())
            flags += run.flagged
            reward += run.weight
        res[name] = (flags / trials, reward / trials)
    (f1, r1), (f2, r2) = res["mat"], res["cmp"]
    se_f = math.sqrt(f1 * (1 - f1) * 2 / trials)
    assert abs(f1 - f2) <= 5 * se_f + 1e-9
    assert abs(r1 - r2) <= 5 * 2 * math.sqrt(2 / trials)


def test_flag_bound_example_n4():
    fb = flag_probability_bound(4, 0.5)
    assert fb.delta == pytest.approx(1 / 24)
    assert fb.d == 96
    assert fb.k_min % 96 == 0
    assert fb.value <= 0.5
    assert sum(flag_bound_terms(4, fb.delta, 96, fb.k_min - 96)) > 0.5
    a, b, c = fb.terms
    assert a == pytest.approx(16 / 96) and c == pytest.approx(4 / 24)
    assert b == pytest.approx(384 * math.exp(-fb.k_min / 110592))
    # about 856,000 rounded to a multiple of 96
    assert abs(fb.k_min - 856_000) < 1000


def test_flag_bound_near_one():
    fb = flag_probability_bound(1, 0.99)
    assert fb.d == 4 or fb.d == 3
    assert fb.k_min < 1000
    with pytest.raises(ValueError):
        flag_probability_bound(2, 1.0)


def test_reduction_parameters_clamp():
    p = reduction_parameters(3, 0.3, 10**6)
    assert (p.d, p.k, p.k_min, p.certified) == (90, 999_990, 1_279_980, False)
    assert p.bound > 0.3
    q = reduction_parameters(1, 0.5)
    assert q.certified and q.k == q.k_min


def test_empirical_flag_rate_within_bound():
    p = reduction_parameters(1, 0.5)
    rng = np.random.default_rng(7)
    trials = 10_000
    flags = sum(
        compressed_reduction(_inst(1), free_scheme(1), p.k, p.d, rng, DynkinSingleItem()).flagged for _ in range(trials)
    )
    rate = flags / trials
    assert rate <= 0.5 + 3 * math.sqrt(0.25 / trials)


def test_report_csv_and_determinism():
    a = estimate_competitive_ratio("rank1", 4, 0.3, 30, seed=11, k_cap=10**4)
    b = estimate_competitive_ratio("rank1", 4, 0.3, 30, seed=11, k_cap=10**4)
    assert a.to_csv() == b.to_csv()
    assert a.to_csv().splitlines()[0] == "trial,opt,alg,ratio,flagged"
    assert len(a.to_csv().splitlines()) == 31
    assert all(r.ratio is None or 0 <= r.ratio <= 1 for r in a.rows)
    assert "mean_ratio" in a.summary()


def test_threads_do_not_change_results():
    a = estimate_competitive_ratio("binary", 3, 0.3, 12, seed=2, k_cap=2000, threads=1)
    b = estimate_competitive_ratio("binary", 3, 0.3, 12, seed=2, k_cap=2000, threads=3)
    assert a.to_csv() == b.to_csv()


def test_opt_zero_trials_are_excluded():
    rep = estimate_competitive_ratio("free", 2, 0.5, 5, weights=[0.0, 0.0])
    assert rep.excluded == 5
    assert math.isnan(rep.mean_ratio)


def test_single_element_ratio_is_success_probability():
    rep = estimate_competitive_ratio("free", 1, 0.5, 200, seed=3, weights=[1.0])
    assert all(r.ratio in (0.0, 1.0) for r in rep.rows)


def test_harness_rejects_unknown_inputs():
    with pytest.raises(ValueError):
        estimate_competitive_ratio("laminar", 3, 0.3, 1)
    with pytest.raises(ValueError):
        estimate_competitive_ratio("rank1", 3, 0.3, 1, algorithm="nope")
    with pytest.raises(ValueError):
        estimate_competitive_ratio("rank1", 3, 0.3, 0)
    with pytest.raises(ValueError):
        estimate_competitive_ratio("rank1", 3, 0.3, 1, weights=[1.0])

