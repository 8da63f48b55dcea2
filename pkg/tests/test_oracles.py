import itertools

import numpy as np
import pytest

from ordmech.core import MetricInstance, Matching, NodeSubset, Tour, social_welfare
from ordmech.generators import gen_euclidean, gen_metric_closure, gen_random_symmetric
from ordmech.matching import all_k_matchings, greedy_k_matching
from ordmech.oracles import (OracleLimitError, count_equal_partitions, opt_densest_k_subgraph,
                             opt_k_matching, opt_ksum_clustering, opt_max_tsp)
from ordmech.ordinal import induce_preferences

from conftest import uniform_instance


def brute_tsp(inst):
    n = inst.n
    return max(social_welfare(Tour((0,) + p), inst) for p in itertools.permutations(range(1, n)))


def brute_matching(inst, k):
    return max(social_welfare(m, inst) for m in all_k_matchings(inst.n, k))


def test_matching_examples(inst_a):
    assert opt_k_matching(inst_a, 2)[1] == 9
    assert opt_k_matching(inst_a, 1) == (Matching(((0, 3),)), 7)
    assert opt_k_matching(inst_a, 0) == (Matching(()), 0)


def test_matching_lexicographic_ties():
    m, v = opt_k_matching(uniform_instance(6), 2)
    assert v == 2 and m == Matching(((0, 1), (2, 3)))


def test_dks_examples(inst_a):
    assert opt_densest_k_subgraph(inst_a, 2) == (NodeSubset((0, 3)), 7)
    assert opt_densest_k_subgraph(inst_a, 4)[1] == 23
    s, v = opt_densest_k_subgraph(inst_a, 3)
    assert v == 14 and s in (NodeSubset((0, 1, 3)), NodeSubset((0, 2, 3)))


def test_ksum_examples(inst_a):
    assert opt_ksum_clustering(inst_a, 2)[1] == 9
    assert opt_ksum_clustering(inst_a, 1)[1] == 23
    assert count_equal_partitions(4, 2) == 3
    assert count_equal_partitions(6, 2) == 10
    assert count_equal_partitions(6, 3) == 15


def test_tsp_examples(inst_a):
    t, v = opt_max_tsp(inst_a)
    assert v == 18 and t == Tour((0, 2, 1, 3))
    assert opt_max_tsp(gen_euclidean(3, 2, 0))[0] == Tour((0, 1, 2))
    assert opt_max_tsp(uniform_instance(7, 2.5))[1] == pytest.approx(17.5)


@pytest.mark.parametrize("n", [3, 4, 5, 6, 7, 8])
def test_held_karp_matches_permutations(n):
    for s in range(4):
        for inst in (gen_euclidean(n, 2, s), gen_random_symmetric(n, s)):
            t, v = opt_max_tsp(inst)
            assert v == pytest.approx(brute_tsp(inst))
            assert social_welfare(t, inst) == pytest.approx(v)


@pytest.mark.parametrize("n", [2, 4, 5, 6, 7, 8, 9])
def test_matching_dp_matches_brute_force(n):
    for s in range(3):
        inst = gen_metric_closure(n, 0.4, s)
        for k in range(1, n // 2 + 1):
            m, v = opt_k_matching(inst, k)
            assert len(m) == k and social_welfare(m, inst) == pytest.approx(v)
            assert v == pytest.approx(brute_matching(inst, k))


@pytest.mark.parametrize("n", [4, 6, 8])
def test_perfect_matching_equals_ksum_at_half(n):
    for s in range(4):
        inst = gen_euclidean(n, 2, s)
        assert opt_k_matching(inst, n // 2)[1] == pytest.approx(opt_ksum_clustering(inst, n // 2)[1])


def test_ksum_matches_brute_force():
    inst = gen_euclidean(6, 2, 8)
    best = 0
    for a in itertools.combinations(range(6), 3):
        rest = tuple(v for v in range(6) if v not in a)
        val = sum(inst.w(x, y) for x, y in itertools.combinations(a, 2)) + \
            sum(inst.w(x, y) for x, y in itertools.combinations(rest, 2))
        best = max(best, val)
    c, v = opt_ksum_clustering(inst, 2)
    assert v == pytest.approx(best) and social_welfare(c, inst) == pytest.approx(v)


def test_relabel_invariance():
    rng = np.random.default_rng(0)
    for s in range(5):
        inst = gen_euclidean(8, 2, s)
        other = inst.relabel(rng.permutation(8))
        assert opt_max_tsp(other)[1] == pytest.approx(opt_max_tsp(inst)[1])
        assert opt_k_matching(other, 3)[1] == pytest.approx(opt_k_matching(inst, 3)[1])
        assert opt_densest_k_subgraph(other, 3)[1] == pytest.approx(opt_densest_k_subgraph(inst, 3)[1])
        assert opt_ksum_clustering(other, 2)[1] == pytest.approx(opt_ksum_clustering(inst, 2)[1])


@pytest.mark.parametrize("n", [4, 6, 8])
def test_matching_upper_bound_lemma(n):
    for s in range(4):
        for inst in (gen_euclidean(n, 2, s), gen_metric_closure(n, 0.5, s)):
            matchings = [opt_k_matching(inst, n // 2)[0], greedy_k_matching(induce_preferences(inst), n // 2)]
            for size in range(1, n + 1):
                for t in itertools.combinations(range(n), size):
                    rest = [v for v in range(n) if v not in t]
                    inside = sum(inst.w(x, y) for x, y in itertools.combinations(t, 2))
                    across = sum(inst.w(x, y) for x in t for y in rest)
                    for m in matchings:
                        assert social_welfare(m, inst) <= 2 / size * inside + across / size + 1e-9


def test_guards():
    big = MetricInstance(np.ones((21, 21)) - np.eye(21))
    with pytest.raises(OracleLimitError):
        opt_k_matching(big, 2)
    with pytest.raises(OracleLimitError):
        opt_max_tsp(MetricInstance(np.ones((17, 17)) - np.eye(17)))
    with pytest.raises(OracleLimitError):
        opt_densest_k_subgraph(MetricInstance(np.ones((30, 30)) - np.eye(30)), 15)
    with pytest.raises(OracleLimitError):
        opt_ksum_clustering(MetricInstance(np.ones((20, 20)) - np.eye(20)), 10)
    with pytest.raises(ValueError):
        opt_k_matching(gen_euclidean(4, 2, 0), 3)
