import itertools

import pytest

from ordmech.generators import gen_euclidean, gen_greedy_nontruthful_regression
from ordmech.mechanisms import make_mechanism
from ordmech.truthfulness import (DeviationReport, check_semi_obliviousness,
                                  check_truthful_in_expectation, check_universal_truthfulness,
                                  enumerate_misreports)


def test_misreport_counts():
    assert list(enumerate_misreports(3, 0)) == [(1, 2), (2, 1)]
    assert len(list(enumerate_misreports(4, 2))) == 6
    assert sum(1 for _ in enumerate_misreports(8, 5)) == 5040


def test_sampled_misreports():
    with pytest.raises(ValueError):
        next(enumerate_misreports(9, 0))
    lies = list(enumerate_misreports(10, 3, sample=20, seed=1))
    assert len(lies) == 20
    assert all(sorted(l) == [v for v in range(10) if v != 3] for l in lies)
    assert lies == list(enumerate_misreports(10, 3, sample=20, seed=1))


def test_report_to_dict():
    d = DeviationReport(1, 2.0, (0, 2), 3.0, 1.0).to_dict()
    assert d["best_misreport"] == [0, 2] and d["gain"] == 1.0


@pytest.mark.parametrize("k", [1, 2])
def test_rsd_instance_a(inst_a, k):
    mech = make_mechanism("rsd", 4, k)
    assert check_truthful_in_expectation(mech, inst_a) == []
    assert check_universal_truthfulness(mech, inst_a) == []


def test_greedy_perfect_instance_a(inst_a):
    mech = make_mechanism("greedy", 4, 2)
    assert check_truthful_in_expectation(mech, inst_a) == []
    assert check_universal_truthfulness(mech, inst_a) == []


def test_mix_instance_a(inst_a):
    mech = make_mechanism("mix", 4)
    assert check_universal_truthfulness(mech, inst_a) == []
    assert check_truthful_in_expectation(mech, inst_a) == []


def test_hybrid_semi_oblivious_instance_a(inst_a):
    assert check_semi_obliviousness(make_mechanism("dks-hybrid", 4, 2), inst_a) == []
    with pytest.raises(ValueError):
        check_semi_obliviousness(make_mechanism("greedy", 4, 2), inst_a)


def test_regression_greedy_deviation():
    inst, agent, lie = gen_greedy_nontruthful_regression(0)
    reports = check_truthful_in_expectation(make_mechanism("greedy", inst.n, 1), inst)
    assert agent in {r.agent for r in reports}
    assert all(r.gain > 1e-9 for r in reports)
    r = next(r for r in reports if r.agent == agent)
    assert r.gain == pytest.approx(r.best_utility - r.truthful_utility)
    assert check_truthful_in_expectation(make_mechanism("greedy", inst.n, inst.n // 2), inst) == []


def test_universal_needs_family(inst_a):
    with pytest.raises(ValueError):
        check_universal_truthfulness(make_mechanism("tsp-188", 6), gen_euclidean(6, 2, 0))


def test_sd_fixed_order_is_truthful():
    inst = gen_euclidean(5, 2, 3)
    assert check_universal_truthfulness(make_mechanism("sd", 5, 2, order=(4, 2, 0, 1, 3)), inst) == []


def test_universal_implies_expectation():
    # whenever the per-realization audit is clean, the expectation audit is too
    for s, (name, k) in itertools.product(range(3), [("rsd", 2), ("mix", None), ("tsp-sd", None),
                                                      ("greedy", 1), ("greedy", 2)]):
        inst = gen_euclidean(5 if name in ("rsd", "tsp-sd", "greedy") else 4, 2, s)
        mech = make_mechanism(name, inst.n, k)
        if check_universal_truthfulness(mech, inst) == []:
            assert check_truthful_in_expectation(mech, inst) == []


@pytest.mark.parametrize("name,k", [("random", 2), ("ksum", 2), ("dks-trivial", 3)])
def test_oblivious_mechanisms_pass(name, k):
    inst = gen_euclidean(6, 2, 7)
    mech = make_mechanism(name, 6, k)
    assert mech.oblivious
    assert check_truthful_in_expectation(mech, inst) == []
    assert check_universal_truthfulness(mech, inst, agents=[0]) == []
