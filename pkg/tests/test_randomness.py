import math

import pytest

from ordmech.randomness import (EnumerationLimitError, RandomSource, derive_seed,
                                enumerate_outcomes, expectation)


def test_same_seed_same_draws():
    a, b = RandomSource(42), RandomSource(42)
    assert [a.choice(range(100)) for _ in range(50)] == [b.choice(range(100)) for _ in range(50)]


def test_enumerates_every_leaf_with_probability():
    def run(rng):
        first = rng.choice("abc")
        if first == "a":
            return first + rng.choice("xy")
        return first

    leaves = dict((out, p) for p, out in enumerate_outcomes(run))
    assert set(leaves) == {"ax", "ay", "b", "c"}
    assert leaves["ax"] == pytest.approx(1 / 6)
    assert leaves["b"] == pytest.approx(1 / 3)


def test_weighted_coin_enumeration():
    leaves = list(enumerate_outcomes(lambda rng: rng.coin(3 / 7)))
    assert sorted(leaves) == sorted([(3 / 7, True), (4 / 7, False)])


def test_shuffle_enumeration_is_uniform():
    outs = list(enumerate_outcomes(lambda rng: tuple(rng.shuffled([0, 1, 2, 3]))))
    assert len(outs) == 24
    assert all(math.isclose(p, 1 / 24) for p, _ in outs)


def test_sample_enumeration_covers_subsets():
    outs = list(enumerate_outcomes(lambda rng: tuple(rng.sample(range(5), 2))))
    assert len(outs) == 10 and len({o for _, o in outs}) == 10


def test_expectation_exact():
    # E[sum of two dice] = 7
    assert expectation(lambda rng: rng.choice(range(1, 7)) + rng.choice(range(1, 7)),
                       float) == pytest.approx(7)


def test_guard():
    with pytest.raises(EnumerationLimitError):
        list(enumerate_outcomes(lambda rng: [rng.choice(range(10)) for _ in range(4)], guard=100))


def test_derive_seed_distinct_and_stable():
    seeds = {derive_seed(7, i) for i in range(1000)}
    assert len(seeds) == 1000
    assert derive_seed(7, 3) == derive_seed(7, 3)
    assert derive_seed(7, 3) != derive_seed(8, 3)


def test_sampled_coin_frequency():
    rng = RandomSource(1)
    hits = sum(rng.coin(0.3) for _ in range(20000))
    assert abs(hits / 20000 - 0.3) < 0.02


def test_bad_mode():
    with pytest.raises(ValueError):
        RandomSource(mode="other")
