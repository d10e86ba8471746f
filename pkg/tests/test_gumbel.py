import math

import numpy as np
import pytest
from scipy import stats

from metaseg.errors import EmptyLogits, NonPositiveTemperature
from metaseg.gumbel import GumbelSample, gumbel_softmax, sample_many, straight_through


def softmax(x):
    e = np.exp(x - np.max(x))
    return e / e.sum()


def test_single_logit():
    for seed in range(5):
        s = gumbel_softmax([0.3], 0.5, seed)
        assert s.relaxed.tolist() == [1.0] and s.hard_index == 0


def test_deterministic():
    a = gumbel_softmax([0.1, -2.0, 1.5], 0.7, 42)
    b = gumbel_softmax([0.1, -2.0, 1.5], 0.7, 42)
    assert a.relaxed.tobytes() == b.relaxed.tobytes() and a.hard_index == b.hard_index
    r1, h1 = sample_many([0.1, 0.2], 1.0, 100, 9)
    r2, h2 = sample_many([0.1, 0.2], 1.0, 100, 9)
    assert r1.tobytes() == r2.tobytes() and (h1 == h2).all()


def test_hard_index_is_argmax():
    rng = np.random.default_rng(0)
    for seed in range(200):
        s = gumbel_softmax(rng.normal(size=6), float(rng.uniform(0.05, 5)), seed)
        assert s.hard_index == int(np.argmax(s.relaxed))
        assert (s.relaxed > 0).all()


def test_errors():
    with pytest.raises(NonPositiveTemperature):
        gumbel_softmax([1.0, 2.0], 0.0, 0)
    with pytest.raises(NonPositiveTemperature):
        sample_many([1.0], -1.0, 10, 0)
    with pytest.raises(EmptyLogits):
        gumbel_softmax([], 1.0, 0)


@pytest.mark.parametrize("tau", [0.01, 0.1, 1.0, 3.0, 10.0])
def test_rows_sum_to_one(tau):
    relaxed, _ = sample_many(np.random.default_rng(1).normal(size=7), tau, 2000, 4)
    assert np.abs(relaxed.sum(axis=1) - 1).max() < 1e-9


@pytest.mark.parametrize("tau", [0.1, 1.0, 5.0])
def test_frequencies_vectorised(tau):
    _, hard = sample_many(np.log([0.7, 0.2, 0.1]), tau, 100_000, 123)
    freq = np.bincount(hard, minlength=3) / len(hard)
    assert np.abs(freq - [0.7, 0.2, 0.1]).max() < 0.01


@pytest.mark.parametrize("K, tau, seed", [(2, 0.3, 1), (4, 1.0, 2), (6, 2.0, 3), (8, 7.0, 4)])
def test_chi_square(K, tau, seed):
    logits = np.random.default_rng(seed).normal(size=K)
    _, hard = sample_many(logits, tau, 100_000, seed + 100)
    observed = np.bincount(hard, minlength=K)
    expected = softmax(logits) * len(hard)
    assert stats.chisquare(observed, expected).pvalue > 0.01


def test_low_temperature_near_one_hot():
    rng = np.random.default_rng(7)
    hits = {0.01: 0, 0.001: 0}
    n = 2000
    for tau in hits:
        for seed in range(n):
            logits = rng.normal(size=int(rng.integers(2, 9)))
            s = gumbel_softmax(logits, tau, seed)
            # the exact per-draw guarantee: a wide enough top-two gap forces near one-hot
            g = np.random.Generator(np.random.PCG64(seed))
            u = np.clip(g.random(len(logits)), 1e-12, 1 - 1e-12)
            top = np.sort(logits - np.log(-np.log(u)))[::-1]
            if top[0] - top[1] >= tau * math.log(999 * (len(logits) - 1)):
                assert s.relaxed.max() >= 0.999
            hits[tau] += s.relaxed.max() >= 0.999
    assert hits[0.01] / n >= 0.90
    assert hits[0.001] / n >= 0.99


def test_straight_through():
    fwd, sur = straight_through(GumbelSample(np.array([0.6, 0.4]), 0, 1.0))
    assert fwd.tolist() == [1.0, 0.0] and sur.tolist() == [0.6, 0.4]
    fwd, sur = straight_through(gumbel_softmax([2.0], 1.0, 0))
    assert fwd.tolist() == [1.0] and sur.tolist() == [1.0]
    for seed in range(50):
        fwd, _ = straight_through(gumbel_softmax([0.0, 1.0, -1.0, 0.5], 0.5, seed))
        assert fwd.sum() == 1.0 and sorted(fwd.tolist()) == [0.0, 0.0, 0.0, 1.0]
