"""Prioritized replay: the priority^alpha law, weights, and ring eviction."""

import numpy as np
import pytest
from scipy import stats

from textquest.agents.replay import PrioritizedReplay
from textquest.rng import SplitMix64

DRAWS = 100_000


def frequencies(buffer, n_items, draws=DRAWS, beta=0.4, seed=7):
    rng = SplitMix64(seed)
    counts = np.zeros(n_items)
    batch = 500
    for _ in range(draws // batch):
        _, indices, _ = buffer.sample(batch, beta=beta, rng=rng)
        counts += np.bincount(indices, minlength=n_items)
    return counts


def test_sampling_follows_priority_alpha_law():
    alpha = 0.6
    priorities = np.array([0.2, 0.5, 1.0, 2.0, 5.0])
    buffer = PrioritizedReplay(capacity=8, alpha=alpha)
    for i in range(len(priorities)):
        buffer.add(i)
    buffer.update_priorities(np.arange(5), priorities - buffer.epsilon)
    counts = frequencies(buffer, 5)
    expected_probs = priorities ** alpha / np.sum(priorities ** alpha)
    chi2 = stats.chisquare(counts, f_exp=expected_probs * DRAWS)
    assert chi2.pvalue > 0.01, f"p={chi2.pvalue:.4f} counts={counts}"


def test_alpha_zero_is_uniform():
    buffer = PrioritizedReplay(capacity=8, alpha=0.0)
    for i in range(6):
        buffer.add(i)
    # wildly uneven raw priorities must not matter at alpha=0
    buffer.update_priorities(np.arange(6),
                             np.array([0.0, 1.0, 10.0, 100.0, 0.5, 3.0]))
    counts = frequencies(buffer, 6)
    chi2 = stats.chisquare(counts)  # uniform null
    assert chi2.pvalue > 0.01, f"p={chi2.pvalue:.4f} counts={counts}"


def test_importance_weights_formula():
    alpha = 0.6
    beta = 0.7
    buffer = PrioritizedReplay(capacity=4, alpha=alpha)
    for i in range(4):
        buffer.add(i)
    priorities = np.array([1.0, 2.0, 3.0, 4.0])
    buffer.update_priorities(np.arange(4), priorities - buffer.epsilon)
    scaled = priorities ** alpha
    probs = scaled / scaled.sum()
    raw = (4 * probs) ** (-beta)
    _, indices, weights = buffer.sample(64, beta=beta, rng=SplitMix64(3))
    expected = raw[indices] / raw[indices].max()
    assert np.allclose(weights, expected)
    assert weights.max() == pytest.approx(1.0)
    assert np.all(weights > 0)


def test_beta_zero_weights_are_all_one():
    buffer = PrioritizedReplay(capacity=4, alpha=0.6)
    for i in range(4):
        buffer.add(i)
    buffer.update_priorities(np.arange(4), np.array([1.0, 5.0, 0.1, 2.0]))
    _, _, weights = buffer.sample(32, beta=0.0, rng=SplitMix64(4))
    assert np.all(weights == 1.0)


def test_new_items_enter_at_max_priority():
    buffer = PrioritizedReplay(capacity=8, alpha=1.0)
    buffer.add("a")
    buffer.update_priorities(np.array([0]), np.array([9.0]))
    buffer.add("b")  # must arrive at the lifted maximum
    items, _, _ = buffer.sample(2000, beta=0.0, rng=SplitMix64(5))
    share_b = sum(1 for it in items if it == "b") / len(items)
    assert 0.4 < share_b < 0.6  # same priority as "a": roughly half


def test_ring_eviction_overwrites_oldest():
    buffer = PrioritizedReplay(capacity=3, alpha=0.6)
    for name in ("a", "b", "c", "d", "e"):
        buffer.add(name)
    assert len(buffer) == 3
    items, _, _ = buffer.sample(200, beta=0.4, rng=SplitMix64(6))
    assert set(items) <= {"c", "d", "e"}


def test_sample_empty_buffer_raises():
    buffer = PrioritizedReplay(capacity=2)
    with pytest.raises(ValueError):
        buffer.sample(1, beta=0.4, rng=SplitMix64(0))


def test_capacity_must_be_positive():
    with pytest.raises(ValueError):
        PrioritizedReplay(capacity=0)


def test_priority_floor_keeps_zero_error_samplable():
    buffer = PrioritizedReplay(capacity=4, alpha=1.0, epsilon=1e-3)
    buffer.add("zero")
    buffer.add("big")
    buffer.update_priorities(np.array([0, 1]), np.array([0.0, 1.0]))
    counts = np.zeros(2)
    rng = SplitMix64(8)
    for _ in range(40):
        _, indices, _ = buffer.sample(50, beta=0.4, rng=rng)
        counts += np.bincount(indices, minlength=2)
    assert counts[0] > 0  # epsilon keeps it alive


def test_sampling_is_deterministic_given_rng():
    buffer = PrioritizedReplay(capacity=8, alpha=0.6)
    for i in range(8):
        buffer.add(i)
    buffer.update_priorities(np.arange(8), np.linspace(0.1, 2.0, 8))
    a = buffer.sample(16, beta=0.4, rng=SplitMix64(42))
    b = buffer.sample(16, beta=0.4, rng=SplitMix64(42))
    assert a[0] == b[0]
    assert np.array_equal(a[1], b[1])
    assert np.array_equal(a[2], b[2])
