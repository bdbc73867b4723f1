"""Proportional prioritized experience replay.

Transitions are stored in a ring buffer with one priority each. Sampling
draws with replacement proportionally to priority**alpha and reports
importance-sampling weights (N * P)**-beta, normalized by the largest
weight in the batch so weights never exceed one. New transitions enter at
the current maximum priority so each is sampled at least once before its
TD error takes over.
"""

from __future__ import annotations

from typing import Any

import numpy as np

from ..rng import SplitMix64


class PrioritizedReplay:
    def __init__(self, capacity: int = 100_000, alpha: float = 0.6,
                 epsilon: float = 1e-3) -> None:
        if capacity <= 0:
            raise ValueError("capacity must be positive")
        self.capacity = capacity
        self.alpha = alpha
        self.epsilon = epsilon
        self._items: list[Any] = []
        self._priorities = np.zeros(capacity)
        self._pos = 0
        self._max_priority = 1.0

    def __len__(self) -> int:
        return len(self._items)

    def add(self, item: Any) -> None:
        if len(self._items) < self.capacity:
            self._items.append(item)
            self._priorities[len(self._items) - 1] = self._max_priority
        else:
            self._items[self._pos] = item
            self._priorities[self._pos] = self._max_priority
            self._pos = (self._pos + 1) % self.capacity

    def sample(self, batch_size: int, beta: float, rng: SplitMix64
               ) -> tuple[list[Any], np.ndarray, np.ndarray]:
        """Returns (items, indices, importance weights)."""
        size = len(self._items)
        if size == 0:
            raise ValueError("cannot sample from an empty buffer")
        scaled = self._priorities[:size] ** self.alpha
        total = scaled.sum()
        probs = scaled / total
        bounds = np.cumsum(probs)
        bounds[-1] = 1.0
        draws = np.array([rng.random() for _ in range(batch_size)])
        indices = np.searchsorted(bounds, draws, side="right")
        indices = np.minimum(indices, size - 1)
        weights = (size * probs[indices]) ** (-beta)
        weights = weights / weights.max()
        return [self._items[i] for i in indices], indices, weights

    def update_priorities(self, indices: np.ndarray,
                          td_abs: np.ndarray) -> None:
        for idx, err in zip(indices, td_abs):
            priority = float(err) + self.epsilon
            self._priorities[idx] = priority
            if priority > self._max_priority:
                self._max_priority = priority
