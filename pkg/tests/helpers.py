"""Shared test machinery: fixture batches and full-coordinate FD checks."""

import numpy as np

from textquest.agents.models import ModelConfig

FD_H = 1e-4
FD_REL_TOL = 1e-4
FD_FLOOR = 1e-6


def tiny_config(vocab_size: int = 12) -> ModelConfig:
    return ModelConfig(vocab_size=vocab_size, embed_dim=4, hidden_dim=5,
                       q_hidden_dim=6)


def random_tokens(rng, vocab_size, low=1, max_len=5, allow_empty=False):
    length = int(rng.integers(0 if allow_empty else 1, max_len + 1))
    return [int(rng.integers(low, vocab_size)) for _ in range(length)]


def random_channels(rng, vocab_size):
    chans = tuple(random_tokens(rng, vocab_size) for _ in range(3))
    return chans + (random_tokens(rng, vocab_size, allow_empty=True),)


def make_drrn_batch(rng, cfg, size=3):
    """Replay samples covering terminal, empty-next, and weighted cases."""
    batch = []
    for i in range(size):
        n_next = int(rng.integers(0, 4)) if i else 0  # sample 0: no next acts
        batch.append({
            "obs": random_channels(rng, cfg.vocab_size),
            "act": random_tokens(rng, cfg.vocab_size),
            "reward": float(rng.integers(-1, 3)),
            "next_obs": random_channels(rng, cfg.vocab_size),
            "next_acts": [random_tokens(rng, cfg.vocab_size)
                          for _ in range(n_next)],
            "done": bool(i == 1),
            "weight": float(rng.uniform(0.5, 1.5)),
        })
    return batch


def make_tdqn_batch(rng, cfg, n_templates=4, n_words=6, size=3):
    """One sample per blank count (0, 1, and 2 filled word slots)."""
    batch = []
    for i in range(size):
        blanks = i % 3
        taken = (int(rng.integers(0, n_templates)),
                 int(rng.integers(0, n_words)) if blanks >= 1 else -1,
                 int(rng.integers(0, n_words)) if blanks == 2 else -1)
        batch.append({
            "obs": random_channels(rng, cfg.vocab_size),
            "next_obs": random_channels(rng, cfg.vocab_size),
            "taken": taken,
            "reward": float(rng.integers(-1, 3)),
            "done": bool(i == 1),
            "weight": float(rng.uniform(0.5, 1.5)),
            "valid_t": tuple(sorted({int(v) for v in
                                     rng.integers(0, n_templates, size=2)})),
            "valid_o1": tuple(sorted({int(v) for v in
                                      rng.integers(0, n_words, size=3)})),
            "valid_o2": tuple(sorted({int(v) for v in
                                      rng.integers(0, n_words, size=2)})),
        })
    return batch


def fd_worst_error(params, grads, loss_fn, h=FD_H, floor=FD_FLOOR):
    """Worst relative error between analytic and central-difference gradients
    over every coordinate of every parameter array."""
    worst = 0.0
    for key in sorted(params):
        flat = params[key].reshape(-1)
        gflat = grads.get(key, np.zeros_like(params[key])).reshape(-1)
        for i in range(flat.size):
            orig = flat[i]
            flat[i] = orig + h
            up = loss_fn()
            flat[i] = orig - h
            down = loss_fn()
            flat[i] = orig
            numeric = (up - down) / (2.0 * h)
            denom = max(abs(numeric), abs(gflat[i]), floor)
            worst = max(worst, abs(numeric - gflat[i]) / denom)
    return worst
