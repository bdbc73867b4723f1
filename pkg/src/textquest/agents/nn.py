"""Minimal neural network kit: embeddings, GRUs, linear layers, Adam.

Everything is float64 numpy with hand-derived backward passes. Parameters
live in flat dicts keyed by dotted names ("enc.nar.Wz"), gradients mirror
that layout, and the test suite checks every entry against central finite
differences, so the forward and backward code here must stay in exact
agreement.

GRU convention, per step t with input x and previous hidden h:

    z = sigmoid(x Wz + h Uz + bz)          update gate
    r = sigmoid(x Wr + h Ur + br)          reset gate
    c = tanh(x Wc + r * (h Uc) + bc)       candidate
    h' = z * h + (1 - z) * c

Padded positions carry mask 0 and leave the hidden state untouched, so a
batch row computes exactly what the unpadded sequence would.
"""

from __future__ import annotations

import numpy as np

Params = dict[str, np.ndarray]


def sigmoid(x: np.ndarray) -> np.ndarray:
    # stable in both tails
    out = np.empty_like(x)
    pos = x >= 0
    out[pos] = 1.0 / (1.0 + np.exp(-x[pos]))
    ex = np.exp(x[~pos])
    out[~pos] = ex / (1.0 + ex)
    return out


def relu(x: np.ndarray) -> np.ndarray:
    return np.maximum(x, 0.0)


def relu_backward(dy: np.ndarray, x: np.ndarray) -> np.ndarray:
    return dy * (x > 0)


# -- parameter construction ----------------------------------------------------


def _uniform(rng: np.random.Generator, shape: tuple[int, ...],
             bound: float) -> np.ndarray:
    return rng.uniform(-bound, bound, size=shape)


def embedding_params(rng: np.random.Generator, name: str, vocab: int,
                     dim: int) -> Params:
    table = rng.normal(0.0, 0.1, size=(vocab, dim))
    table[0] = 0.0  # padding row stays zero at init
    return {name: table}


def gru_params(rng: np.random.Generator, name: str, input_dim: int,
               hidden: int) -> Params:
    k = 1.0 / np.sqrt(hidden)
    out: Params = {}
    for gate in ("z", "r", "c"):
        out[f"{name}.W{gate}"] = _uniform(rng, (input_dim, hidden), k)
        out[f"{name}.U{gate}"] = _uniform(rng, (hidden, hidden), k)
        out[f"{name}.b{gate}"] = _uniform(rng, (hidden,), k)
    return out


def linear_params(rng: np.random.Generator, name: str, in_dim: int,
                  out_dim: int) -> Params:
    k = 1.0 / np.sqrt(in_dim)
    return {f"{name}.W": _uniform(rng, (in_dim, out_dim), k),
            f"{name}.b": _uniform(rng, (out_dim,), k)}


def zeros_like_params(params: Params) -> Params:
    return {k: np.zeros_like(v) for k, v in params.items()}


def add_grads(total: Params, part: Params) -> None:
    for k, v in part.items():
        if k in total:
            total[k] += v
        else:
            total[k] = v.copy()


# -- embedding ------------------------------------------------------------------


def embed_forward(params: Params, name: str, ids: np.ndarray) -> np.ndarray:
    return params[name][ids]


def embed_backward(params: Params, name: str, ids: np.ndarray,
                   dx: np.ndarray) -> Params:
    grad = np.zeros_like(params[name])
    np.add.at(grad, ids.reshape(-1), dx.reshape(-1, dx.shape[-1]))
    return {name: grad}


# -- GRU -------------------------------------------------------------------------


def gru_forward(params: Params, name: str, x: np.ndarray,
                mask: np.ndarray) -> tuple[np.ndarray, dict]:
    """x: (B, T, d) embedded inputs, mask: (B, T) in {0, 1}.

    Returns the final hidden state (B, H) and a cache for the backward pass.
    A fully masked row returns the zero initial hidden state.
    """
    batch, steps, _ = x.shape
    hidden = params[f"{name}.Uz"].shape[0]
    wz, uz, bz = params[f"{name}.Wz"], params[f"{name}.Uz"], params[f"{name}.bz"]
    wr, ur, br = params[f"{name}.Wr"], params[f"{name}.Ur"], params[f"{name}.br"]
    wc, uc, bc = params[f"{name}.Wc"], params[f"{name}.Uc"], params[f"{name}.bc"]
    h = np.zeros((batch, hidden))
    trace = []
    for t in range(steps):
        xt = x[:, t, :]
        m = mask[:, t:t + 1]
        z = sigmoid(xt @ wz + h @ uz + bz)
        r = sigmoid(xt @ wr + h @ ur + br)
        hu = h @ uc
        c = np.tanh(xt @ wc + r * hu + bc)
        h_new = z * h + (1.0 - z) * c
        trace.append((xt, h, z, r, c, hu, m))
        h = m * h_new + (1.0 - m) * h
    return h, {"name": name, "trace": trace, "shape": x.shape}


def gru_backward(params: Params, cache: dict,
                 dh: np.ndarray) -> tuple[Params, np.ndarray]:
    """Propagate dL/dh_final back through time.

    Returns parameter gradients and dL/dx (B, T, d).
    """
    name = cache["name"]
    wz, uz = params[f"{name}.Wz"], params[f"{name}.Uz"]
    wr, ur = params[f"{name}.Wr"], params[f"{name}.Ur"]
    wc, uc = params[f"{name}.Wc"], params[f"{name}.Uc"]
    grads = {f"{name}.{g}": np.zeros_like(params[f"{name}.{g}"])
             for g in ("Wz", "Uz", "bz", "Wr", "Ur", "br", "Wc", "Uc", "bc")}
    dx_all = np.zeros(cache["shape"])
    dh = dh.copy()
    for t in range(len(cache["trace"]) - 1, -1, -1):
        xt, h_prev, z, r, c, hu, m = cache["trace"][t]
        dh_new = dh * m
        dh_prev = dh * (1.0 - m)
        # h' = z * h_prev + (1 - z) * c
        dz = dh_new * (h_prev - c)
        dc = dh_new * (1.0 - z)
        dh_prev = dh_prev + dh_new * z
        # c = tanh(x Wc + r * hu + bc)
        da_c = dc * (1.0 - c * c)
        grads[f"{name}.Wc"] += xt.T @ da_c
        grads[f"{name}.bc"] += da_c.sum(axis=0)
        dx = da_c @ wc.T
        dr = da_c * hu
        dhu = da_c * r
        grads[f"{name}.Uc"] += h_prev.T @ dhu
        dh_prev = dh_prev + dhu @ uc.T
        # z = sigmoid(x Wz + h_prev Uz + bz)
        da_z = dz * z * (1.0 - z)
        grads[f"{name}.Wz"] += xt.T @ da_z
        grads[f"{name}.Uz"] += h_prev.T @ da_z
        grads[f"{name}.bz"] += da_z.sum(axis=0)
        dx += da_z @ wz.T
        dh_prev = dh_prev + da_z @ uz.T
        # r = sigmoid(x Wr + h_prev Ur + br)
        da_r = dr * r * (1.0 - r)
        grads[f"{name}.Wr"] += xt.T @ da_r
        grads[f"{name}.Ur"] += h_prev.T @ da_r
        grads[f"{name}.br"] += da_r.sum(axis=0)
        dx += da_r @ wr.T
        dh_prev = dh_prev + da_r @ ur.T
        dx_all[:, t, :] = dx
        dh = dh_prev
    return grads, dx_all


# -- linear ----------------------------------------------------------------------


def linear_forward(params: Params, name: str,
                   x: np.ndarray) -> tuple[np.ndarray, dict]:
    return x @ params[f"{name}.W"] + params[f"{name}.b"], \
        {"name": name, "x": x}


def linear_backward(params: Params, cache: dict,
                    dy: np.ndarray) -> tuple[Params, np.ndarray]:
    name = cache["name"]
    grads = {f"{name}.W": cache["x"].T @ dy, f"{name}.b": dy.sum(axis=0)}
    return grads, dy @ params[f"{name}.W"].T


# -- optimizer -------------------------------------------------------------------


class Adam:
    """Standard Adam with bias correction; state serializes with checkpoints."""

    def __init__(self, params: Params, lr: float = 1e-3,
                 betas: tuple[float, float] = (0.9, 0.999),
                 eps: float = 1e-8) -> None:
        self.lr = lr
        self.beta1, self.beta2 = betas
        self.eps = eps
        self.t = 0
        self.m = zeros_like_params(params)
        self.v = zeros_like_params(params)

    def step(self, params: Params, grads: Params) -> None:
        self.t += 1
        b1, b2 = self.beta1, self.beta2
        correct1 = 1.0 - b1 ** self.t
        correct2 = 1.0 - b2 ** self.t
        for key, grad in grads.items():
            m = self.m[key] = b1 * self.m[key] + (1 - b1) * grad
            v = self.v[key] = b2 * self.v[key] + (1 - b2) * grad * grad
            params[key] -= self.lr * (m / correct1) / \
                (np.sqrt(v / correct2) + self.eps)

    def state(self) -> dict:
        return {"t": self.t, "m": self.m, "v": self.v, "lr": self.lr,
                "beta1": self.beta1, "beta2": self.beta2, "eps": self.eps}

    @classmethod
    def from_state(cls, params: Params, state: dict) -> "Adam":
        opt = cls(params, lr=state["lr"],
                  betas=(state["beta1"], state["beta2"]), eps=state["eps"])
        opt.t = state["t"]
        opt.m = {k: np.array(v) for k, v in state["m"].items()}
        opt.v = {k: np.array(v) for k, v in state["v"].items()}
        return opt


# -- utilities -------------------------------------------------------------------


def copy_params(params: Params) -> Params:
    return {k: v.copy() for k, v in params.items()}


def pad_batch(token_lists: list[list[int]]) -> tuple[np.ndarray, np.ndarray]:
    """Right-pad id lists with 0 into (B, T) ids and a float (B, T) mask.

    T is at least 1 so empty inputs still produce a (fully masked) batch.
    """
    batch = len(token_lists)
    width = max(1, max((len(t) for t in token_lists), default=1))
    ids = np.zeros((batch, width), dtype=np.int64)
    mask = np.zeros((batch, width))
    for i, toks in enumerate(token_lists):
        if toks:
            ids[i, :len(toks)] = toks
            mask[i, :len(toks)] = 1.0
    return ids, mask
