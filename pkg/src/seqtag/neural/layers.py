"""Forward and backward passes of the network's building blocks.

Each ``*_forward`` returns ``(output, cache)``; the matching ``*_backward``
takes the upstream gradient and the cache and *adds* parameter gradients
into a dict keyed like the parameters.
"""

from __future__ import annotations

import numpy as np
from scipy.special import expit as sigmoid


# ---------------------------------------------------------------- char CNN

def _same_pad(h: int) -> tuple[int, int]:
    left = (h - 1) // 2
    return left, h - 1 - left


def char_cnn_forward(char_ids: list[np.ndarray], p: dict, prefix="char", n_layers=4):
    """Character-level word vectors for a batch of words.

    ``char_ids`` holds one int array per word. Words are embedded, padded
    with zero rows up to the filter width, run through ``n_layers`` stacked
    same-length convolutions with ReLU, max-pooled over positions and
    projected. Returns an array of shape ``(num_words, out_dim)``.
    """
    emb = p[f"{prefix}_emb"]
    h = p[f"{prefix}.conv0.F"].shape[0]
    left, right = _same_pad(h)
    lengths = np.array([max(len(c), h) for c in char_ids])
    nw, M = len(char_ids), int(lengths.max())
    mask = (np.arange(M)[None, :] < lengths[:, None])[:, :, None].astype(float)

    X = np.zeros((nw, M, emb.shape[1]))
    for w, c in enumerate(char_ids):
        X[w, :len(c)] = emb[c]
    layers = []
    for ell in range(n_layers):
        F = p[f"{prefix}.conv{ell}.F"]
        b = p[f"{prefix}.conv{ell}.b"]
        Xp = np.pad(X, ((0, 0), (left, right), (0, 0)))
        cols = np.stack([Xp[:, j:j + M] for j in range(h)], axis=2)  # (nw, M, h, in)
        Z = cols.reshape(nw, M, -1) @ F.reshape(-1, F.shape[2]) + b
        A = np.maximum(Z, 0.0) * mask
        layers.append((cols, Z))
        X = A
    pooled_src = np.where(mask > 0, X, -np.inf)
    arg = np.argmax(pooled_src, axis=1)  # (nw, k)
    pooled = np.take_along_axis(X, arg[:, None, :], axis=1)[:, 0, :]
    out = pooled @ p[f"{prefix}_proj.W"] + p[f"{prefix}_proj.b"]
    cache = (char_ids, mask, layers, arg, pooled, M, h, n_layers, prefix)
    return out, cache


def char_cnn_backward(d_out, cache, p: dict, grads: dict):
    char_ids, mask, layers, arg, pooled, M, h, n_layers, prefix = cache
    left, _ = _same_pad(h)
    grads[f"{prefix}_proj.W"] += pooled.T @ d_out
    grads[f"{prefix}_proj.b"] += d_out.sum(axis=0)
    d_pooled = d_out @ p[f"{prefix}_proj.W"].T
    nw, k = d_pooled.shape
    dA = np.zeros((nw, M, k))
    np.put_along_axis(dA, arg[:, None, :], d_pooled[:, None, :], axis=1)
    for ell in range(n_layers - 1, -1, -1):
        cols, Z = layers[ell]
        F = p[f"{prefix}.conv{ell}.F"]
        dZ = dA * mask * (Z > 0)
        flat = cols.reshape(nw * M, -1)
        dZf = dZ.reshape(nw * M, -1)
        grads[f"{prefix}.conv{ell}.F"] += (flat.T @ dZf).reshape(F.shape)
        grads[f"{prefix}.conv{ell}.b"] += dZf.sum(axis=0)
        dcols = (dZf @ F.reshape(-1, F.shape[2]).T).reshape(nw, M, h, -1)
        dXp = np.zeros((nw, M + h - 1, dcols.shape[3]))
        for j in range(h):
            dXp[:, j:j + M] += dcols[:, :, j]
        dA = dXp[:, left:left + M]
    g_emb = grads[f"{prefix}_emb"]
    for w, c in enumerate(char_ids):
        np.add.at(g_emb, c, dA[w, :len(c)])


# ---------------------------------------------------------------- LSTM

def lstm_forward(X, Wx, Wh, b):
    """Unidirectional LSTM from zero state; gate order (input, forget, output, cell)."""
    n = X.shape[0]
    H = Wh.shape[0]
    pre_x = X @ Wx + b
    hs = np.zeros((n + 1, H))
    cs = np.zeros((n + 1, H))
    gates = np.zeros((n, 4 * H))
    for t in range(n):
        z = pre_x[t] + hs[t] @ Wh
        i, f, o = sigmoid(z[:H]), sigmoid(z[H:2 * H]), sigmoid(z[2 * H:3 * H])
        g = np.tanh(z[3 * H:])
        cs[t + 1] = f * cs[t] + i * g
        hs[t + 1] = o * np.tanh(cs[t + 1])
        gates[t] = np.concatenate([i, f, o, g])
    return hs[1:], (X, hs, cs, gates)


def lstm_backward(d_h, cache, Wx, Wh, grads: dict, prefix: str):
    X, hs, cs, gates = cache
    n = X.shape[0]
    H = Wh.shape[0]
    d_pre = np.zeros((n, 4 * H))
    dh_next = np.zeros(H)
    dc_next = np.zeros(H)
    for t in range(n - 1, -1, -1):
        i, f, o, g = (gates[t, :H], gates[t, H:2 * H], gates[t, 2 * H:3 * H], gates[t, 3 * H:])
        tc = np.tanh(cs[t + 1])
        dh = d_h[t] + dh_next
        do = dh * tc
        dc = dh * o * (1.0 - tc * tc) + dc_next
        di = dc * g
        dg = dc * i
        df = dc * cs[t]
        dc_next = dc * f
        dz = np.concatenate([di * i * (1 - i), df * f * (1 - f), do * o * (1 - o), dg * (1 - g * g)])
        d_pre[t] = dz
        dh_next = Wh @ dz
    grads[f"{prefix}.Wx"] += X.T @ d_pre
    grads[f"{prefix}.Wh"] += hs[:-1].T @ d_pre
    grads[f"{prefix}.b"] += d_pre.sum(axis=0)
    return d_pre @ Wx.T


def bilstm_forward(X, p: dict):
    """Concatenate forward states with backward states (run on the reversed input)."""
    hf, cf = lstm_forward(X, p["lstm_f.Wx"], p["lstm_f.Wh"], p["lstm_f.b"])
    hb, cb = lstm_forward(X[::-1], p["lstm_b.Wx"], p["lstm_b.Wh"], p["lstm_b.b"])
    return np.concatenate([hf, hb[::-1]], axis=1), (cf, cb, hf.shape[1])


def bilstm_backward(d_h, cache, p: dict, grads: dict):
    cf, cb, H = cache
    dX = lstm_backward(d_h[:, :H], cf, p["lstm_f.Wx"], p["lstm_f.Wh"], grads, "lstm_f")
    dXb = lstm_backward(d_h[::-1, H:], cb, p["lstm_b.Wx"], p["lstm_b.Wh"], grads, "lstm_b")
    return dX + dXb[::-1]
