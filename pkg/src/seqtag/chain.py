"""Exact inference for linear-chain CRFs in log space.

All routines take per-position emission scores ``emissions`` of shape
``(n, L)``, label-to-label transition scores ``trans`` of shape ``(L, L)``
(row = previous label) and start scores ``start`` of shape ``(L,)`` for the
virtual state preceding position 0. There is no stop state.
"""

from __future__ import annotations

import numpy as np


def logsumexp(a, axis=None):
    # scores are always finite here, so no -inf guard
    m = np.max(a, axis=axis, keepdims=True)
    out = np.log(np.sum(np.exp(a - m), axis=axis, keepdims=True)) + m
    return out.squeeze(axis) if axis is not None else out.item()


def sequence_score(emissions, trans, start, labels) -> float:
    labels = np.asarray(labels, dtype=int)
    score = start[labels[0]] + emissions[np.arange(len(labels)), labels].sum()
    score += trans[labels[:-1], labels[1:]].sum()
    return float(score)


def forward(emissions, trans, start):
    """Log forward table ``alpha[i, y]``: log-sum of all prefixes ending in ``y`` at ``i``."""
    n, L = emissions.shape
    alpha = np.empty((n, L))
    alpha[0] = start + emissions[0]
    for i in range(1, n):
        alpha[i] = logsumexp(alpha[i - 1][:, None] + trans, axis=0) + emissions[i]
    return alpha


def backward(emissions, trans):
    """Log backward table ``beta[i, y]``: log-sum of all suffixes after ``y`` at ``i``."""
    n, L = emissions.shape
    beta = np.zeros((n, L))
    for i in range(n - 2, -1, -1):
        beta[i] = logsumexp(trans + (emissions[i + 1] + beta[i + 1])[None, :], axis=1)
    return beta


def log_partition(emissions, trans, start) -> float:
    return float(logsumexp(forward(emissions, trans, start)[-1]))


def log_partition_backward(emissions, trans, start) -> float:
    beta = backward(emissions, trans)
    return float(logsumexp(start + emissions[0] + beta[0]))


def marginals(emissions, trans, start):
    """Forward-backward posteriors.

    Returns ``(log_z, node, edge)`` where ``node[i, y] = p(y_i = y)`` and
    ``edge[a, b]`` is the expected number of ``a -> b`` transitions summed
    over the sentence.
    """
    alpha = forward(emissions, trans, start)
    beta = backward(emissions, trans)
    log_z = logsumexp(alpha[-1])
    node = np.exp(alpha + beta - log_z)
    L = emissions.shape[1]
    edge = np.zeros((L, L))
    for i in range(1, emissions.shape[0]):
        edge += np.exp(alpha[i - 1][:, None] + trans + (emissions[i] + beta[i])[None, :] - log_z)
    return float(log_z), node, edge


def viterbi(emissions, trans, start) -> tuple[list[int], float]:
    """Best label path and its score; ties go to the lowest label index."""
    n, L = emissions.shape
    delta = start + emissions[0]
    back = np.zeros((n, L), dtype=int)
    for i in range(1, n):
        cand = delta[:, None] + trans
        back[i] = np.argmax(cand, axis=0)
        delta = cand[back[i], np.arange(L)] + emissions[i]
    best = int(np.argmax(delta))
    path = [best]
    for i in range(n - 1, 0, -1):
        best = int(back[i, best])
        path.append(best)
    path.reverse()
    return path, float(np.max(delta))


def nll_grad(emissions, trans, start, labels):
    """Negative log-likelihood of ``labels`` and its gradients.

    Returns ``(nll, d_emissions, d_trans, d_start)``.
    """
    labels = np.asarray(labels, dtype=int)
    log_z, node, edge = marginals(emissions, trans, start)
    nll = log_z - sequence_score(emissions, trans, start, labels)
    d_em = node.copy()
    d_em[np.arange(len(labels)), labels] -= 1.0
    d_trans = edge
    np.subtract.at(d_trans, (labels[:-1], labels[1:]), 1.0)
    d_start = node[0].copy()
    d_start[labels[0]] -= 1.0
    return nll, d_em, d_trans, d_start
