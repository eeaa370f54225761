import itertools
import math

import numpy as np
import pytest

from seqtag.synthetic import deterministic_corpus


def brute_scores(emissions, trans, start):
    """Score of every label sequence by direct summation: {path: score}."""
    n, L = emissions.shape
    out = {}
    for path in itertools.product(range(L), repeat=n):
        s = start[path[0]]
        for i, y in enumerate(path):
            s += emissions[i, y]
            if i:
                s += trans[path[i - 1], y]
        out[path] = s
    return out


def brute_log_partition(emissions, trans, start):
    scores = list(brute_scores(emissions, trans, start).values())
    m = max(scores)
    return m + math.log(sum(math.exp(s - m) for s in scores))


def brute_argmax(emissions, trans, start):
    """Highest-scoring path; ties resolved to the lexicographically smallest path."""
    scores = brute_scores(emissions, trans, start)
    best = max(scores.values())
    return min(p for p, s in scores.items() if s == best), best


def central_difference(f, x, eps=1e-5, coords=None):
    """Numerical gradient of scalar ``f`` at flat array ``x`` (modified in place, restored)."""
    coords = range(x.size) if coords is None else coords
    g = np.zeros(x.size)
    flat = x.reshape(-1)
    for i in coords:
        old = flat[i]
        flat[i] = old + eps
        fp = f()
        flat[i] = old - eps
        fm = f()
        flat[i] = old
        g[i] = (fp - fm) / (2 * eps)
    return g


@pytest.fixture(scope="session")
def det_corpus():
    return deterministic_corpus(50, seed=0)
