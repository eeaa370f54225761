"""Linear-chain CRF over sparse feature indicators: scoring, inference and likelihood."""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Iterable, Sequence

import numpy as np
import scipy.sparse as sp

from seqtag import chain
from seqtag.crf.features import sentence_features


@dataclass
class CrfModel:
    """Feature-indexed CRF weights.

    ``transition_weights`` has ``L + 1`` rows: rows ``0..L-1`` score
    label-to-label moves and the last row scores the virtual start state.
    """

    feature_index: dict[str, int]
    label_index: dict[str, int]
    unary_weights: np.ndarray
    transition_weights: np.ndarray
    metadata: dict = field(default_factory=dict)
    history: list = field(default_factory=list, repr=False)

    def __post_init__(self):
        F, L = len(self.feature_index), len(self.label_index)
        self.unary_weights = np.asarray(self.unary_weights, dtype=float).reshape(F, L)
        self.transition_weights = np.asarray(self.transition_weights, dtype=float).reshape(L + 1, L)
        self.labels = sorted(self.label_index, key=self.label_index.__getitem__)

    @classmethod
    def zeros(cls, features: Iterable[str], labels: Sequence[str], metadata=None) -> "CrfModel":
        feature_index = {f: i for i, f in enumerate(features)}
        label_index = {lab: i for i, lab in enumerate(labels)}
        F, L = len(feature_index), len(label_index)
        return cls(feature_index, label_index, np.zeros((F, L)), np.zeros((L + 1, L)),
                   dict(metadata or {}))

    @property
    def num_labels(self) -> int:
        return len(self.label_index)

    @property
    def trans(self) -> np.ndarray:
        return self.transition_weights[:-1]

    @property
    def start(self) -> np.ndarray:
        return self.transition_weights[-1]

    # flat parameter vector: unary weights, then transition rows (start row last)
    def get_flat(self) -> np.ndarray:
        return np.concatenate([self.unary_weights.ravel(), self.transition_weights.ravel()])

    def set_flat(self, w) -> None:
        n_unary = self.unary_weights.size
        self.unary_weights = np.array(w[:n_unary]).reshape(self.unary_weights.shape)
        self.transition_weights = np.array(w[n_unary:]).reshape(self.transition_weights.shape)

    def attribute_matrix(self, feats: Sequence[Iterable[str]]) -> sp.csr_matrix:
        """Sparse 0/1 matrix ``(n, F)``; features outside the index are dropped."""
        rows, cols = [], []
        for i, fs in enumerate(feats):
            for f in fs:
                j = self.feature_index.get(f)
                if j is not None:
                    rows.append(i)
                    cols.append(j)
        data = np.ones(len(rows))
        return sp.csr_matrix((data, (rows, cols)), shape=(len(feats), len(self.feature_index)))

    def emissions(self, feats) -> np.ndarray:
        return np.asarray(self.attribute_matrix(feats) @ self.unary_weights)

    def label_ids(self, labels: Sequence) -> np.ndarray:
        try:
            return np.array([self.label_index[str(lab)] for lab in labels], dtype=int)
        except KeyError as exc:
            raise ValueError(f"label {exc.args[0]} unknown to the model") from None


def sequence_score(model: CrfModel, feats, labels) -> float:
    if len(labels) != len(feats):
        raise ValueError("labels and features differ in length")
    return chain.sequence_score(model.emissions(feats), model.trans, model.start,
                                model.label_ids(labels))


def log_partition(model: CrfModel, feats) -> float:
    return chain.log_partition(model.emissions(feats), model.trans, model.start)


def marginals(model: CrfModel, feats) -> np.ndarray:
    """Per-position label posteriors, shape ``(n, L)``."""
    return chain.marginals(model.emissions(feats), model.trans, model.start)[1]


def viterbi(model: CrfModel, feats) -> list[str]:
    path, _ = chain.viterbi(model.emissions(feats), model.trans, model.start)
    return [model.labels[j] for j in path]


def predict_words(model: CrfModel, words: Sequence[str]) -> list[str]:
    return viterbi(model, sentence_features(words))


class CrfObjective:
    """Data term of the penalised negative log-likelihood over a fixed training set.

    Feature extraction and indexing happen once; each call only redoes the
    sparse products and the per-sentence forward-backward passes.
    """

    def __init__(self, model: CrfModel, sentences: Sequence[tuple[Sequence[str], Sequence]]):
        self.model = model
        feats = [sentence_features(words) for words, _ in sentences]
        self.lengths = np.array([len(f) for f in feats], dtype=int)
        self.offsets = np.concatenate([[0], np.cumsum(self.lengths)])
        self.X = sp.vstack([model.attribute_matrix(f) for f in feats], format="csr") \
            if feats else sp.csr_matrix((0, len(model.feature_index)))
        self.XT = self.X.T.tocsr()
        self.gold = [model.label_ids(labels) for _, labels in sentences]

    def data_term(self, w):
        m = self.model
        F, L = m.unary_weights.shape
        unary = w[:F * L].reshape(F, L)
        tw = w[F * L:].reshape(L + 1, L)
        trans, start = tw[:-1], tw[-1]
        E = np.asarray(self.X @ unary)
        dE = np.empty_like(E)
        d_tw = np.zeros_like(tw)
        total = 0.0
        for k, gold in enumerate(self.gold):
            a, b = self.offsets[k], self.offsets[k + 1]
            nll, d_em, d_trans, d_start = chain.nll_grad(E[a:b], trans, start, gold)
            total += nll
            dE[a:b] = d_em
            d_tw[:-1] += d_trans
            d_tw[-1] += d_start
        d_unary = np.asarray(self.XT @ dE)
        return total, np.concatenate([d_unary.ravel(), d_tw.ravel()])

    def smooth(self, w, c2: float):
        """Data term plus ``c2 * |w|^2``."""
        value, grad = self.data_term(w)
        return value + c2 * w.dot(w), grad + 2.0 * c2 * w


def penalized_value_and_grad(objective: CrfObjective, w, c1: float, c2: float):
    value, grad = objective.smooth(w, c2)
    return value + c1 * np.abs(w).sum(), grad + c1 * np.sign(w)


def nll_and_gradient(model: CrfModel, corpus, c1: float = 0.0, c2: float = 0.0):
    """Penalised NLL of ``corpus`` at the model's current weights, with gradient.

    ``corpus`` is a :class:`~seqtag.corpus.Corpus` or a sequence of
    ``(words, labels)`` pairs. The L1 subgradient at zero is taken as 0.
    """
    pairs = _as_pairs(corpus)
    return penalized_value_and_grad(CrfObjective(model, pairs), model.get_flat(), c1, c2)


def _as_pairs(corpus):
    if hasattr(corpus, "sentences"):
        return [(s.words, s.label_strings) for s in corpus.sentences]
    return list(corpus)


def rank_transitions(model: CrfModel, k: int = 10):
    """Top-k and bottom-k label transitions as ``(from, to, weight)`` triples.

    Ties keep row-major (from, to) index order in both lists.
    """
    if k < 1:
        raise ValueError("k must be at least 1")
    L = model.num_labels
    items = [(model.labels[a], model.labels[b], float(model.trans[a, b]))
             for a in range(L) for b in range(L)]
    top = sorted(items, key=lambda t: -t[2])[:k]
    bottom = sorted(items, key=lambda t: t[2])[:k]
    return top, bottom
