"""Mini-batch SGD training for the LSTM-CNNs-CRF tagger, plus its estimator wrapper."""

from __future__ import annotations

import logging
from dataclasses import fields

import numpy as np
from sklearn.base import BaseEstimator
from sklearn.utils.validation import check_is_fitted

from seqtag.neural.config import NeuralConfig
from seqtag.neural.model import NeuralModel
from seqtag.tagset import label_sort_key
from seqtag.validation import check_nonempty, check_sequences

logger = logging.getLogger(__name__)


def _clip(grads: dict, max_norm):
    norm = np.sqrt(sum(float(np.sum(g * g)) for g in grads.values()))
    if norm > max_norm:
        scale = max_norm / norm
        for g in grads.values():
            g *= scale
        return scale
    return 1.0


def fit_sequences(X, y, config: NeuralConfig, callback=None) -> NeuralModel:
    """Train on token/label lists. ``model.history`` holds ``(epoch, mean loss, lr)`` rows."""
    X, y = check_sequences(X, y)
    check_nonempty(X)
    init_rng, order_rng, drop_rng = (np.random.default_rng(s)
                                     for s in np.random.SeedSequence(config.seed).spawn(3))
    words = sorted({w for s in X for w in s})
    chars = sorted({ch for w in words for ch in w})
    labels = sorted({lab for s in y for lab in s} | {"O"}, key=label_sort_key)
    model = NeuralModel.initialize(config, words, chars, labels, rng=init_rng)
    params = model.params

    n = len(X)
    for epoch in range(config.epochs):
        lr = config.learning_rate_at(epoch)
        order = order_rng.permutation(n)
        total = 0.0
        for start in range(0, n, config.batch_size):
            batch = order[start:start + config.batch_size]
            grads = model.zero_grads()
            nll = 0.0
            for i in batch:
                nll += model.nll_backward(X[i], y[i], grads, rng=drop_rng)
            per_sentence = len(batch)
            if config.batch_reduction == "mean":
                for g in grads.values():
                    g /= len(batch)
                per_sentence = 1
            model.add_l2_grad(grads)
            total += nll + len(batch) * model.l2_penalty()
            if config.clip_norm is not None:
                # threshold is on the per-sentence average gradient
                _clip(grads, config.clip_norm * per_sentence)
            for k, g in grads.items():
                params[k] -= lr * g
        mean_loss = total / n
        if not np.isfinite(mean_loss):
            raise FloatingPointError(f"non-finite training loss at epoch {epoch}")
        model.history.append((epoch, mean_loss, lr))
        logger.info("epoch %d loss %.6f lr %.6g", epoch, mean_loss, lr)
        if callback is not None:
            callback(epoch, mean_loss, lr)
    return model


def train_neural(train, config: NeuralConfig, callback=None) -> NeuralModel:
    """Train on a :class:`~seqtag.corpus.Corpus`."""
    return fit_sequences(train.X, train.y, config, callback=callback)


def predict_neural(model: NeuralModel, sentence) -> list[str]:
    words = sentence.words if hasattr(sentence, "words") else list(sentence)
    return model.predict(words)


_CONFIG_FIELDS = [f.name for f in fields(NeuralConfig)]


class NeuralTagger(BaseEstimator):
    """LSTM-CNNs-CRF sequence tagger.

    Constructor arguments mirror :class:`NeuralConfig`.
    """

    def __init__(self, word_emb_dim=100, char_emb_dim=20, char_hidden_dim=25,
                 word_hidden_dim=200, conv_layers=4, conv_window=3, char_out_dim=None,
                 batch_size=20, epochs=20, learning_rate=0.015, lr_decay=0.05, dropout=0.5,
                 l2=1e-8, batch_reduction="sum", clip_norm=5.0, seed=42):
        self.word_emb_dim = word_emb_dim
        self.char_emb_dim = char_emb_dim
        self.char_hidden_dim = char_hidden_dim
        self.word_hidden_dim = word_hidden_dim
        self.conv_layers = conv_layers
        self.conv_window = conv_window
        self.char_out_dim = char_out_dim
        self.batch_size = batch_size
        self.epochs = epochs
        self.learning_rate = learning_rate
        self.lr_decay = lr_decay
        self.dropout = dropout
        self.l2 = l2
        self.batch_reduction = batch_reduction
        self.clip_norm = clip_norm
        self.seed = seed

    @classmethod
    def from_config(cls, config: NeuralConfig) -> "NeuralTagger":
        return cls(**config.as_dict())

    def get_config(self) -> NeuralConfig:
        return NeuralConfig(**{k: getattr(self, k) for k in _CONFIG_FIELDS})

    def fit(self, X, y):
        self.model_ = fit_sequences(X, y, self.get_config())
        self.classes_ = list(self.model_.labels)
        self.history_ = list(self.model_.history)
        return self

    def predict(self, X):
        check_is_fitted(self, "model_")
        return [self.model_.predict(words) for words in check_sequences(X)]

    def score(self, X, y):
        """Token accuracy."""
        X, y = check_sequences(X, y, check_labels=False)
        pred = self.predict(X)
        total = sum(len(s) for s in y)
        return sum(p == g for ps, gs in zip(pred, y) for p, g in zip(ps, gs)) / total
