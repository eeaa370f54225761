"""LSTM-CNNs-CRF network: parameters, forward pass, exact gradients, decoding."""

from __future__ import annotations

from typing import Sequence

import numpy as np

from seqtag import chain
from seqtag.neural.config import NeuralConfig
from seqtag.neural.layers import (
    bilstm_backward,
    bilstm_forward,
    char_cnn_backward,
    char_cnn_forward,
)

UNK = "<unk>"


def _glorot(rng, shape, fan_in, fan_out):
    bound = np.sqrt(6.0 / (fan_in + fan_out))
    return rng.uniform(-bound, bound, size=shape)


def init_params(config: NeuralConfig, n_words: int, n_chars: int, n_labels: int, rng) -> dict:
    """Glorot-uniform matrices, zero biases, forget-gate bias 1."""
    c = config
    h, k = c.conv_window, c.char_hidden_dim
    D = c.char_word_dim + c.word_emb_dim
    H = c.word_hidden_dim // 2
    p = {"char_emb": _glorot(rng, (n_chars, c.char_emb_dim), n_chars, c.char_emb_dim)}
    in_ch = c.char_emb_dim
    for ell in range(c.conv_layers):
        p[f"char.conv{ell}.F"] = _glorot(rng, (h, in_ch, k), h * in_ch, k)
        p[f"char.conv{ell}.b"] = np.zeros(k)
        in_ch = k
    p["char_proj.W"] = _glorot(rng, (k, c.char_word_dim), k, c.char_word_dim)
    p["char_proj.b"] = np.zeros(c.char_word_dim)
    p["word_emb"] = _glorot(rng, (n_words, c.word_emb_dim), n_words, c.word_emb_dim)
    for d in ("lstm_f", "lstm_b"):
        p[f"{d}.Wx"] = _glorot(rng, (D, 4 * H), D, 4 * H)
        p[f"{d}.Wh"] = _glorot(rng, (H, 4 * H), H, 4 * H)
        b = np.zeros(4 * H)
        b[H:2 * H] = 1.0
        p[f"{d}.b"] = b
    p["crf.W1"] = _glorot(rng, (2 * H, n_labels), 2 * H, n_labels)
    p["crf.W2"] = _glorot(rng, (n_labels, n_labels), n_labels, n_labels)
    p["crf.start"] = np.zeros(n_labels)
    return p


class NeuralModel:
    """Trained (or freshly initialised) LSTM-CNNs-CRF tagger.

    ``params`` maps parameter names to arrays. Index maps reserve id 0 for
    the unknown word and the unknown character.
    """

    def __init__(self, config: NeuralConfig, vocab_index: dict, char_index: dict,
                 label_index: dict, params: dict):
        self.config = config
        self.vocab_index = vocab_index
        self.char_index = char_index
        self.label_index = label_index
        self.labels = sorted(label_index, key=label_index.__getitem__)
        self.params = params
        self.history: list = []

    @classmethod
    def initialize(cls, config: NeuralConfig, words, chars, labels, rng=None) -> "NeuralModel":
        rng = np.random.default_rng(config.seed) if rng is None else rng
        vocab_index = {UNK: 0, **{w: i + 1 for i, w in enumerate(words)}}
        char_index = {UNK: 0, **{ch: i + 1 for i, ch in enumerate(chars)}}
        label_index = {lab: i for i, lab in enumerate(labels)}
        params = init_params(config, len(vocab_index), len(char_index), len(label_index), rng)
        return cls(config, vocab_index, char_index, label_index, params)

    @property
    def num_labels(self) -> int:
        return len(self.label_index)

    def word_ids(self, words: Sequence[str]) -> np.ndarray:
        return np.array([self.vocab_index.get(w, 0) for w in words], dtype=int)

    def char_ids(self, word: str) -> np.ndarray:
        if not word:
            raise ValueError("empty word")
        return np.array([self.char_index.get(ch, 0) for ch in word], dtype=int)

    def label_ids(self, labels) -> np.ndarray:
        return np.array([self.label_index[str(lab)] for lab in labels], dtype=int)

    def zero_grads(self) -> dict:
        return {k: np.zeros_like(v) for k, v in self.params.items()}

    # ---- forward pieces

    def char_word_embed(self, word: str) -> np.ndarray:
        out, _ = char_cnn_forward([self.char_ids(word)], self.params,
                                  n_layers=self.config.conv_layers)
        return out[0]

    def embed_sentence(self, words: Sequence[str], rng=None):
        """Rows are [char-CNN vector, word embedding]; ``rng`` turns on inverted dropout.

        Returns ``(WE, cache)``.
        """
        char_vecs, ccache = char_cnn_forward([self.char_ids(w) for w in words], self.params,
                                             n_layers=self.config.conv_layers)
        wids = self.word_ids(words)
        WE = np.concatenate([char_vecs, self.params["word_emb"][wids]], axis=1)
        mask = None
        p = self.config.dropout
        if rng is not None and p > 0:
            mask = (rng.random(WE.shape) >= p) / (1.0 - p)
            WE = WE * mask
        return WE, (ccache, wids, mask)

    def hidden(self, words, rng=None):
        WE, ecache = self.embed_sentence(words, rng)
        h, lcache = bilstm_forward(WE, self.params)
        return h, (ecache, lcache)

    def emissions(self, h: np.ndarray) -> np.ndarray:
        return h @ self.params["crf.W1"]

    def crf_nll(self, h: np.ndarray, gold) -> float:
        p = self.params
        E = self.emissions(h)
        ids = self.label_ids(gold)
        return chain.log_partition(E, p["crf.W2"], p["crf.start"]) - \
            chain.sequence_score(E, p["crf.W2"], p["crf.start"], ids)

    def l2_penalty(self) -> float:
        return 0.5 * self.config.l2 * sum(float(np.sum(v * v)) for v in self.params.values())

    def loss(self, words, gold, rng=None) -> float:
        """``crf_nll + (l2/2) * |theta|^2`` for one sentence."""
        h, _ = self.hidden(words, rng)
        return self.crf_nll(h, gold) + self.l2_penalty()

    # ---- backward

    def nll_backward(self, words, gold, grads: dict, rng=None) -> float:
        """Accumulate gradients of the sentence's CRF NLL into ``grads``; return the NLL."""
        p = self.params
        h, (ecache, lcache) = self.hidden(words, rng)
        E = self.emissions(h)
        nll, dE, dW2, dstart = chain.nll_grad(E, p["crf.W2"], p["crf.start"], self.label_ids(gold))
        grads["crf.W1"] += h.T @ dE
        grads["crf.W2"] += dW2
        grads["crf.start"] += dstart
        dh = dE @ p["crf.W1"].T
        dWE = bilstm_backward(dh, lcache, p, grads)
        ccache, wids, mask = ecache
        if mask is not None:
            dWE = dWE * mask
        cdim = self.config.char_word_dim
        np.add.at(grads["word_emb"], wids, dWE[:, cdim:])
        char_cnn_backward(dWE[:, :cdim], ccache, p, grads)
        return nll

    def add_l2_grad(self, grads: dict, scale: float = 1.0) -> None:
        lam = self.config.l2 * scale
        if lam:
            for k, v in self.params.items():
                grads[k] += lam * v

    def backward(self, words, gold, rng=None) -> tuple[float, dict]:
        """Loss and exact gradient of ``crf_nll + (l2/2)|theta|^2`` for one sentence."""
        grads = self.zero_grads()
        nll = self.nll_backward(words, gold, grads, rng)
        self.add_l2_grad(grads)
        return nll + self.l2_penalty(), grads

    # ---- inference

    def predict(self, words: Sequence[str]) -> list[str]:
        h, _ = self.hidden(words)
        p = self.params
        path, _ = chain.viterbi(self.emissions(h), p["crf.W2"], p["crf.start"])
        return [self.labels[j] for j in path]
