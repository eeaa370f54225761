from __future__ import annotations

import dataclasses
from dataclasses import dataclass


@dataclass(frozen=True)
class NeuralConfig:
    """Hyper-parameters of the LSTM-CNNs-CRF tagger.

    Defaults follow the Bhojpuri setting. ``word_hidden_dim`` is the size of
    the concatenated bidirectional state, so each direction gets half of it.
    ``char_out_dim`` is the size of the projected character-level word
    vector and defaults to ``char_hidden_dim``. The batch gradient is the
    sum of per-sentence gradients unless ``batch_reduction == "mean"``;
    ``clip_norm`` bounds the global norm of the batch gradient divided by
    the batch size (``None`` disables clipping).
    """

    word_emb_dim: int = 100
    char_emb_dim: int = 20
    char_hidden_dim: int = 25
    word_hidden_dim: int = 200
    conv_layers: int = 4
    conv_window: int = 3
    char_out_dim: int | None = None
    batch_size: int = 20
    epochs: int = 20
    learning_rate: float = 0.015
    lr_decay: float = 0.05
    dropout: float = 0.5
    l2: float = 1e-8
    batch_reduction: str = "sum"
    clip_norm: float | None = 5.0
    seed: int = 42

    def __post_init__(self):
        for name in ("word_emb_dim", "char_emb_dim", "char_hidden_dim", "word_hidden_dim",
                     "conv_layers", "conv_window", "batch_size", "epochs"):
            if getattr(self, name) < 1:
                raise ValueError(f"{name} must be >= 1")
        if self.word_hidden_dim % 2:
            raise ValueError("word_hidden_dim must be even (split across two directions)")
        if not 0.0 <= self.dropout < 1.0:
            raise ValueError("dropout must lie in [0, 1)")
        if self.learning_rate <= 0:
            raise ValueError("learning_rate must be positive")
        if self.l2 < 0 or self.lr_decay < 0:
            raise ValueError("l2 and lr_decay must be non-negative")
        if self.batch_reduction not in ("sum", "mean"):
            raise ValueError("batch_reduction must be 'sum' or 'mean'")
        if self.clip_norm is not None and self.clip_norm <= 0:
            raise ValueError("clip_norm must be positive")
        if self.char_out_dim is not None and self.char_out_dim < 1:
            raise ValueError("char_out_dim must be >= 1")

    @property
    def char_word_dim(self) -> int:
        return self.char_hidden_dim if self.char_out_dim is None else self.char_out_dim

    def learning_rate_at(self, epoch: int) -> float:
        """Learning rate for 0-based ``epoch``."""
        return self.learning_rate / (1.0 + self.lr_decay * epoch)

    def replace(self, **changes) -> "NeuralConfig":
        return dataclasses.replace(self, **changes)

    def as_dict(self) -> dict:
        return dataclasses.asdict(self)


#: Per-language (word emb, char emb, char hidden) settings.
PRESETS = {
    "bhojpuri": dict(word_emb_dim=100, char_emb_dim=20, char_hidden_dim=25),
    "magahi": dict(word_emb_dim=100, char_emb_dim=30, char_hidden_dim=50),
    "maithili": dict(word_emb_dim=200, char_emb_dim=20, char_hidden_dim=50),
}


def preset(name: str, **overrides) -> NeuralConfig:
    try:
        base = PRESETS[name.lower()]
    except KeyError:
        raise ValueError(f"unknown preset {name!r}; choose from {sorted(PRESETS)}") from None
    return NeuralConfig(**{**base, **overrides})
