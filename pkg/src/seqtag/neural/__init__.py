"""LSTM-CNNs-CRF neural tagger implemented with numpy."""

from seqtag.neural.config import PRESETS, NeuralConfig, preset
from seqtag.neural.model import NeuralModel
from seqtag.neural.train import NeuralTagger, fit_sequences, predict_neural, train_neural

__all__ = [
    "NeuralConfig", "NeuralModel", "NeuralTagger", "PRESETS", "fit_sequences",
    "predict_neural", "preset", "train_neural",
]
