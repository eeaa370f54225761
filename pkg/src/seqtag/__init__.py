"""Sequence labelling for named entity recognition: a feature CRF and an LSTM-CNNs-CRF tagger."""

__version__ = "0.1.0"
