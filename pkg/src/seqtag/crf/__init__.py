"""Feature-based linear-chain CRF."""

from seqtag.crf.features import extract_features, sentence_features
from seqtag.crf.model import (
    CrfModel,
    log_partition,
    marginals,
    nll_and_gradient,
    predict_words,
    rank_transitions,
    sequence_score,
    viterbi,
)
from seqtag.crf.train import CRFTagger, CrfTrainConfig, search_regularization, train_crf

__all__ = [
    "CRFTagger", "CrfModel", "CrfTrainConfig", "extract_features", "log_partition",
    "marginals", "nll_and_gradient", "predict_words", "rank_transitions",
    "search_regularization", "sentence_features", "sequence_score", "train_crf", "viterbi",
]
