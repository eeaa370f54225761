"""Training for the feature CRF: L-BFGS/OWL-QN fitting and random-search CV over (c1, c2)."""

from __future__ import annotations

import dataclasses
import logging
from dataclasses import dataclass
from typing import Optional

from scipy.stats import loguniform
from sklearn.base import BaseEstimator
from sklearn.model_selection import KFold, RandomizedSearchCV
from sklearn.utils.validation import check_is_fitted

from seqtag.crf.features import sentence_features
from seqtag.crf.model import CrfModel, CrfObjective, predict_words
from seqtag.crf.optimize import owlqn
from seqtag.tagset import label_sort_key
from seqtag.validation import check_nonempty, check_sequences

logger = logging.getLogger(__name__)

SEARCH_RANGE = (1e-3, 1.0)


@dataclass
class CrfTrainConfig:
    c1: Optional[float] = 0.1
    c2: Optional[float] = 0.1
    max_iterations: int = 100
    cv_folds: int = 3
    search_iterations: int = 50
    search: bool = False
    seed: int = 42

    def __post_init__(self):
        if self.max_iterations < 1:
            raise ValueError("max_iterations must be >= 1")
        if self.search:
            if self.cv_folds < 2:
                raise ValueError("cross-validation needs at least 2 folds")
        elif self.c1 is None or self.c2 is None:
            raise ValueError("c1 and c2 are required unless search is enabled")
        for name in ("c1", "c2"):
            v = getattr(self, name)
            if v is not None and v < 0:
                raise ValueError(f"{name} must be non-negative")


def _fit_weights(X, y, c1, c2, max_iterations, metadata) -> CrfModel:
    features = sorted({f for words in X for fs in sentence_features(words) for f in fs})
    labels = sorted({lab for seq in y for lab in seq} | {"O"}, key=label_sort_key)
    model = CrfModel.zeros(features, labels, metadata)
    objective = CrfObjective(model, list(zip(X, y)))
    history = []

    def log(it, value):
        history.append(value)
        logger.debug("iter %d objective %.6f", it, value)

    result = owlqn(lambda w: objective.smooth(w, c2), model.get_flat(), l1=c1,
                   max_iter=max_iterations, callback=log)
    model.set_flat(result.x)
    model.history = [result.history[0]] + history
    logger.info("CRF fit: %d iterations, objective %.6f, converged=%s",
                result.n_iter, result.fun, result.converged)
    return model


def train_crf(train, config: CrfTrainConfig) -> CrfModel:
    """Fit a CRF on ``train`` (a Corpus), optionally choosing (c1, c2) by random search."""
    tagger = CRFTagger(c1=config.c1, c2=config.c2, max_iterations=config.max_iterations)
    X, y = train.X, train.y
    if config.search:
        check_nonempty(X)
        tagger = search_regularization(X, y, n_iter=config.search_iterations,
                                       cv=config.cv_folds, seed=config.seed,
                                       max_iterations=config.max_iterations)
    else:
        tagger.fit(X, y)
    model = tagger.model_
    model.metadata = {"train_config": dataclasses.asdict(
        dataclasses.replace(config, c1=tagger.c1, c2=tagger.c2)), "seed": config.seed}
    return model


def search_regularization(X, y, n_iter=50, cv=3, seed=42, max_iterations=100):
    """Random search over log-uniform c1, c2 in [1e-3, 1]; refits the best pair on all data.

    Candidates are scored by mean held-out token accuracy over ``cv`` folds.
    Returns the refitted :class:`CRFTagger`; the search object is kept on
    its ``search_`` attribute.
    """
    search = RandomizedSearchCV(
        CRFTagger(max_iterations=max_iterations),
        param_distributions={"c1": loguniform(*SEARCH_RANGE), "c2": loguniform(*SEARCH_RANGE)},
        n_iter=n_iter,
        cv=KFold(n_splits=cv, shuffle=True, random_state=seed),
        random_state=seed,
        refit=True,
    )
    search.fit(X, y)
    best = search.best_estimator_
    best.search_ = search
    logger.info("best c1=%.4g c2=%.4g (cv accuracy %.4f)", best.c1, best.c2, search.best_score_)
    return best


class CRFTagger(BaseEstimator):
    """Linear-chain CRF sequence tagger with elastic-net regularisation.

    ``X`` is a list of token lists and ``y`` a list of label-string lists.
    """

    def __init__(self, c1=0.1, c2=0.1, max_iterations=100):
        self.c1 = c1
        self.c2 = c2
        self.max_iterations = max_iterations

    def fit(self, X, y):
        X, y = check_sequences(X, y)
        check_nonempty(X)
        c1, c2 = float(self.c1), float(self.c2)
        if c1 < 0 or c2 < 0:
            raise ValueError("c1 and c2 must be non-negative")
        self.model_ = _fit_weights(X, y, c1, c2, int(self.max_iterations),
                                   {"train_config": self.get_params()})
        self.classes_ = list(self.model_.labels)
        return self

    def predict(self, X):
        check_is_fitted(self, "model_")
        X = check_sequences(X)
        return [predict_words(self.model_, words) for words in X]

    def score(self, X, y):
        """Token accuracy."""
        X, y = check_sequences(X, y, check_labels=False)
        pred = self.predict(X)
        total = sum(len(s) for s in y)
        hits = sum(p == g for ps, gs in zip(pred, y) for p, g in zip(ps, gs))
        return hits / total if total else 0.0
