"""Input checks shared by the estimators."""

from __future__ import annotations

from seqtag.tagset import Label


class TrainingError(ValueError):
    pass


def check_sequences(X, y=None, *, check_labels=True):
    """Validate token sequences (and aligned label sequences).

    Returns lists of lists of strings. Raises ``ValueError`` on empty
    sentences, non-string tokens, whitespace inside tokens, or length
    mismatches between ``X`` and ``y``.
    """
    if isinstance(X, str):
        raise ValueError("X must be a sequence of token sequences, not a string")
    X = [list(words) for words in X]
    for i, words in enumerate(X):
        if not words:
            raise ValueError(f"sentence {i} is empty")
        for w in words:
            if not isinstance(w, str) or not w or any(c.isspace() for c in w):
                raise ValueError(f"sentence {i}: invalid token {w!r}")
    if y is None:
        return X
    y = [[str(lab) for lab in labels] for labels in y]
    if len(y) != len(X):
        raise ValueError(f"X has {len(X)} sentences but y has {len(y)}")
    for i, (words, labels) in enumerate(zip(X, y)):
        if len(words) != len(labels):
            raise ValueError(f"sentence {i}: {len(words)} tokens but {len(labels)} labels")
        if check_labels:
            for lab in labels:
                Label.parse(lab)
    return X, y


def check_nonempty(X, what="training data"):
    if len(X) == 0:
        raise TrainingError(f"{what} is empty")
