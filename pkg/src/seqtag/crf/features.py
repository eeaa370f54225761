"""Hand-crafted token features for the feature-based CRF."""

from __future__ import annotations

from typing import Sequence

WINDOW = 2
AFFIX_MAX = 3


def _digit(word: str) -> str:
    return "true" if word.isdigit() else "false"


def extract_features(words: Sequence[str], position: int) -> set[str]:
    """Feature strings for ``words[position]``.

    Current word, words within two positions either side, prefixes and
    suffixes up to length 3, digit flags over the same window, and
    sentence-boundary flags. ``bias`` is always present.
    """
    n = len(words)
    if not 0 <= position < n:
        raise IndexError(f"position {position} outside sentence of length {n}")
    w = words[position]
    feats = {"bias", f"w0={w}", f"isdigit0={_digit(w)}"}
    for k in range(1, min(AFFIX_MAX, len(w)) + 1):
        feats.add(f"pre{k}={w[:k]}")
        feats.add(f"suf{k}={w[-k:]}")
    for off in range(-WINDOW, WINDOW + 1):
        j = position + off
        if off == 0 or not 0 <= j < n:
            continue
        feats.add(f"w{off:+d}={words[j]}")
        feats.add(f"isdigit{off:+d}={_digit(words[j])}")
    if position == 0:
        feats.add("BOS")
    if position == n - 1:
        feats.add("EOS")
    return feats


def sentence_features(words: Sequence[str]) -> list[set[str]]:
    return [extract_features(words, i) for i in range(len(words))]
