"""Synthetic corpora with known composition, for smoke tests and demos."""

from __future__ import annotations

import numpy as np

from seqtag.corpus import Corpus, Sentence
from seqtag.tagset import KINDS

# surface -> label; 30 surfaces over 6 labels covering ENAMEX, NUMEX and TIMEX
DETERMINISTIC_LEXICON: dict[str, str] = {
    **{w: "O" for w in ("ghara", "gaila", "rahe", "ke", "me", "se", "bA", "hai",
                        "kahalan", "log", "Aja", "ekra")},
    **{w: "B-Person" for w in ("rAma", "sIwA", "mohana", "gIwA")},
    **{w: "I-Person" for w in ("kumAra", "xevI", "prasAxa", "siMha")},
    **{w: "B-Money" for w in ("xasa_rupayA", "sO_rupayA", "pacAsa_rupayA", "hajAra_rupayA")},
    **{w: "B-Year" for w in ("1990", "2001", "2010")},
    **{w: "I-Year" for w in ("isavI", "san", "sAla")},
}


def deterministic_corpus(n_sentences: int = 50, seed: int = 0, lexicon=None) -> Corpus:
    """Sentences in which every surface always carries the same label.

    Each sentence mixes filler words with Person (B, optionally I), Money
    and Year (B, optionally I) chunks, so the BIO sequences are well formed.
    """
    lexicon = DETERMINISTIC_LEXICON if lexicon is None else lexicon
    rng = np.random.default_rng(seed)
    by_label: dict[str, list[str]] = {}
    for w, lab in lexicon.items():
        by_label.setdefault(lab, []).append(w)

    def pick(lab):
        return by_label[lab][rng.integers(len(by_label[lab]))]

    chunk_types = [k for k in ("Person", "Money", "Year") if f"B-{k}" in by_label]
    sentences = []
    for _ in range(n_sentences):
        words, labels = [], []
        for _ in range(rng.integers(3, 6)):
            for _ in range(rng.integers(1, 3)):
                words.append(pick("O"))
                labels.append("O")
            kind = chunk_types[rng.integers(len(chunk_types))]
            words.append(pick(f"B-{kind}"))
            labels.append(f"B-{kind}")
            if f"I-{kind}" in by_label and rng.random() < 0.6:
                words.append(pick(f"I-{kind}"))
                labels.append(f"I-{kind}")
        sentences.append(Sentence.from_pairs(words, labels))
    return Corpus(tuple(sentences), "deterministic")


def random_corpus(n_sentences: int, kinds=None, seed: int = 0, vocab_size: int = 200,
                  max_len: int = 12, entity_rate: float = 0.3) -> Corpus:
    """Random corpus whose entity mentions draw from ``kinds`` (default: all 22)."""
    rng = np.random.default_rng(seed)
    kinds = [k.name for k in KINDS] if kinds is None else list(kinds)
    vocab = [f"t{i}" for i in range(vocab_size)]
    sentences = []
    for _ in range(n_sentences):
        n = int(rng.integers(1, max_len + 1))
        words = [vocab[j] for j in rng.integers(vocab_size, size=n)]
        labels = []
        prev_kind = None
        for _ in range(n):
            if rng.random() < entity_rate:
                kind = kinds[rng.integers(len(kinds))]
                if prev_kind == kind and rng.random() < 0.5:
                    labels.append(f"I-{kind}")
                else:
                    labels.append(f"B-{kind}")
                prev_kind = kind
            else:
                labels.append("O")
                prev_kind = None
        sentences.append(Sentence.from_pairs(words, labels))
    return Corpus(tuple(sentences), "random")


def imbalanced_corpus(n_sentences: int = 60, seed: int = 0) -> Corpus:
    """One dominant kind (Person) plus rare Disease, Money and Day mentions."""
    rng = np.random.default_rng(seed)
    persons = [f"nAma{i}" for i in range(6)]
    rare = {"Disease": ["jvara", "mEleriyA"], "Money": ["sO_rupayA"], "Day": ["somavAra"]}
    fillers = [f"sabxa{i}" for i in range(25)]
    sentences = []
    for s in range(n_sentences):
        words, labels = [], []
        for _ in range(rng.integers(5, 10)):
            words.append(fillers[rng.integers(len(fillers))])
            labels.append("O")
        pos = int(rng.integers(len(words) + 1))
        words.insert(pos, persons[rng.integers(len(persons))])
        labels.insert(pos, "B-Person")
        if s % 10 == 0:
            kind = list(rare)[(s // 10) % len(rare)]
            words.append(rare[kind][rng.integers(len(rare[kind]))])
            labels.append(f"B-{kind}")
        sentences.append(Sentence.from_pairs(words, labels))
    return Corpus(tuple(sentences), "imbalanced")
