"""Corpus data model, CoNLL-style column I/O, statistics, splitting and OOV rate."""

from __future__ import annotations

import logging
from collections import Counter
from dataclasses import dataclass, field
from typing import Iterable, Iterator, Sequence

import numpy as np

from seqtag.tagset import KIND_ORDER, Label

logger = logging.getLogger(__name__)


class CorpusFormatError(ValueError):
    """Malformed corpus text; carries the 1-based line number."""

    def __init__(self, message: str, lineno: int):
        super().__init__(f"line {lineno}: {message}")
        self.lineno = lineno


class SplitError(ValueError):
    pass


@dataclass(frozen=True)
class Token:
    surface: str
    label: Label

    def __post_init__(self):
        if not self.surface or any(c.isspace() for c in self.surface):
            raise ValueError(f"invalid token surface {self.surface!r}")


@dataclass(frozen=True)
class Sentence:
    tokens: tuple[Token, ...]

    def __post_init__(self):
        if len(self.tokens) == 0:
            raise ValueError("a sentence needs at least one token")

    @classmethod
    def from_pairs(cls, words: Sequence[str], labels: Sequence[str | Label]) -> "Sentence":
        if len(words) != len(labels):
            raise ValueError("words and labels differ in length")
        return cls(tuple(
            Token(w, lab if isinstance(lab, Label) else Label.parse(lab))
            for w, lab in zip(words, labels)
        ))

    @property
    def words(self) -> list[str]:
        return [t.surface for t in self.tokens]

    @property
    def labels(self) -> list[Label]:
        return [t.label for t in self.tokens]

    @property
    def label_strings(self) -> list[str]:
        return [str(t.label) for t in self.tokens]

    def kinds(self) -> set[str]:
        """Names of entity kinds mentioned in this sentence."""
        return {t.label.kind.name for t in self.tokens if t.label.kind is not None}

    def __len__(self) -> int:
        return len(self.tokens)

    def __iter__(self) -> Iterator[Token]:
        return iter(self.tokens)


@dataclass(frozen=True)
class Corpus:
    sentences: tuple[Sentence, ...] = ()
    name: str = field(default="", compare=False)

    def __len__(self) -> int:
        return len(self.sentences)

    def __iter__(self) -> Iterator[Sentence]:
        return iter(self.sentences)

    def __getitem__(self, i):
        return self.sentences[i]

    @classmethod
    def from_sequences(cls, X: Iterable[Sequence[str]], y: Iterable[Sequence[str]],
                       name: str = "") -> "Corpus":
        return cls(tuple(Sentence.from_pairs(w, l) for w, l in zip(X, y)), name)

    @property
    def X(self) -> list[list[str]]:
        return [s.words for s in self.sentences]

    @property
    def y(self) -> list[list[str]]:
        return [s.label_strings for s in self.sentences]

    def types(self) -> set[str]:
        return {t.surface for s in self.sentences for t in s.tokens}


def parse_conll(text: str, name: str = "") -> Corpus:
    """Parse two-column ``SURFACE<TAB>LABEL`` text; blank lines separate sentences."""
    sentences = []
    current: list[Token] = []
    for lineno, line in enumerate(text.splitlines(), start=1):
        if not line.strip():
            if current:
                sentences.append(Sentence(tuple(current)))
                current = []
            continue
        cols = line.split("\t")
        if len(cols) != 2:
            raise CorpusFormatError(f"expected 2 tab-separated columns, got {len(cols)}", lineno)
        surface, label = cols
        try:
            tok = Token(surface, Label.parse(label))
        except ValueError as exc:
            # TagsetError is a ValueError too; keep its type but add the location
            exc.args = (f"line {lineno}: {exc}",)
            raise
        current.append(tok)
    if current:
        sentences.append(Sentence(tuple(current)))
    return Corpus(tuple(sentences), name)


def read_conll(path, name: str | None = None) -> Corpus:
    with open(path, encoding="utf-8") as fh:
        return parse_conll(fh.read(), name=str(path) if name is None else name)


def write_conll(corpus: Corpus) -> str:
    out = []
    for sent in corpus.sentences:
        for tok in sent.tokens:
            out.append(f"{tok.surface}\t{tok.label}\n")
        out.append("\n")
    return "".join(out)


def save_conll(corpus: Corpus, path) -> None:
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        fh.write(write_conll(corpus))


@dataclass(frozen=True)
class CorpusStats:
    sentence_count: int
    token_count: int
    type_count: int
    entity_token_count: int
    other_token_count: int
    per_kind_counts: dict[str, int]

    def as_dict(self) -> dict:
        return {
            "sentence_count": self.sentence_count,
            "token_count": self.token_count,
            "type_count": self.type_count,
            "entity_token_count": self.entity_token_count,
            "other_token_count": self.other_token_count,
            "per_kind_counts": dict(self.per_kind_counts),
        }


def corpus_stats(corpus: Corpus) -> CorpusStats:
    tokens = [t for s in corpus.sentences for t in s.tokens]
    entity = sum(1 for t in tokens if t.label.kind is not None)
    mentions = Counter(t.label.kind.name for t in tokens if t.label.position == "B")
    per_kind = {k: mentions[k] for k in sorted(mentions, key=KIND_ORDER.__getitem__)}
    return CorpusStats(
        sentence_count=len(corpus.sentences),
        token_count=len(tokens),
        type_count=len({t.surface for t in tokens}),
        entity_token_count=entity,
        other_token_count=len(tokens) - entity,
        per_kind_counts=per_kind,
    )


def split(corpus: Corpus, test_fraction: float = 0.2, seed: int = 42) -> tuple[Corpus, Corpus]:
    """Random sentence-level split that keeps every entity kind represented in test.

    After the random cut, each kind missing from the test side (in canonical
    tagset order) pulls the lowest-index training sentence containing it into
    test. Both halves keep the original sentence order.
    """
    if not 0.0 < test_fraction < 1.0:
        raise SplitError("test_fraction must lie in (0, 1)")
    n = len(corpus)
    if n == 0:
        raise SplitError("cannot split an empty corpus")
    kinds_by_sent = [s.kinds() for s in corpus.sentences]
    all_kinds = sorted(set().union(*kinds_by_sent), key=KIND_ORDER.__getitem__)
    n_test = int(np.floor(test_fraction * n + 0.5))
    if n >= 2:
        n_test = min(max(n_test, 1), n - 1)
    if n_test < len(all_kinds):
        raise SplitError(
            f"coverage infeasible: {len(all_kinds)} entity kinds but only {n_test} test sentences"
        )

    perm = np.random.default_rng(seed).permutation(n)
    in_test = np.zeros(n, dtype=bool)
    in_test[perm[:n_test]] = True

    covered: set[str] = set()
    for i in np.flatnonzero(in_test):
        covered |= kinds_by_sent[i]
    for kind in all_kinds:
        if kind in covered:
            continue
        i = next(j for j in range(n) if not in_test[j] and kind in kinds_by_sent[j])
        in_test[i] = True
        covered |= kinds_by_sent[i]
        logger.debug("moved sentence %d to test to cover %s", i, kind)

    train = tuple(s for s, t in zip(corpus.sentences, in_test) if not t)
    test = tuple(s for s, t in zip(corpus.sentences, in_test) if t)
    return Corpus(train, corpus.name + ":train"), Corpus(test, corpus.name + ":test")


def oov_rate(train: Corpus, test: Corpus) -> float:
    """Percentage of test token types never seen in train."""
    test_types = test.types()
    if not test_types:
        raise ValueError("OOV rate is undefined for an empty test corpus")
    return 100.0 * len(test_types - train.types()) / len(test_types)


@dataclass(frozen=True)
class LabelViolation:
    sentence: int
    position: int
    label: str
    previous: str

    def __str__(self) -> str:
        return f"sentence {self.sentence}, token {self.position}: {self.label} after {self.previous}"


def validate_labels(corpus: Corpus) -> list[LabelViolation]:
    """Every I-X not preceded by B-X or I-X."""
    found = []
    for si, sent in enumerate(corpus.sentences):
        prev = None
        for ti, tok in enumerate(sent.tokens):
            lab = tok.label
            if lab.position == "I" and (prev is None or prev.kind != lab.kind):
                found.append(LabelViolation(si, ti, str(lab), "<start>" if prev is None else str(prev)))
            prev = lab
    return found
