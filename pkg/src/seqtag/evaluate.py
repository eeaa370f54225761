"""Token-level scoring on entity kinds: per-tag P/R/F1, weighted averages, confusion matrices."""

from __future__ import annotations

import csv
import io
import json
from collections import Counter
from dataclasses import asdict, dataclass
from typing import Optional, Sequence

import numpy as np

from seqtag.tagset import KINDS, OTHER, Label, report_order


@dataclass(frozen=True)
class TagScores:
    kind: str
    precision: float
    recall: float
    f1: float
    support: int
    tp: int
    fp: int
    fn: int

    @property
    def predicted(self) -> int:
        return self.tp + self.fp


@dataclass(frozen=True)
class Averages:
    precision: float
    recall: float
    f1: float


@dataclass(frozen=True)
class EvalReport:
    per_tag: tuple[TagScores, ...] = ()
    avg_entities: Optional[Averages] = None
    avg_all: Optional[Averages] = None

    def to_dict(self) -> dict:
        return {
            "per_tag": [asdict(t) for t in self.per_tag],
            "avg_entities": None if self.avg_entities is None else asdict(self.avg_entities),
            "avg_all": None if self.avg_all is None else asdict(self.avg_all),
        }

    def to_json(self, indent=2) -> str:
        return json.dumps(self.to_dict(), indent=indent)

    def get(self, kind: str) -> TagScores:
        for t in self.per_tag:
            if t.kind == kind:
                return t
        raise KeyError(kind)


def _kind_sequences(labels) -> list[list[str]]:
    """Map label sequences (Corpus, Labels or strings) to kind names, O -> OTHER."""
    if hasattr(labels, "sentences"):
        labels = [s.labels for s in labels.sentences]
    out = []
    for seq in labels:
        out.append([(lab if isinstance(lab, Label) else Label.parse(str(lab))).kind_name
                    for lab in seq])
    return out


def _aligned(gold, pred):
    g, p = _kind_sequences(gold), _kind_sequences(pred)
    if len(g) != len(p) or any(len(a) != len(b) for a, b in zip(g, p)):
        raise ValueError("predictions are not aligned with the gold corpus")
    return [x for s in g for x in s], [x for s in p for x in s]


def _pct(num: int, den: int) -> float:
    return 100.0 * num / den if den else 0.0


def _ordered(kinds) -> list[str]:
    entity = report_order(k for k in kinds if k != OTHER)
    return entity + ([OTHER] if OTHER in kinds else [])


def per_tag_scores(gold, pred) -> list[TagScores]:
    """Scores for every kind that occurs in gold or prediction, OTHER last.

    B- and I- tokens of a kind are pooled. Zero denominators give 0.
    """
    g, p = _aligned(gold, pred)
    tp = Counter(a for a, b in zip(g, p) if a == b)
    gold_n = Counter(g)
    pred_n = Counter(p)
    scores = []
    for kind in _ordered(set(gold_n) | set(pred_n)):
        t = tp[kind]
        prec = _pct(t, pred_n[kind])
        rec = _pct(t, gold_n[kind])
        f1 = 2 * prec * rec / (prec + rec) if prec + rec > 0 else 0.0
        scores.append(TagScores(kind, prec, rec, f1, gold_n[kind], t,
                                pred_n[kind] - t, gold_n[kind] - t))
    return scores


def aggregate(per_tag: Sequence[TagScores], include_other: bool) -> Averages:
    """Support-weighted mean of precision, recall and F1."""
    rows = [t for t in per_tag if include_other or t.kind != OTHER]
    w = np.array([t.support for t in rows], dtype=float)
    if w.sum() == 0:
        raise ValueError("average undefined: selected tags have zero total support")
    w /= w.sum()
    return Averages(
        precision=float(w @ [t.precision for t in rows]),
        recall=float(w @ [t.recall for t in rows]),
        f1=float(w @ [t.f1 for t in rows]),
    )


def _try_aggregate(per_tag, include_other):
    try:
        return aggregate(per_tag, include_other)
    except ValueError:
        return None


def evaluate(gold, pred) -> EvalReport:
    per_tag = per_tag_scores(gold, pred)
    return EvalReport(tuple(per_tag), _try_aggregate(per_tag, False), _try_aggregate(per_tag, True))


_HEADER = f"{'NER-Tag':<30}{'P':>8}{'R':>8}{'F1':>8}{'Support':>9}"


def _row(name, p, r, f, support=None):
    sup = "" if support is None else str(support)
    return f"{name:<30}{p:>8.2f}{r:>8.2f}{f:>8.2f}{sup:>9}"


def render_report(report: EvalReport) -> str:
    """Fixed-width table: entity kinds by category, their average, OTHER, overall average."""
    lines = [_HEADER, "-" * len(_HEADER)]
    other = None
    for t in report.per_tag:
        if t.kind == OTHER:
            other = t
        else:
            lines.append(_row(t.kind, t.precision, t.recall, t.f1, t.support))
    if report.avg_entities is not None:
        a = report.avg_entities
        lines.append(_row("Avg. score", a.precision, a.recall, a.f1))
    if other is not None:
        lines.append(_row(OTHER, other.precision, other.recall, other.f1, other.support))
    if report.avg_all is not None:
        a = report.avg_all
        lines.append(_row("Avg. score (including OTHER)", a.precision, a.recall, a.f1))
    return "\n".join(lines) + "\n"


@dataclass(frozen=True)
class ConfusionMatrix:
    axis: tuple[str, ...]
    counts: np.ndarray  # rows = gold, columns = predicted

    def to_csv(self) -> str:
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(["gold\\predicted", *self.axis])
        for name, row in zip(self.axis, self.counts):
            w.writerow([name, *(int(x) for x in row)])
        return buf.getvalue()


def confusion_matrix(gold, pred, filter: bool = False) -> ConfusionMatrix:
    """Gold-by-predicted token counts over the 22 kinds plus OTHER.

    With ``filter``, kinds never seen in gold nor predicted are dropped, and
    so are kinds involved in no error at all (every gold token right and no
    false positives).
    """
    g, p = _aligned(gold, pred)
    axis = [k.name for k in KINDS] + [OTHER]
    idx = {k: i for i, k in enumerate(axis)}
    counts = np.zeros((len(axis), len(axis)), dtype=int)
    np.add.at(counts, ([idx[a] for a in g], [idx[b] for b in p]), 1)
    if filter:
        off = counts - np.diag(np.diag(counts))
        keep = [i for i in range(len(axis)) if off[i].sum() > 0 or off[:, i].sum() > 0]
        counts = counts[np.ix_(keep, keep)]
        axis = [axis[i] for i in keep]
    return ConfusionMatrix(tuple(axis), counts)
