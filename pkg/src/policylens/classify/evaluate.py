"""Precision, recall and F1 per label with micro and macro averages, the
precision filter, and Fleiss' kappa."""
from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

import numpy as np


@dataclass(frozen=True)
class LabelScores:
    precision: float | None  # None when nothing was predicted
    recall: float | None  # None when the label never occurs
    f1: float
    support: int
    predicted: int


@dataclass(frozen=True)
class EvalReport:
    per_label: dict
    micro_precision: float
    micro_recall: float
    micro_f1: float
    macro_precision: float
    macro_recall: float
    macro_f1: float

    def to_dict(self) -> dict:
        return {
            "per_label": {str(k): vars(v) for k, v in self.per_label.items()},
            "micro": {"precision": self.micro_precision, "recall": self.micro_recall, "f1": self.micro_f1},
            "macro": {"precision": self.macro_precision, "recall": self.macro_recall, "f1": self.macro_f1},
        }


def _ratio(a: float, b: float) -> float | None:
    return a / b if b else None


def _f1(p: float | None, r: float | None) -> float:
    p, r = p or 0.0, r or 0.0
    return 2 * p * r / (p + r) if p + r else 0.0


def evaluate(y_true: np.ndarray, y_pred: np.ndarray, labels: Sequence) -> EvalReport:
    """Scores for 0/1 matrices of shape (n, len(labels)).

    Macro averages treat undefined per-label precision or recall as 0.
    """
    t = np.asarray(y_true, dtype=bool)
    p = np.asarray(y_pred, dtype=bool)
    if t.shape != p.shape or t.shape[1:] != (len(labels),):
        raise ValueError("prediction and truth matrices must match the label list")
    tp = (t & p).sum(axis=0)
    support = t.sum(axis=0)
    predicted = p.sum(axis=0)
    per = {}
    for k, lab in enumerate(labels):
        prec = _ratio(tp[k], predicted[k])
        rec = _ratio(tp[k], support[k])
        per[lab] = LabelScores(prec, rec, _f1(prec, rec), int(support[k]), int(predicted[k]))
    mp = _ratio(tp.sum(), predicted.sum()) or 0.0
    mr = _ratio(tp.sum(), support.sum()) or 0.0
    n = max(len(labels), 1)
    return EvalReport(
        per_label=per,
        micro_precision=float(mp),
        micro_recall=float(mr),
        micro_f1=_f1(mp, mr),
        macro_precision=sum(s.precision or 0.0 for s in per.values()) / n,
        macro_recall=sum(s.recall or 0.0 for s in per.values()) / n,
        macro_f1=sum(s.f1 for s in per.values()) / n,
    )


def precision_filter(report: EvalReport, min_precision: float = 0.75) -> tuple[set, set]:
    """(labels to exclude, subset of those whose precision is undefined)."""
    excluded, undefined = set(), set()
    for lab, s in report.per_label.items():
        if s.precision is None:
            excluded.add(lab)
            undefined.add(lab)
        elif s.precision < min_precision:
            excluded.add(lab)
    return excluded, undefined


def fleiss_kappa(counts: np.ndarray) -> float:
    """Agreement for an (items, categories) matrix of rater counts; every
    item must have the same number of raters."""
    counts = np.asarray(counts, dtype=np.float64)
    n_raters = counts.sum(axis=1)
    if counts.ndim != 2 or counts.shape[0] == 0 or not np.all(n_raters == n_raters[0]) or n_raters[0] < 2:
        raise ValueError("need >= 1 item and the same number (>= 2) of raters per item")
    m = n_raters[0]
    p_j = counts.sum(axis=0) / counts.sum()
    p_i = ((counts * counts).sum(axis=1) - m) / (m * (m - 1))
    p_bar, p_e = p_i.mean(), (p_j * p_j).sum()
    if p_e == 1.0:
        return 1.0
    return float((p_bar - p_e) / (1 - p_e))
