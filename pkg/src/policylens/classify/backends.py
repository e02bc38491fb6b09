"""Classifier backends: anything with ``fit(texts, Y)`` and
``predict_proba(texts) -> (n, k)`` over a 0/1 label matrix."""
from __future__ import annotations

from typing import Protocol, Sequence

import numpy as np
from sklearn.feature_extraction.text import TfidfVectorizer
from sklearn.linear_model import LogisticRegression


class Backend(Protocol):
    name: str

    def fit(self, texts: Sequence[str], y: np.ndarray) -> "Backend": ...

    def predict_proba(self, texts: Sequence[str]) -> np.ndarray: ...


class LinearBackend:
    """TF-IDF over word unigrams and bigrams, one logistic regression per
    label column.  Columns that are constant in training predict that
    constant."""

    name = "linear"

    def __init__(self, C: float = 10.0, ngram_range: tuple[int, int] = (1, 2), seed: int = 0,
                 class_weight: str | None = "balanced"):
        self.C = C
        self.ngram_range = ngram_range
        self.seed = seed
        self.class_weight = class_weight
        self.vectorizer: TfidfVectorizer | None = None
        self.models: list = []

    def fit(self, texts: Sequence[str], y: np.ndarray) -> "LinearBackend":
        y = np.asarray(y)
        if y.ndim != 2 or y.shape[0] != len(texts):
            raise ValueError("label matrix must have one row per text")
        if len(texts) == 0:
            raise ValueError("cannot fit on an empty training set")
        self.vectorizer = TfidfVectorizer(ngram_range=self.ngram_range, sublinear_tf=True)
        x = self.vectorizer.fit_transform(texts)
        self.models = []
        for k in range(y.shape[1]):
            col = y[:, k]
            if col.min() == col.max():
                self.models.append(float(col[0]))
            else:
                clf = LogisticRegression(C=self.C, solver="liblinear", class_weight=self.class_weight,
                                         random_state=self.seed)
                self.models.append(clf.fit(x, col))
        return self

    def predict_proba(self, texts: Sequence[str]) -> np.ndarray:
        if self.vectorizer is None:
            raise RuntimeError("backend is not fitted")
        out = np.zeros((len(texts), len(self.models)))
        if not len(texts):
            return out
        x = self.vectorizer.transform(texts)
        for k, m in enumerate(self.models):
            out[:, k] = m if isinstance(m, float) else m.predict_proba(x)[:, 1]
        return out


BACKENDS = {"linear": LinearBackend}


def make_backend(name: str = "linear", **kwargs) -> Backend:
    try:
        return BACKENDS[name](**kwargs)
    except KeyError:
        raise ValueError(f"unknown backend {name!r}; available: {sorted(BACKENDS)}") from None
