"""Train/evaluate protocol: a stratified 3:1:1 split for the top-level
classifier and a separate stratified split per attribute, scored on the
held-out test portions."""
from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

import numpy as np

from .annotations import ConsolidatedSegment
from .backends import LinearBackend
from .evaluate import EvalReport, evaluate
from .hierarchy import (
    THRESHOLD,
    BackendFactory,
    attribute_codec,
    attribute_training_set,
    fit_model,
    top_codec,
)
from .schema import LabelSchema, attribute, category
from .stratify import iterative_stratification


@dataclass
class ProtocolResult:
    top: EvalReport
    attributes: dict[str, EvalReport]
    attributes_pooled: EvalReport | None
    untrainable: list[str]


def _split(segments, codec, labels_of, seed):
    y = codec.encode_many([labels_of(s) for s in segments])
    idx = iterative_stratification(y, (3, 1, 1), seed)
    train = [s for s, j in zip(segments, idx) if j == 0]
    test = [s for s, j in zip(segments, idx) if j == 2]
    return train, test


def run_protocol(
    segments: Sequence[ConsolidatedSegment],
    schema: LabelSchema,
    backend_factory: BackendFactory = LinearBackend,
    *,
    threshold: float = THRESHOLD,
    seed: int = 0,
) -> ProtocolResult:
    segments = list(segments)
    codec = top_codec(schema)
    train, test = _split(segments, codec, lambda s: s.categories, seed)
    model = fit_model([s.text for s in train], [s.categories for s in train], codec, backend_factory)
    if model is None:
        raise ValueError("top-level training split has fewer than two label patterns")
    y_true = codec.encode_many([s.categories for s in test])
    y_pred = model.predict_proba([s.text for s in test]) > threshold if test else np.zeros_like(y_true)
    top = evaluate(y_true, y_pred, [category(c) for c in schema.top_categories])

    reports, untrainable = {}, []
    pooled_t, pooled_p, pooled_labels = [], [], []
    for attr in schema.attributes:
        eligible = attribute_training_set(segments, schema, attr)
        acodec = attribute_codec(schema, attr)
        labels_of = lambda s, a=attr: s.attribute_values(a)
        a_train, a_test = _split(eligible, acodec, labels_of, seed) if eligible else ([], [])
        m = fit_model([s.text for s in a_train], [labels_of(s) for s in a_train], acodec, backend_factory)
        if m is None or not a_test:
            untrainable.append(attr)
            continue
        t = acodec.encode_many([labels_of(s) for s in a_test])
        p = m.predict_proba([s.text for s in a_test]) > threshold
        labels = [attribute(attr, v) for v in schema.attributes[attr]]
        reports[attr] = evaluate(t, p, labels)
        pooled_t.append(t)
        pooled_p.append(p)
        pooled_labels.append(labels)
    pooled = None
    if pooled_t:
        # block-diagonal pooling: each attribute's test rows only score its own values
        width = sum(len(l) for l in pooled_labels)
        rows = sum(len(t) for t in pooled_t)
        big_t = np.zeros((rows, width), dtype=bool)
        big_p = np.zeros((rows, width), dtype=bool)
        r = c = 0
        for t, p in zip(pooled_t, pooled_p):
            big_t[r:r + len(t), c:c + t.shape[1]] = t
            big_p[r:r + len(t), c:c + t.shape[1]] = p
            r += len(t)
            c += t.shape[1]
        pooled = evaluate(big_t, big_p, [l for ls in pooled_labels for l in ls])
    return ProtocolResult(top, reports, pooled, untrainable)
