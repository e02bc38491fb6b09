"""Multi-label binarization over a fixed label order."""
from __future__ import annotations

from typing import Iterable, Sequence

import numpy as np

from .schema import Label, LabelSchema, SchemaError


class LabelCodec:
    """Maps label sets to 0/1 vectors and back, positions fixed by
    ``labels``."""

    def __init__(self, labels: Sequence):
        self.labels = list(labels)
        self.index = {l: i for i, l in enumerate(self.labels)}
        if len(self.index) != len(self.labels):
            raise SchemaError("duplicate labels in codec")

    def __len__(self) -> int:
        return len(self.labels)

    def encode(self, labels: Iterable) -> np.ndarray:
        v = np.zeros(len(self.labels), dtype=np.int8)
        for l in labels:
            try:
                v[self.index[l]] = 1
            except KeyError:
                raise SchemaError(f"unknown label {l!r}") from None
        return v

    def encode_many(self, label_sets: Iterable[Iterable]) -> np.ndarray:
        rows = [self.encode(s) for s in label_sets]
        return np.vstack(rows) if rows else np.zeros((0, len(self.labels)), dtype=np.int8)

    def decode(self, vector) -> frozenset:
        return frozenset(self.labels[i] for i in np.flatnonzero(np.asarray(vector)))


def schema_codec(schema: LabelSchema) -> LabelCodec:
    return LabelCodec(schema.all_labels())


def encode_multilabel(labels: Iterable[Label], schema: LabelSchema) -> np.ndarray:
    return schema_codec(schema).encode(Label(*l) for l in labels)


def decode_multilabel(vector, schema: LabelSchema) -> frozenset[Label]:
    return schema_codec(schema).decode(vector)
