"""One top-level category classifier plus one classifier per attribute,
applied hierarchically: attributes are only predicted for segments whose
bound categories clear the decision threshold."""
from __future__ import annotations

import json
import pickle
from dataclasses import dataclass, field
from pathlib import Path
from typing import Callable, Iterable, Sequence

import numpy as np

from .annotations import ConsolidatedSegment
from .backends import Backend, LinearBackend
from .encoding import LabelCodec
from .schema import Label, LabelSchema, attribute, category

THRESHOLD = 0.5
BackendFactory = Callable[[], Backend]


class UntrainedBundleError(RuntimeError):
    pass


@dataclass
class SegmentLabels:
    category_probs: dict[str, float]
    attribute_probs: dict[tuple[str, str], float] = field(default_factory=dict)

    def labels(self, threshold: float = THRESHOLD, excluded: Iterable[Label] = ()) -> frozenset[Label]:
        excluded = set(excluded)
        out = {category(c) for c, p in self.category_probs.items() if p > threshold}
        out |= {attribute(a, v) for (a, v), p in self.attribute_probs.items() if p > threshold}
        return frozenset(out - excluded)

    def to_dict(self) -> dict:
        attrs: dict[str, dict[str, float]] = {}
        for (a, v), p in self.attribute_probs.items():
            attrs.setdefault(a, {})[v] = p
        return {"category_probs": dict(self.category_probs), "attribute_probs": attrs}

    @classmethod
    def from_dict(cls, d: dict) -> "SegmentLabels":
        attrs = {(a, v): p for a, vals in d.get("attribute_probs", {}).items() for v, p in vals.items()}
        return cls(dict(d["category_probs"]), attrs)


@dataclass
class ModelBundle:
    schema: LabelSchema
    top: Backend | None
    attributes: dict[str, Backend | None]
    backend_name: str = "linear"

    @property
    def untrainable(self) -> list[str]:
        return [a for a, m in self.attributes.items() if m is None]

    def save(self, path: str | Path) -> None:
        path = Path(path)
        path.mkdir(parents=True, exist_ok=True)
        if self.top is None:
            raise UntrainedBundleError("bundle has no top-level model")
        files = {}
        with open(path / "top.pkl", "wb") as fh:
            pickle.dump(self.top, fh)
        for i, (attr, model) in enumerate(self.attributes.items()):
            if model is None:
                files[attr] = None
                continue
            name = f"attribute_{i:02d}.pkl"
            with open(path / name, "wb") as fh:
                pickle.dump(model, fh)
            files[attr] = name
        manifest = {"backend": self.backend_name, "schema": self.schema.to_dict(),
                    "top": "top.pkl", "attributes": files}
        (path / "manifest.json").write_text(json.dumps(manifest, indent=2, sort_keys=True) + "\n",
                                            encoding="utf-8")

    @classmethod
    def load(cls, path: str | Path) -> "ModelBundle":
        path = Path(path)
        manifest_path = path / "manifest.json"
        if not manifest_path.exists():
            raise UntrainedBundleError(f"no model bundle at {path} (run `policylens train` first)")
        manifest = json.loads(manifest_path.read_text(encoding="utf-8"))
        with open(path / manifest["top"], "rb") as fh:
            top = pickle.load(fh)
        attrs = {}
        for attr, name in manifest["attributes"].items():
            if name is None:
                attrs[attr] = None
            else:
                with open(path / name, "rb") as fh:
                    attrs[attr] = pickle.load(fh)
        return cls(LabelSchema.from_dict(manifest["schema"]), top, attrs, manifest["backend"])


def top_codec(schema: LabelSchema) -> LabelCodec:
    return LabelCodec(schema.top_categories)


def attribute_codec(schema: LabelSchema, attr: str) -> LabelCodec:
    return LabelCodec(schema.attributes[attr])


def attribute_training_set(
    segments: Sequence[ConsolidatedSegment], schema: LabelSchema, attr: str,
) -> list[ConsolidatedSegment]:
    """Segments whose categories include one bound to ``attr``."""
    cats = set(schema.categories_of(attr))
    return [s for s in segments if s.categories & cats]


def augment(
    texts: list[str], label_sets: list[frozenset], seed: int,
) -> tuple[list[str], list[frozenset]]:
    """Add one concatenation of two random training segments per segment,
    labeled with the union of their labels."""
    rng = np.random.default_rng(seed)
    n = len(texts)
    if n < 2:
        return texts, label_sets
    pairs = rng.integers(0, n, size=(n, 2))
    extra_t = [f"{texts[a]} {texts[b]}" for a, b in pairs]
    extra_l = [label_sets[a] | label_sets[b] for a, b in pairs]
    return texts + extra_t, label_sets + extra_l


def fit_model(
    texts: list[str], label_sets: list[frozenset], codec: LabelCodec,
    backend_factory: BackendFactory, *, augmented: bool = False, seed: int = 0,
) -> Backend | None:
    """Fitted backend, or None if the data has fewer than two distinct
    label patterns."""
    if not texts:
        return None
    y = codec.encode_many(label_sets)
    if len({row.tobytes() for row in y}) < 2:
        return None
    if augmented:
        texts, label_sets = augment(texts, label_sets, seed)
        y = codec.encode_many(label_sets)
    return backend_factory().fit(texts, y)


def train_hierarchy(
    train: Sequence[ConsolidatedSegment],
    schema: LabelSchema,
    backend_factory: BackendFactory = LinearBackend,
    *,
    augmented: bool = False,
    seed: int = 0,
) -> ModelBundle:
    if not train:
        raise ValueError("training set is empty")
    top = fit_model(
        [s.text for s in train], [s.categories for s in train], top_codec(schema),
        backend_factory, augmented=augmented, seed=seed,
    )
    if top is None:
        raise ValueError("top-level training data has fewer than two label patterns")
    attrs: dict[str, Backend | None] = {}
    for attr in schema.attributes:
        subset = attribute_training_set(train, schema, attr)
        attrs[attr] = fit_model(
            [s.text for s in subset], [s.attribute_values(attr) for s in subset],
            attribute_codec(schema, attr), backend_factory, augmented=augmented, seed=seed,
        )
    name = getattr(top, "name", type(top).__name__)
    return ModelBundle(schema, top, attrs, name)


def label_segments(
    texts: Sequence[str], bundle: ModelBundle, threshold: float = THRESHOLD,
) -> list[SegmentLabels]:
    if bundle.top is None:
        raise UntrainedBundleError("bundle has no top-level model")
    schema = bundle.schema
    cats = list(schema.top_categories)
    top = bundle.top.predict_proba(list(texts)) if len(texts) else np.zeros((0, len(cats)))
    out = [SegmentLabels({c: float(p) for c, p in zip(cats, row)}) for row in top]
    for attr, model in bundle.attributes.items():
        if model is None:
            continue
        bound = [cats.index(c) for c in schema.categories_of(attr)]
        rows = [i for i in range(len(out)) if (top[i, bound] > threshold).any()]
        if not rows:
            continue
        probs = model.predict_proba([texts[i] for i in rows])
        values = schema.attributes[attr]
        for i, row in zip(rows, probs):
            for v, p in zip(values, row):
                out[i].attribute_probs[(attr, v)] = float(p)
    return out


def label_segment(text: str, bundle: ModelBundle, threshold: float = THRESHOLD) -> SegmentLabels:
    return label_segments([text], bundle, threshold)[0]
