"""Label schema: top-level categories, attributes with closed value sets,
category-to-attribute bindings, and labels excluded for low precision."""
from __future__ import annotations

import json
from dataclasses import dataclass, field
from importlib import resources
from pathlib import Path
from typing import Iterable, NamedTuple


class SchemaError(ValueError):
    pass


class Label(NamedTuple):
    level: str  # "category" or "attribute"
    name: str
    value: str = ""

    def key(self) -> str:
        return f"{self.name}|{self.value}" if self.level == "attribute" else self.name


def category(name: str) -> Label:
    return Label("category", name, "")


def attribute(name: str, value: str) -> Label:
    return Label("attribute", name, value)


def _fold(s: str) -> str:
    return " ".join(s.replace("/ ", "/").split()).casefold()


@dataclass(frozen=True)
class LabelSchema:
    top_categories: tuple[str, ...]
    attributes: dict[str, tuple[str, ...]]
    bindings: dict[str, tuple[str, ...]]
    excluded: frozenset[Label] = frozenset()
    category_aliases: dict[str, str] = field(default_factory=dict)

    def __post_init__(self):
        if len(set(self.top_categories)) != len(self.top_categories):
            raise SchemaError("duplicate category names")
        if len(set(map(_fold, self.attributes))) != len(self.attributes):
            raise SchemaError("duplicate attribute names")
        for attr, values in self.attributes.items():
            if not values or len(set(map(_fold, values))) != len(values):
                raise SchemaError(f"attribute {attr!r} needs distinct values")
        bound = set()
        for cat, attrs in self.bindings.items():
            if cat not in self.top_categories:
                raise SchemaError(f"binding for unknown category {cat!r}")
            for a in attrs:
                if a not in self.attributes:
                    raise SchemaError(f"binding to unknown attribute {a!r}")
            bound.update(attrs)
        unbound = set(self.attributes) - bound
        if unbound:
            raise SchemaError(f"attributes bound to no category: {sorted(unbound)}")
        for lab in self.excluded:
            self.require(lab)

    # -- lookup ---------------------------------------------------------------

    @property
    def _canon(self) -> dict:
        cache = self.__dict__.get("_canon_cache")
        if cache is None:
            cats = {_fold(c): c for c in self.top_categories}
            cats.update({_fold(a): c for a, c in self.category_aliases.items()})
            attrs = {_fold(a): a for a in self.attributes}
            vals = {a: {_fold(v): v for v in vs} for a, vs in self.attributes.items()}
            cache = (cats, attrs, vals)
            object.__setattr__(self, "_canon_cache", cache)
        return cache

    def normalize(self, label: Label) -> Label | None:
        """Schema spelling of ``label`` (case and spacing folded), or None if
        the schema does not know it."""
        cats, attrs, vals = self._canon
        level, name, value = label
        if level == "category":
            c = cats.get(_fold(name))
            return category(c) if c else None
        if level == "attribute":
            a = attrs.get(_fold(name))
            if a is None:
                return None
            v = vals[a].get(_fold(value))
            return attribute(a, v) if v else None
        return None

    def require(self, label: Label) -> Label:
        norm = self.normalize(Label(*label))
        if norm is None or norm != tuple(label):
            raise SchemaError(f"label not in schema: {tuple(label)!r}")
        return norm

    def attributes_of(self, categories: Iterable[str]) -> list[str]:
        seen = []
        for c in categories:
            for a in self.bindings.get(c, ()):
                if a not in seen:
                    seen.append(a)
        return seen

    def categories_of(self, attr: str) -> list[str]:
        return [c for c in self.top_categories if attr in self.bindings.get(c, ())]

    def all_labels(self) -> list[Label]:
        """Fixed label order: categories, then every attribute's values."""
        labels = [category(c) for c in self.top_categories]
        for a, values in self.attributes.items():
            labels += [attribute(a, v) for v in values]
        return labels

    # -- serialization --------------------------------------------------------

    def to_dict(self) -> dict:
        return {
            "categories": list(self.top_categories),
            "category_aliases": dict(self.category_aliases),
            "attributes": {a: list(v) for a, v in self.attributes.items()},
            "bindings": {c: list(a) for c, a in self.bindings.items()},
            "excluded": sorted(list(l) for l in self.excluded),
        }

    @classmethod
    def from_dict(cls, d: dict) -> "LabelSchema":
        return cls(
            top_categories=tuple(d["categories"]),
            attributes={a: tuple(v) for a, v in d["attributes"].items()},
            bindings={c: tuple(a) for c, a in d["bindings"].items()},
            excluded=frozenset(Label(*l) for l in d.get("excluded", [])),
            category_aliases=dict(d.get("category_aliases", {})),
        )


def load_schema(path: str | Path | None = None) -> LabelSchema:
    if path is None:
        raw = resources.files("policylens.data").joinpath("opp115_schema.json").read_text("utf-8")
    else:
        raw = Path(path).read_text(encoding="utf-8")
    return LabelSchema.from_dict(json.loads(raw))
