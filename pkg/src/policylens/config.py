"""Run configuration: one YAML file, overridable from the command line."""
from __future__ import annotations

import dataclasses
from dataclasses import dataclass, field
from pathlib import Path
from typing import Any

import yaml

from .archive import DEFAULT_BASE_URL, FetchPolicy, SnapshotSchedule
from .text.counting import CountingConfig


class ConfigError(ValueError):
    pass


@dataclass
class GateModel:
    path: Path
    threshold: float


@dataclass
class RunConfig:
    corpus: Path = Path("corpus")
    sites: Path | None = None
    archive_url: str = DEFAULT_BASE_URL
    yearly: tuple[int, int] = (1996, 2008)
    quarterly: tuple[int, int] = (2009, 2017)
    monthly_start: str = "2018-01"
    timeout: float = 120.0
    min_delay: float = 1.0
    max_retries: int = 3
    backoff_base: float = 1.0
    workers: int = 4
    familiar_words: Path | None = None
    obfuscating_words: Path | None = None
    terms: Path | None = None
    counting: dict[str, str] = field(default_factory=dict)
    include_dc: bool = False
    min_words: int = 100
    gate_models: list[GateModel] = field(default_factory=list)
    embeddings: Path | None = None
    embedding_dimension: int = 300
    embedding_min_count: int = 5
    segment_threshold: float = 0.25
    min_segment_size: int = 1
    annotations: Path | None = None
    annotations_format: str = "csv"
    label_threshold: float = 0.5
    min_precision: float = 0.75
    bundle: Path | None = None
    seed: int = 0

    # -- derived ------------------------------------------------------------

    @property
    def bundle_dir(self) -> Path:
        return self.bundle or self.corpus / "model"

    @property
    def reports_dir(self) -> Path:
        return self.corpus / "reports"

    def schedule(self) -> SnapshotSchedule:
        y, m = _parse_month(self.monthly_start)
        try:
            return SnapshotSchedule(tuple(self.yearly), tuple(self.quarterly), (y, m))
        except ValueError as exc:
            raise ConfigError(str(exc)) from exc

    def fetch_policy(self) -> FetchPolicy:
        try:
            return FetchPolicy(self.timeout, self.min_delay, self.max_retries, self.backoff_base)
        except ValueError as exc:
            raise ConfigError(str(exc)) from exc

    def counting_config(self) -> CountingConfig:
        try:
            return CountingConfig(**self.counting)
        except (TypeError, ValueError) as exc:
            raise ConfigError(f"counting: {exc}") from exc

    def require(self, name: str) -> Path:
        """Path option ``name``, checked to exist."""
        value = getattr(self, name)
        if value is None:
            raise ConfigError(f"option '{name}' is required for this command")
        if not Path(value).exists():
            raise ConfigError(f"{name}: {value} does not exist")
        return Path(value)


_PATH_FIELDS = {"corpus", "sites", "familiar_words", "obfuscating_words", "terms",
                "embeddings", "annotations", "bundle"}


def _parse_month(value: str) -> tuple[int, int]:
    try:
        y, m = (int(x) for x in str(value).split("-"))
    except ValueError:
        raise ConfigError(f"expected YYYY-MM, got {value!r}") from None
    if not 1 <= m <= 12:
        raise ConfigError(f"bad month in {value!r}")
    return y, m


def _coerce(name: str, value: Any, base: Path) -> Any:
    if value is None:
        return None
    if name in _PATH_FIELDS:
        p = Path(value).expanduser()
        return p if p.is_absolute() else base / p
    if name in ("yearly", "quarterly"):
        if not (isinstance(value, (list, tuple)) and len(value) == 2):
            raise ConfigError(f"{name} must be a [start, end] pair of years")
        return (int(value[0]), int(value[1]))
    if name == "gate_models":
        models = []
        for item in value:
            if not isinstance(item, dict) or "path" not in item or "threshold" not in item:
                raise ConfigError("gate_models entries need 'path' and 'threshold'")
            t = float(item["threshold"])
            if not 0.0 <= t <= 1.0:
                raise ConfigError(f"gate threshold {t} outside [0, 1]")
            models.append(GateModel(_coerce("corpus", item["path"], base), t))
        return models
    if name == "counting":
        if not isinstance(value, dict):
            raise ConfigError("counting must be a mapping of strategy names")
        return {str(k): str(v) for k, v in value.items()}
    return value


def load_config(path: str | Path | None = None, overrides: dict[str, Any] | None = None) -> RunConfig:
    """Config from ``path`` (relative paths resolve against its directory),
    then ``overrides`` (relative to the working directory), ignoring None."""
    names = {f.name for f in dataclasses.fields(RunConfig)}
    values: dict[str, Any] = {}
    if path is not None:
        path = Path(path)
        if not path.exists():
            raise ConfigError(f"config file {path} does not exist")
        try:
            raw = yaml.safe_load(path.read_text(encoding="utf-8")) or {}
        except yaml.YAMLError as exc:
            raise ConfigError(f"{path}: {exc}") from exc
        if not isinstance(raw, dict):
            raise ConfigError(f"{path}: top level must be a mapping")
        unknown = set(raw) - names
        if unknown:
            raise ConfigError(f"{path}: unknown options {sorted(unknown)}")
        values.update({k: _coerce(k, v, path.parent) for k, v in raw.items()})
    for k, v in (overrides or {}).items():
        if v is None:
            continue
        if k not in names:
            raise ConfigError(f"unknown option {k!r}")
        values[k] = _coerce(k, v, Path.cwd())
    try:
        cfg = RunConfig(**values)
    except TypeError as exc:
        raise ConfigError(str(exc)) from exc
    cfg.schedule()
    cfg.fetch_policy()
    cfg.counting_config()
    if cfg.workers < 1:
        raise ConfigError("workers must be >= 1")
    return cfg
