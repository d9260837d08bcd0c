"""Recipe assembly: datasets, wrapper manifest, on-disk bundle layout, and
the versioned artifact store.

A bundle directory holds six files: the knowledge document (markdown),
the two configs (YAML), the sample dataset (CSV), the wrapper manifest
(YAML), and a top-level index listing each artifact's relative path and
content hash.  Bundling the same recipe twice produces byte-identical
files; nothing in the layout depends on wall-clock time.
"""

from __future__ import annotations

import csv
import hashlib
import io
import random
import threading
from dataclasses import dataclass
from datetime import datetime, timezone
from pathlib import Path

import yaml

from . import __version__
from .errors import NotFoundError, OutOfDomainError, ValidationFailedError
from .execution import KnowledgeDocument, render_knowledge, split_parts
from .references import CitedDocument, render_cited
from .scoring import (
    CATEGORIES,
    DEFAULT_CATEGORY_SCORES,
    AggregationConfig,
    HealthIndicatorConfig,
    SensorConfig,
    categorize,
    validate_aggregation_config,
    validate_indicator_config,
)
from .taxonomy import normalize_name

__all__ = [
    "DATASET_HEADER",
    "SYNTHETIC_TIMESTAMP",
    "KNOWLEDGE_DOC_FILE",
    "INDICATOR_CONFIG_FILE",
    "AGGREGATION_CONFIG_FILE",
    "DATASET_FILE",
    "WRAPPER_MANIFEST_FILE",
    "RECIPE_INDEX_FILE",
    "BUNDLE_FILES",
    "SensorReading",
    "SampleDataset",
    "ModelDescriptor",
    "RunMetadata",
    "WrapperManifest",
    "Recipe",
    "KnowledgeBase",
    "parse_rfc3339",
    "format_rfc3339",
    "latest_readings",
    "validate_dataset",
    "generate_synthetic",
    "dataset_to_csv",
    "dataset_from_csv",
    "default_indicator_config",
    "default_aggregation_config",
    "load_indicator_config",
    "load_aggregation_config",
    "validate_recipe",
    "bundle",
    "parse_bundle",
]

DATASET_HEADER = ("asset_id", "sensor_name", "value", "timestamp", "unit")

# All synthetic rows share one timestamp so each (asset, sensor) pair has a
# single, unambiguous latest reading and reruns are byte-identical.
SYNTHETIC_TIMESTAMP = "2024-01-01T00:00:00Z"

KNOWLEDGE_DOC_FILE = "knowledge_document.md"
INDICATOR_CONFIG_FILE = "indicator_config.yaml"
AGGREGATION_CONFIG_FILE = "aggregation_config.yaml"
DATASET_FILE = "sample_dataset.csv"
WRAPPER_MANIFEST_FILE = "wrapper_manifest.yaml"
RECIPE_INDEX_FILE = "recipe.yaml"

BUNDLE_FILES = (
    KNOWLEDGE_DOC_FILE,
    INDICATOR_CONFIG_FILE,
    AGGREGATION_CONFIG_FILE,
    DATASET_FILE,
    WRAPPER_MANIFEST_FILE,
    RECIPE_INDEX_FILE,
)


def parse_rfc3339(timestamp: str) -> datetime:
    """UTC datetime from an RFC 3339 string; 'Z' suffix accepted."""
    text = timestamp.strip()
    if text.endswith(("Z", "z")):
        text = text[:-1] + "+00:00"
    parsed = datetime.fromisoformat(text)
    if parsed.tzinfo is None:
        raise ValueError(f"timestamp {timestamp!r} carries no timezone")
    return parsed.astimezone(timezone.utc)


def format_rfc3339(moment: datetime) -> str:
    return moment.astimezone(timezone.utc).strftime("%Y-%m-%dT%H:%M:%SZ")


@dataclass(frozen=True)
class SensorReading:
    asset_id: str
    sensor_name: str
    value: float
    timestamp: str
    unit: str


@dataclass(frozen=True)
class SampleDataset:
    rows: tuple[SensorReading, ...]

    @property
    def asset_ids(self) -> tuple[str, ...]:
        seen: dict[str, None] = {}
        for row in self.rows:
            seen.setdefault(row.asset_id, None)
        return tuple(seen)

    @property
    def sensor_names(self) -> set[str]:
        return {row.sensor_name for row in self.rows}


@dataclass(frozen=True)
class ModelDescriptor:
    name: str
    method: str
    version: str = __version__


@dataclass(frozen=True)
class RunMetadata:
    seed: int | None
    created_at: str
    tool_version: str = __version__


@dataclass(frozen=True)
class WrapperManifest:
    """Relative artifact paths plus the model descriptor and run metadata."""

    indicator_config: str
    aggregation_config: str
    dataset: str
    output: str
    model: ModelDescriptor
    run: RunMetadata


@dataclass(frozen=True)
class Recipe:
    kpi: str
    asset_class: str
    knowledge_doc: KnowledgeDocument | CitedDocument | None = None
    indicator: HealthIndicatorConfig | None = None
    aggregation: AggregationConfig | None = None
    dataset: SampleDataset | None = None
    wrapper: WrapperManifest | None = None


# --- dataset helpers -----------------------------------------------------------

def latest_readings(dataset: SampleDataset) -> dict[str, dict[str, float]]:
    """Latest value per sensor per asset; later rows win timestamp ties."""
    latest: dict[str, dict[str, tuple[datetime, float]]] = {}
    for row in dataset.rows:
        moment = parse_rfc3339(row.timestamp)
        per_asset = latest.setdefault(row.asset_id, {})
        current = per_asset.get(row.sensor_name)
        if current is None or moment >= current[0]:
            per_asset[row.sensor_name] = (moment, row.value)
    return {
        asset: {sensor: value for sensor, (_, value) in readings.items()}
        for asset, readings in latest.items()
    }


def validate_dataset(dataset: SampleDataset, cfg: HealthIndicatorConfig) -> list[str]:
    """Violation strings for coverage, units, timestamps, and domains."""
    violations = []
    if not dataset.rows:
        return ["dataset has no rows"]
    configured = {s.name: s for s in cfg.sensors}
    per_pair: dict[tuple[str, str], list[datetime]] = {}
    for i, row in enumerate(dataset.rows, start=1):
        sensor = configured.get(row.sensor_name)
        if sensor is None:
            violations.append(f"row {i}: unknown sensor {row.sensor_name!r}")
            continue
        if row.unit != sensor.unit:
            violations.append(
                f"row {i}: unit {row.unit!r} does not match configured {sensor.unit!r}"
            )
        try:
            moment = parse_rfc3339(row.timestamp)
        except ValueError as exc:
            violations.append(f"row {i}: bad timestamp: {exc}")
            continue
        per_pair.setdefault((row.asset_id, row.sensor_name), []).append(moment)
        try:
            categorize(row.value, sensor)
        except OutOfDomainError as exc:
            violations.append(f"row {i}: {exc}")
    for asset in {row.asset_id for row in dataset.rows}:
        for name in configured:
            moments = per_pair.get((asset, name), [])
            if not moments:
                violations.append(f"asset {asset!r} has no reading for sensor {name!r}")
            elif moments.count(max(moments)) > 1:
                violations.append(
                    f"asset {asset!r} sensor {name!r} has an ambiguous latest reading"
                )
    return violations


def generate_synthetic(cfg: HealthIndicatorConfig, n_assets: int, seed: int) -> SampleDataset:
    """Uniform draws over each sensor's domain, one row per asset and sensor."""
    if n_assets < 1:
        raise ValueError("n_assets must be at least 1")
    config_violations = validate_indicator_config(cfg)
    if config_violations:
        raise ValidationFailedError(config_violations)
    rng = random.Random(seed)
    rows = []
    for index in range(1, n_assets + 1):
        asset_id = f"asset-{index:03d}"
        for sensor in cfg.sensors:
            low, high = sensor.domain
            # rounding may cross a boundary when the domain has >4 decimals
            value = min(max(round(rng.uniform(low, high), 4), low), high)
            rows.append(SensorReading(
                asset_id=asset_id,
                sensor_name=sensor.name,
                value=value,
                timestamp=SYNTHETIC_TIMESTAMP,
                unit=sensor.unit,
            ))
    return SampleDataset(rows=tuple(rows))


def dataset_to_csv(dataset: SampleDataset) -> str:
    buffer = io.StringIO()
    writer = csv.writer(buffer, lineterminator="\n")
    writer.writerow(DATASET_HEADER)
    for row in dataset.rows:
        writer.writerow([row.asset_id, row.sensor_name, row.value, row.timestamp, row.unit])
    return buffer.getvalue()


def dataset_from_csv(text: str) -> SampleDataset:
    reader = csv.reader(io.StringIO(text))
    try:
        header = next(reader)
    except StopIteration:
        raise ValidationFailedError(["dataset csv is empty"]) from None
    if tuple(header) != DATASET_HEADER:
        raise ValidationFailedError(
            [f"dataset header must be {','.join(DATASET_HEADER)}, got {','.join(header)}"]
        )
    rows = []
    for record in reader:
        if not record:
            continue
        asset_id, sensor_name, value, timestamp, unit = record
        rows.append(SensorReading(asset_id, sensor_name, float(value), timestamp, unit))
    return SampleDataset(rows=tuple(rows))


# --- deterministic config defaults ----------------------------------------------

def default_indicator_config(
    sensor_names, unit: str = "percent", domain: tuple[float, float] = (0.0, 100.0)
) -> HealthIndicatorConfig:
    """Quartile category ranges over a shared domain, ascending with health."""
    names = list(sensor_names)
    if not names:
        raise ValueError("at least one sensor name is required")
    low, high = domain
    quarter = (high - low) / 4.0
    edges = [low + quarter * i for i in range(5)]
    ranges = {
        category: (edges[i], edges[i + 1]) for i, category in enumerate(CATEGORIES)
    }
    return HealthIndicatorConfig(sensors=tuple(
        SensorConfig(name=name, unit=unit, ranges=dict(ranges)) for name in names
    ))


def default_aggregation_config(sensor_names, method: str = "weighted") -> AggregationConfig:
    names = list(sensor_names)
    if not names:
        raise ValueError("at least one sensor name is required")
    if method == "weighted":
        weight = 1.0 / len(names)
        return AggregationConfig(
            category_scores=dict(DEFAULT_CATEGORY_SCORES),
            method="weighted",
            weights={name: weight for name in names},
        )
    if method == "ahp":
        identity = tuple(tuple(1.0 for _ in names) for _ in names)
        return AggregationConfig(
            category_scores=dict(DEFAULT_CATEGORY_SCORES),
            method="ahp",
            sensors=tuple(names),
            pairwise=identity,
        )
    raise ValueError(f"unknown aggregation method {method!r}")


# --- recipe validation and bundling ----------------------------------------------

def validate_recipe(recipe: Recipe) -> list[str]:
    """Every invariant violation as a string; empty means bundle-ready."""
    violations = []
    if not recipe.kpi.strip():
        violations.append("kpi must be non-empty")
    if not recipe.asset_class.strip():
        violations.append("asset class must be non-empty")
    slots = {
        "knowledge_doc": recipe.knowledge_doc,
        "indicator_config": recipe.indicator,
        "aggregation_config": recipe.aggregation,
        "sample_dataset": recipe.dataset,
        "wrapper": recipe.wrapper,
    }
    for name, value in slots.items():
        if value is None:
            violations.append(f"artifact missing: {name}")
    if recipe.knowledge_doc is not None:
        doc = recipe.knowledge_doc
        parts = doc.document.parts if isinstance(doc, CitedDocument) else doc.parts
        if not parts:
            violations.append("knowledge document has no parts")
    if recipe.indicator is not None:
        violations += validate_indicator_config(recipe.indicator)
        if recipe.aggregation is not None:
            violations += validate_aggregation_config(
                recipe.aggregation, recipe.indicator.sensor_names
            )
        if recipe.dataset is not None:
            violations += validate_dataset(recipe.dataset, recipe.indicator)
    if recipe.wrapper is not None:
        expected = {
            INDICATOR_CONFIG_FILE: recipe.wrapper.indicator_config,
            AGGREGATION_CONFIG_FILE: recipe.wrapper.aggregation_config,
            DATASET_FILE: recipe.wrapper.dataset,
        }
        for canonical, referenced in expected.items():
            if referenced != canonical:
                violations.append(
                    f"wrapper references {referenced!r}; the bundle writes {canonical!r}"
                )
        if not recipe.wrapper.output.strip():
            violations.append("wrapper output path must be non-empty")
    return violations


def _indicator_to_mapping(cfg: HealthIndicatorConfig) -> dict:
    return {
        "sensors": [
            {
                "name": s.name,
                "unit": s.unit,
                "ranges": {
                    category: {"min": low, "max": high}
                    for category, (low, high) in s.ranges.items()
                },
            }
            for s in cfg.sensors
        ]
    }


def _indicator_from_mapping(data: dict) -> HealthIndicatorConfig:
    sensors = []
    for entry in data.get("sensors") or []:
        ranges = {
            category: (float(bounds["min"]), float(bounds["max"]))
            for category, bounds in (entry.get("ranges") or {}).items()
        }
        sensors.append(SensorConfig(name=entry["name"], unit=entry["unit"], ranges=ranges))
    return HealthIndicatorConfig(sensors=tuple(sensors))


def _aggregation_to_mapping(cfg: AggregationConfig) -> dict:
    data: dict = {
        "method": cfg.method,
        "category_scores": {c: cfg.category_scores[c] for c in CATEGORIES},
    }
    if cfg.method == "weighted":
        data["weights"] = dict(cfg.weights or {})
    else:
        data["sensors"] = list(cfg.sensors)
        data["pairwise"] = [list(row) for row in cfg.pairwise]
    return data


def _aggregation_from_mapping(data: dict) -> AggregationConfig:
    weights = data.get("weights")
    return AggregationConfig(
        category_scores={k: float(v) for k, v in (data.get("category_scores") or {}).items()},
        method=data.get("method", ""),
        weights={k: float(v) for k, v in weights.items()} if weights else None,
        sensors=tuple(data.get("sensors") or ()),
        pairwise=tuple(tuple(float(x) for x in row) for row in data.get("pairwise") or ()),
    )


def _wrapper_to_mapping(wrapper: WrapperManifest) -> dict:
    return {
        "indicator_config": wrapper.indicator_config,
        "aggregation_config": wrapper.aggregation_config,
        "dataset": wrapper.dataset,
        "output": wrapper.output,
        "model": {
            "name": wrapper.model.name,
            "method": wrapper.model.method,
            "version": wrapper.model.version,
        },
        "run": {
            "seed": wrapper.run.seed,
            "created_at": wrapper.run.created_at,
            "tool_version": wrapper.run.tool_version,
        },
    }


def _wrapper_from_mapping(data: dict) -> WrapperManifest:
    model = data.get("model") or {}
    run = data.get("run") or {}
    return WrapperManifest(
        indicator_config=data.get("indicator_config", ""),
        aggregation_config=data.get("aggregation_config", ""),
        dataset=data.get("dataset", ""),
        output=data.get("output", ""),
        model=ModelDescriptor(
            name=model.get("name", ""),
            method=model.get("method", ""),
            version=model.get("version", ""),
        ),
        run=RunMetadata(
            seed=run.get("seed"),
            created_at=run.get("created_at", ""),
            tool_version=run.get("tool_version", ""),
        ),
    )


def load_indicator_config(path) -> HealthIndicatorConfig:
    data = yaml.safe_load(Path(path).read_text(encoding="utf-8")) or {}
    return _indicator_from_mapping(data)


def load_aggregation_config(path) -> AggregationConfig:
    data = yaml.safe_load(Path(path).read_text(encoding="utf-8")) or {}
    return _aggregation_from_mapping(data)


def _render_doc(doc: KnowledgeDocument | CitedDocument) -> str:
    if isinstance(doc, CitedDocument):
        return render_cited(doc)
    return render_knowledge(doc)


def _dump_yaml(data: dict) -> str:
    return yaml.safe_dump(data, sort_keys=False, allow_unicode=True)


def bundle(recipe: Recipe, out_dir) -> dict[str, Path]:
    """Write the six-file layout; returns artifact kind → path.

    Raises ValidationFailedError when the recipe is not bundle-ready;
    filesystem problems surface as the underlying OSError.
    """
    violations = validate_recipe(recipe)
    if violations:
        raise ValidationFailedError(violations)
    target = Path(out_dir)
    target.mkdir(parents=True, exist_ok=True)
    contents = {
        KNOWLEDGE_DOC_FILE: _render_doc(recipe.knowledge_doc),
        INDICATOR_CONFIG_FILE: _dump_yaml(_indicator_to_mapping(recipe.indicator)),
        AGGREGATION_CONFIG_FILE: _dump_yaml(_aggregation_to_mapping(recipe.aggregation)),
        DATASET_FILE: dataset_to_csv(recipe.dataset),
        WRAPPER_MANIFEST_FILE: _dump_yaml(_wrapper_to_mapping(recipe.wrapper)),
    }
    kinds = {
        KNOWLEDGE_DOC_FILE: "knowledge-doc",
        INDICATOR_CONFIG_FILE: "indicator-config",
        AGGREGATION_CONFIG_FILE: "aggregation-config",
        DATASET_FILE: "sample-dataset",
        WRAPPER_MANIFEST_FILE: "wrapper-manifest",
    }
    written: dict[str, Path] = {}
    artifacts = []
    for filename, text in contents.items():
        path = target / filename
        payload = text.encode("utf-8")
        path.write_bytes(payload)
        written[kinds[filename]] = path
        artifacts.append({
            "kind": kinds[filename],
            "path": filename,
            "sha256": hashlib.sha256(payload).hexdigest(),
        })
    index = {
        "kpi": recipe.kpi,
        "asset_class": recipe.asset_class,
        "artifacts": artifacts,
    }
    index_path = target / RECIPE_INDEX_FILE
    index_path.write_bytes(_dump_yaml(index).encode("utf-8"))
    written["recipe-index"] = index_path
    return written


def parse_bundle(bundle_dir) -> Recipe:
    """Reconstruct a Recipe from an on-disk bundle, verifying content hashes."""
    root = Path(bundle_dir)
    index_path = root / RECIPE_INDEX_FILE
    if not index_path.is_file():
        raise NotFoundError(f"no {RECIPE_INDEX_FILE} in {root}")
    index = yaml.safe_load(index_path.read_text(encoding="utf-8")) or {}
    payloads: dict[str, bytes] = {}
    violations = []
    for entry in index.get("artifacts") or []:
        path = root / entry["path"]
        if not path.is_file():
            violations.append(f"missing artifact file {entry['path']!r}")
            continue
        payload = path.read_bytes()
        digest = hashlib.sha256(payload).hexdigest()
        if digest != entry.get("sha256"):
            violations.append(f"content hash mismatch for {entry['path']!r}")
        payloads[entry["kind"]] = payload
    required = ("knowledge-doc", "indicator-config", "aggregation-config",
                "sample-dataset", "wrapper-manifest")
    for kind in required:
        if kind not in payloads:
            violations.append(f"artifact missing from index: {kind}")
    if violations:
        raise ValidationFailedError(violations)
    return Recipe(
        kpi=index.get("kpi", ""),
        asset_class=index.get("asset_class", ""),
        knowledge_doc=split_parts(payloads["knowledge-doc"].decode("utf-8")),
        indicator=_indicator_from_mapping(
            yaml.safe_load(payloads["indicator-config"].decode("utf-8")) or {}
        ),
        aggregation=_aggregation_from_mapping(
            yaml.safe_load(payloads["aggregation-config"].decode("utf-8")) or {}
        ),
        dataset=dataset_from_csv(payloads["sample-dataset"].decode("utf-8")),
        wrapper=_wrapper_from_mapping(
            yaml.safe_load(payloads["wrapper-manifest"].decode("utf-8")) or {}
        ),
    )


# --- versioned artifact store ----------------------------------------------------

class KnowledgeBase:
    """In-memory store of artifact bytes keyed by asset class, KPI, and kind.

    Versions start at 1 and grow monotonically per key; writes are
    serialized, reads return the stored bytes untouched.
    """

    def __init__(self):
        self._store: dict[tuple[str, str, str], list[bytes]] = {}
        self._lock = threading.Lock()

    @staticmethod
    def _key(asset_class: str, kpi: str, kind: str) -> tuple[str, str, str]:
        key = (normalize_name(asset_class), normalize_name(kpi), normalize_name(kind))
        if not all(key):
            raise ValueError("asset_class, kpi, and kind must all be non-empty")
        return key

    def put(self, asset_class: str, kpi: str, kind: str, content: bytes) -> int:
        if not isinstance(content, (bytes, bytearray)):
            raise TypeError("artifact content must be bytes")
        key = self._key(asset_class, kpi, kind)
        with self._lock:
            versions = self._store.setdefault(key, [])
            versions.append(bytes(content))
            return len(versions)

    def get(self, asset_class: str, kpi: str, kind: str, version: int | None = None) -> bytes:
        key = self._key(asset_class, kpi, kind)
        versions = self._store.get(key)
        if not versions:
            raise NotFoundError(f"no artifact stored for {key}")
        if version is None:
            return versions[-1]
        if not 1 <= version <= len(versions):
            raise NotFoundError(f"version {version} not stored for {key}")
        return versions[version - 1]

    def latest_version(self, asset_class: str, kpi: str, kind: str) -> int:
        key = self._key(asset_class, kpi, kind)
        versions = self._store.get(key)
        if not versions:
            raise NotFoundError(f"no artifact stored for {key}")
        return len(versions)
