"""Categorization, weighted aggregation, and pairwise-comparison weights."""

from __future__ import annotations

import random

import numpy as np
import pytest

from autorecipe.errors import (
    MissingSensorError,
    NonPositiveEntryError,
    NotFittedError,
    NotReciprocalError,
    OutOfDomainError,
    RatioIndexUnavailableError,
    ValidationFailedError,
)
from autorecipe.scoring import (
    CATEGORIES,
    DEFAULT_CATEGORY_SCORES,
    RANDOM_INDEX,
    AggregationConfig,
    HealthIndicatorConfig,
    HealthScoreEstimator,
    SensorConfig,
    ahp_weights,
    categorize,
    consistency_ratio,
    principal_eigen,
    validate_aggregation_config,
    validate_indicator_config,
    weighted_score,
)

QUARTILES = {
    "poor": (0.0, 25.0),
    "medium": (25.0, 50.0),
    "good": (50.0, 75.0),
    "excellent": (75.0, 100.0),
}


def _sensor(name: str = "temperature") -> SensorConfig:
    return SensorConfig(name=name, unit="percent", ranges=dict(QUARTILES))


def _consistent_matrix(weights: list[float]) -> np.ndarray:
    w = np.asarray(weights, dtype=float)
    return w[:, None] / w[None, :]


def _random_weights(rng: random.Random, n: int) -> list[float]:
    raw = [rng.uniform(0.1, 10.0) for _ in range(n)]
    total = sum(raw)
    return [v / total for v in raw]


# --- categorization ---------------------------------------------------------------

def test_categorize_lower_inclusive_boundaries():
    sensor = _sensor()
    assert categorize(0.0, sensor) == "poor"
    assert categorize(24.999, sensor) == "poor"
    assert categorize(25.0, sensor) == "medium"
    assert categorize(50.0, sensor) == "good"
    assert categorize(74.999, sensor) == "good"
    assert categorize(75.0, sensor) == "excellent"


def test_categorize_topmost_range_is_closed():
    assert categorize(100.0, _sensor()) == "excellent"


def test_categorize_out_of_domain():
    sensor = _sensor()
    with pytest.raises(OutOfDomainError):
        categorize(-0.001, sensor)
    with pytest.raises(OutOfDomainError):
        categorize(100.001, sensor)


def test_sensor_domain_property():
    assert _sensor().domain == (0.0, 100.0)


# --- config validation ----------------------------------------------------------------

def test_validate_indicator_accepts_quartile_config():
    cfg = HealthIndicatorConfig(sensors=(_sensor("a"), _sensor("b")))
    assert validate_indicator_config(cfg) == []


def test_validate_indicator_flags_problems():
    no_sensors = HealthIndicatorConfig(sensors=())
    assert validate_indicator_config(no_sensors) == ["indicator config declares no sensors"]

    duplicated = HealthIndicatorConfig(sensors=(_sensor("a"), _sensor("a")))
    assert any("declared twice" in v for v in validate_indicator_config(duplicated))

    three_only = {k: v for k, v in QUARTILES.items() if k != "excellent"}
    missing = HealthIndicatorConfig(
        sensors=(SensorConfig("a", "percent", three_only),)
    )
    assert any("exactly the categories" in v for v in validate_indicator_config(missing))

    inverted = dict(QUARTILES)
    inverted["medium"] = (50.0, 25.0)
    bad_range = HealthIndicatorConfig(sensors=(SensorConfig("a", "percent", inverted),))
    assert any("empty or inverted" in v for v in validate_indicator_config(bad_range))

    gapped = dict(QUARTILES)
    gapped["medium"] = (30.0, 50.0)
    gap = HealthIndicatorConfig(sensors=(SensorConfig("a", "percent", gapped),))
    assert any("tile the domain" in v for v in validate_indicator_config(gap))


def test_validate_aggregation_weighted():
    good = AggregationConfig(
        category_scores=dict(DEFAULT_CATEGORY_SCORES),
        method="weighted",
        weights={"a": 0.6, "b": 0.4},
    )
    assert validate_aggregation_config(good, ("a", "b")) == []

    assert validate_aggregation_config(
        AggregationConfig(dict(DEFAULT_CATEGORY_SCORES), "weighted"), ("a",)
    ) == ["weighted method declared without weights"]

    bad_sum = AggregationConfig(
        dict(DEFAULT_CATEGORY_SCORES), "weighted", weights={"a": 0.7, "b": 0.4}
    )
    assert any("sum to 1.0" in v for v in validate_aggregation_config(bad_sum, ("a", "b")))

    negative = AggregationConfig(
        dict(DEFAULT_CATEGORY_SCORES), "weighted", weights={"a": 1.5, "b": -0.5}
    )
    assert any("non-negative" in v for v in validate_aggregation_config(negative, ("a", "b")))

    mismatched = AggregationConfig(
        dict(DEFAULT_CATEGORY_SCORES), "weighted", weights={"a": 0.5, "c": 0.5}
    )
    assert any("match the configured sensors" in v
               for v in validate_aggregation_config(mismatched, ("a", "b")))


def test_validate_aggregation_category_scores():
    wrong_set = AggregationConfig({"poor": 0.2, "fine": 0.9}, "weighted", weights={"a": 1.0})
    assert any("exactly" in v for v in validate_aggregation_config(wrong_set, ("a",)))

    out_of_range = AggregationConfig(
        {"poor": -0.1, "medium": 0.5, "good": 0.75, "excellent": 1.0},
        "weighted", weights={"a": 1.0},
    )
    assert any("[0, 1]" in v for v in validate_aggregation_config(out_of_range, ("a",)))

    flat = AggregationConfig(
        {"poor": 0.5, "medium": 0.5, "good": 0.75, "excellent": 1.0},
        "weighted", weights={"a": 1.0},
    )
    assert any("strictly increasing" in v for v in validate_aggregation_config(flat, ("a",)))


def test_validate_aggregation_ahp():
    good = AggregationConfig(
        dict(DEFAULT_CATEGORY_SCORES), "ahp",
        sensors=("a", "b"), pairwise=((1.0, 3.0), (1 / 3, 1.0)),
    )
    assert validate_aggregation_config(good, ("a", "b")) == []

    missing = AggregationConfig(dict(DEFAULT_CATEGORY_SCORES), "ahp")
    assert any("needs sensors" in v for v in validate_aggregation_config(missing))

    not_square = AggregationConfig(
        dict(DEFAULT_CATEGORY_SCORES), "ahp",
        sensors=("a", "b"), pairwise=((1.0, 2.0, 3.0), (0.5, 1.0, 2.0)),
    )
    assert any("square" in v for v in validate_aggregation_config(not_square))

    wrong_size = AggregationConfig(
        dict(DEFAULT_CATEGORY_SCORES), "ahp",
        sensors=("a", "b", "c"), pairwise=((1.0, 2.0), (0.5, 1.0)),
    )
    assert any("match the sensor list" in v for v in validate_aggregation_config(wrong_size))

    lopsided = AggregationConfig(
        dict(DEFAULT_CATEGORY_SCORES), "ahp",
        sensors=("a", "b"), pairwise=((1.0, 2.0), (1.0, 1.0)),
    )
    assert any("reciprocal" in v for v in validate_aggregation_config(lopsided))

    unknown = AggregationConfig(dict(DEFAULT_CATEGORY_SCORES), "mystery")
    assert any("unknown aggregation method" in v for v in validate_aggregation_config(unknown))


# --- weighted scores --------------------------------------------------------------------

def test_weighted_score_hand_value():
    cfg = AggregationConfig(
        dict(DEFAULT_CATEGORY_SCORES), "weighted", weights={"a": 0.6, "b": 0.4}
    )
    result = weighted_score({"a": "good", "b": "poor"}, cfg, asset_id="asset-001")
    assert result.score == pytest.approx(100.0 * (0.6 * 0.75 + 0.4 * 0.25))
    assert result.asset_id == "asset-001"
    contributions = {c.sensor: c for c in result.breakdown}
    assert contributions["a"].category == "good"
    assert contributions["a"].category_score == 0.75
    assert contributions["b"].weight == 0.4


def test_weighted_score_missing_reading():
    cfg = AggregationConfig(
        dict(DEFAULT_CATEGORY_SCORES), "weighted", weights={"a": 0.5, "b": 0.5}
    )
    with pytest.raises(MissingSensorError, match="b"):
        weighted_score({"a": "good"}, cfg)


def test_weighted_score_unknown_category():
    cfg = AggregationConfig(dict(DEFAULT_CATEGORY_SCORES), "weighted", weights={"a": 1.0})
    with pytest.raises(ValidationFailedError):
        weighted_score({"a": "stellar"}, cfg)


def test_weighted_score_bounds_and_monotonicity():
    rng = random.Random(20240814)
    for _ in range(500):
        n = rng.randint(1, 5)
        names = [f"s{i}" for i in range(n)]
        weights = dict(zip(names, _random_weights(rng, n)))
        cfg = AggregationConfig(dict(DEFAULT_CATEGORY_SCORES), "weighted", weights=weights)
        cats = {name: rng.choice(CATEGORIES) for name in names}
        base = weighted_score(cats, cfg).score
        assert 0.0 <= base <= 100.0 + 1e-9
        assert base >= 100.0 * min(DEFAULT_CATEGORY_SCORES.values()) - 1e-9
        upgradable = [name for name in names if CATEGORIES.index(cats[name]) < 3]
        if upgradable:
            chosen = rng.choice(upgradable)
            upgraded = dict(cats)
            upgraded[chosen] = CATEGORIES[CATEGORIES.index(cats[chosen]) + 1]
            assert weighted_score(upgraded, cfg).score >= base - 1e-12


def test_all_ones_pairwise_equals_equal_weights():
    rng = random.Random(7)
    for n in range(1, 6):
        names = tuple(f"s{i}" for i in range(n))
        ahp_cfg = AggregationConfig(
            dict(DEFAULT_CATEGORY_SCORES), "ahp",
            sensors=names, pairwise=tuple(tuple(1.0 for _ in names) for _ in names),
        )
        flat_cfg = AggregationConfig(
            dict(DEFAULT_CATEGORY_SCORES), "weighted",
            weights={name: 1.0 / n for name in names},
        )
        cats = {name: rng.choice(CATEGORIES) for name in names}
        assert weighted_score(cats, ahp_cfg).score == pytest.approx(
            weighted_score(cats, flat_cfg).score, abs=1e-9
        )


def test_effective_weights_copies():
    cfg = AggregationConfig(dict(DEFAULT_CATEGORY_SCORES), "weighted", weights={"a": 1.0})
    first = cfg.effective_weights()
    first["a"] = 0.0
    assert cfg.effective_weights() == {"a": 1.0}


# --- pairwise comparison math --------------------------------------------------------------

def test_ahp_weights_two_by_two_oracle():
    weights = ahp_weights([[1.0, 3.0], [1 / 3, 1.0]])
    assert weights == pytest.approx([0.75, 0.25], abs=1e-12)


def test_ahp_weights_recover_consistent_matrix():
    matrix = _consistent_matrix([0.5, 0.3, 0.2])
    assert ahp_weights(matrix) == pytest.approx([0.5, 0.3, 0.2], abs=1e-12)


def test_ahp_weights_random_consistent_recovery():
    rng = random.Random(20240814)
    for _ in range(100):
        n = rng.randint(2, 7)
        weights = _random_weights(rng, n)
        recovered = ahp_weights(_consistent_matrix(weights))
        assert float(np.max(np.abs(recovered - np.asarray(weights)))) < 1e-9


def test_pairwise_rejections():
    with pytest.raises(NotReciprocalError):
        ahp_weights([[1.0, 2.0], [1.0, 1.0]])
    with pytest.raises(NonPositiveEntryError):
        ahp_weights([[1.0, 0.0], [2.0, 1.0]])
    with pytest.raises(ValueError, match="square"):
        ahp_weights([[1.0, 2.0, 3.0], [0.5, 1.0, 2.0]])
    with pytest.raises(ValueError, match="maximum"):
        ahp_weights(np.ones((16, 16)))


def test_principal_eigen_against_numpy():
    rng = random.Random(99)
    for _ in range(25):
        n = rng.randint(2, 7)
        weights = _random_weights(rng, n)
        matrix = _consistent_matrix(weights)
        for i in range(n):
            for j in range(i + 1, n):
                matrix[i, j] *= float(np.exp(rng.uniform(-0.3, 0.3)))
                matrix[j, i] = 1.0 / matrix[i, j]
        eigenvalue, vector = principal_eigen(matrix)
        reference = float(np.max(np.linalg.eigvals(matrix).real))
        assert eigenvalue == pytest.approx(reference, abs=1e-6)
        assert vector.sum() == pytest.approx(1.0, abs=1e-9)
        assert np.all(vector > 0)


def test_geometric_and_eigen_weights_agree_on_consistent_matrices():
    rng = random.Random(20240814)
    for _ in range(50):
        n = rng.randint(2, 7)
        matrix = _consistent_matrix(_random_weights(rng, n))
        geo = ahp_weights(matrix)
        _, eig = principal_eigen(matrix)
        assert float(np.max(np.abs(geo - eig))) < 1e-9


def test_geometric_and_eigen_weights_agree_on_near_consistent_matrices():
    rng = random.Random(4)
    accepted = 0
    for _ in range(60):
        n = rng.randint(3, 7)
        matrix = _consistent_matrix(_random_weights(rng, n))
        for i in range(n):
            for j in range(i + 1, n):
                factor = np.exp(rng.uniform(-0.08, 0.08))
                matrix[i, j] *= factor
                matrix[j, i] = 1.0 / matrix[i, j]
        if consistency_ratio(matrix) >= 0.1:
            continue
        accepted += 1
        geo = ahp_weights(matrix)
        _, eig = principal_eigen(matrix)
        assert float(np.max(np.abs(geo - eig))) < 1e-3
    assert accepted >= 30  # the sampler must actually exercise the claim


def test_consistency_ratio_values():
    assert consistency_ratio([[1.0]]) == 0.0
    assert consistency_ratio([[1.0, 5.0], [0.2, 1.0]]) == 0.0
    assert consistency_ratio(_consistent_matrix([0.5, 0.3, 0.2])) < 1e-6
    cyclic = [[1.0, 9.0, 1 / 9], [1 / 9, 1.0, 9.0], [9.0, 1 / 9, 1.0]]
    assert consistency_ratio(cyclic) > 0.1


def test_consistency_ratio_unsupported_size():
    matrix = _consistent_matrix([1.0] * 11)
    with pytest.raises(RatioIndexUnavailableError):
        consistency_ratio(matrix)


def test_random_index_table():
    assert RANDOM_INDEX == {
        1: 0.0, 2: 0.0, 3: 0.58, 4: 0.90, 5: 1.12,
        6: 1.24, 7: 1.32, 8: 1.41, 9: 1.45, 10: 1.49,
    }


# --- estimator ---------------------------------------------------------------------------

def _fitted_estimator():
    indicator = HealthIndicatorConfig(sensors=(_sensor("temperature"), _sensor("vibration")))
    aggregation = AggregationConfig(
        dict(DEFAULT_CATEGORY_SCORES), "weighted",
        weights={"temperature": 0.5, "vibration": 0.5},
    )
    return HealthScoreEstimator().fit(indicator, aggregation)


def test_estimator_requires_fit():
    from autorecipe.recipe import SampleDataset

    with pytest.raises(NotFittedError):
        HealthScoreEstimator().predict(SampleDataset(rows=()))


def test_estimator_fit_rejects_bad_configs():
    indicator = HealthIndicatorConfig(sensors=(_sensor("temperature"),))
    aggregation = AggregationConfig(
        dict(DEFAULT_CATEGORY_SCORES), "weighted", weights={"other": 1.0}
    )
    with pytest.raises(ValidationFailedError) as info:
        HealthScoreEstimator().fit(indicator, aggregation)
    assert any("match the configured sensors" in v for v in info.value.violations)


def test_estimator_predict_hand_computation():
    from autorecipe.recipe import SampleDataset, SensorReading

    estimator = _fitted_estimator()
    rows = (
        SensorReading("asset-002", "temperature", 80.0, "2024-01-01T00:00:00Z", "percent"),
        SensorReading("asset-002", "vibration", 10.0, "2024-01-01T00:00:00Z", "percent"),
        SensorReading("asset-001", "temperature", 30.0, "2024-01-01T00:00:00Z", "percent"),
        # stale reading, superseded by the later one below
        SensorReading("asset-001", "vibration", 90.0, "2024-01-01T00:00:00Z", "percent"),
        SensorReading("asset-001", "vibration", 60.0, "2024-01-02T00:00:00Z", "percent"),
    )
    scores = estimator.predict(SampleDataset(rows=rows))
    assert [s.asset_id for s in scores] == ["asset-001", "asset-002"]
    # asset-001: medium (0.5) and good (0.75) at half weight each
    assert scores[0].score == pytest.approx(100.0 * (0.5 * 0.5 + 0.5 * 0.75))
    # asset-002: excellent (1.0) and poor (0.25) at half weight each
    assert scores[1].score == pytest.approx(100.0 * (0.5 * 1.0 + 0.5 * 0.25))


def test_estimator_predict_validates_dataset():
    from autorecipe.recipe import SampleDataset, SensorReading

    estimator = _fitted_estimator()
    rows = (
        SensorReading("asset-001", "pressure", 30.0, "2024-01-01T00:00:00Z", "percent"),
    )
    with pytest.raises(ValidationFailedError):
        estimator.predict(SampleDataset(rows=rows))
