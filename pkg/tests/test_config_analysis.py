import math
from pathlib import Path

import pytest
from hypothesis import given
from hypothesis import strategies as st

from policylens import ConfigError, load_config
from policylens.analysis import (
    CorpusView,
    LabelFraction,
    fmt,
    label_fractions,
    policy_label_probs,
    to_csv,
    yearly_policies,
)
from policylens.classify import SegmentLabels, attribute, category

# -- config --------------------------------------------------------------------------


def test_defaults():
    cfg = load_config()
    assert cfg.schedule().quarterly_range == (2009, 2017)
    assert cfg.fetch_policy().max_retries == 3
    assert cfg.reports_dir == Path("corpus") / "reports"
    assert cfg.bundle_dir == Path("corpus") / "model"


def test_yaml_paths_relative_to_file(tmp_path):
    sub = tmp_path / "cfg"
    sub.mkdir()
    (sub / "run.yaml").write_text(
        "corpus: data\nseed: 7\nyearly: [2000, 2004]\nquarterly: [2005, 2010]\nmonthly_start: 2011-03\n"
        "counting: {sentence_strategy: regex}\n"
        "gate_models: [{path: gate.pkl, threshold: 0.9}]\n"
    )
    cfg = load_config(sub / "run.yaml", {"seed": 9, "workers": None})
    assert cfg.corpus == sub / "data" and cfg.seed == 9
    assert cfg.schedule().monthly_start == (2011, 3)
    assert cfg.counting_config().sentence_strategy == "regex"
    assert cfg.gate_models[0].path == sub / "gate.pkl"


@pytest.mark.parametrize("body", [
    "bogus: 1\n",
    "- a list\n",
    "monthly_start: 2018-13\n",
    "yearly: [2000]\n",
    "quarterly: [2005, 2017]\nyearly: [2000, 2008]\nmonthly_start: 2016-01\n",
    "timeout: 0\n",
    "workers: 0\n",
    "counting: {word_strategy: magic}\n",
    "gate_models: [{path: x, threshold: 2}]\n",
    "corpus: [unclosed\n",
])
def test_bad_configs(tmp_path, body):
    (tmp_path / "c.yaml").write_text(body)
    with pytest.raises(ConfigError):
        load_config(tmp_path / "c.yaml")


def test_require(tmp_path):
    cfg = load_config(overrides={"sites": str(tmp_path / "none.txt")})
    with pytest.raises(ConfigError):
        cfg.require("sites")
    with pytest.raises(ConfigError):
        cfg.require("annotations")
    with pytest.raises(ConfigError):
        load_config(overrides={"nope": 1})


# -- formatting ---------------------------------------------------------------------------


def test_fmt():
    assert [fmt(None), fmt(True), fmt(3), fmt(0.1 + 0.2), fmt(float("nan"))] == ["", "true", "3", "0.3", "nan"]
    assert to_csv(("a", "b"), [(1, None)]) == "a,b\n1,\n"


# -- label aggregation ------------------------------------------------------------------------


def test_policy_probs_take_max():
    segs = [SegmentLabels({"A": 0.2, "B": 0.9}, {("X", "1"): 0.4}),
            SegmentLabels({"A": 0.7, "B": 0.1}, {("X", "1"): 0.3})]
    probs = policy_label_probs(segs)
    assert probs[category("A")] == 0.7 and probs[category("B")] == 0.9
    assert probs[attribute("X", "1")] == 0.4


def test_yearly_policies_use_last_month():
    view = CorpusView({}, {"s": {"2018-02": "h1", "2018-11": "h2", "2019-01": "h3"}}, {}, 3)
    assert yearly_policies(view) == [(2018, "s", "h2"), (2019, "s", "h3")]


def test_label_fractions_counts_and_interval():
    policies = [(2018, [SegmentLabels({"A": p})]) for p in (0.9, 0.8, 0.1, 0.6)]
    (row,) = label_fractions(policies, [category("A")])
    assert (row.n_policies, row.count) == (4, 3)
    assert row.expected == pytest.approx(2.4)
    assert row.k_low <= row.count <= row.k_high
    assert row.row()[:7] == [2018, "category", "A", "", 4, 3, 0.75]


@given(st.lists(st.floats(0, 1), min_size=1, max_size=15))
def test_label_fraction_bounds(probs):
    policies = [(2020, [SegmentLabels({"A": p})]) for p in probs]
    (row,) = label_fractions(policies, [category("A")], threshold=0.5)
    assert 0 <= row.k_low <= row.k_high <= len(probs)
    assert 0.0 <= row.fraction <= 1.0
    assert math.isclose(row.expected, sum(probs), abs_tol=1e-9)


def test_threshold_one_gives_zero():
    policies = [(2018, [SegmentLabels({"A": 1.0})])]
    (row,) = label_fractions(policies, [category("A")], threshold=1.0)
    assert isinstance(row, LabelFraction) and row.count == 0
