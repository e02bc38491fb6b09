import csv
import io
import json
from datetime import datetime
from pathlib import Path

import numpy as np
import pytest
from click.testing import CliRunner

import fixture_sites
from archive_server import ArchiveServer, FakeArchive
from policylens.classify import write_annotations
from policylens.cli import main
from policylens.extraction import CorpusStore, PolicyLink
from policylens.extraction.gate import GateVerdict
from policylens.extraction.store import PolicySnapshot
from policylens.segment import EmbeddingTable
from policylens.text.readability import flesch_reading_ease
from synth import CATEGORIES, separable_corpus

pytestmark = pytest.mark.network

FAST = ["--min-delay", "0", "--max-retries", "0", "--timeout", "5"]


def run(*args: str):
    return CliRunner().invoke(main, list(args), catch_exceptions=False)


def read_csv(path: Path) -> list[dict]:
    return list(csv.DictReader(io.StringIO(path.read_text())))


def write_corpus(root: Path, policies: dict[str, dict[datetime, str]]) -> None:
    """A corpus directory as crawl + extract would leave it."""
    store = CorpusStore(root)
    snaps = []
    for site, versions in policies.items():
        for ts, text in sorted(versions.items()):
            u = store.dedupe(text, ts, site)
            link = PolicyLink(f"http://{site}/privacy", "Privacy", "privacy")
            snaps.append(PolicySnapshot(site, link, ts, u.content_hash, GateVerdict("en", True, 200, [], True)))
    store.write_snapshots(snaps)


def reports(corpus: Path) -> dict[str, bytes]:
    return {p.name: p.read_bytes() for p in sorted((corpus / "reports").iterdir())}


# -- crawl ------------------------------------------------------------------------


@pytest.fixture(scope="module")
def crawled(tmp_path_factory):
    root = tmp_path_factory.mktemp("crawl")
    archive, sites, expected = fixture_sites.build()
    (root / "sites.txt").write_text("alpha.example\nbravo.example\n")
    with ArchiveServer(archive) as srv:
        res = run("crawl", "--corpus", str(root / "corpus"), "--sites", str(root / "sites.txt"),
                  "--archive-url", srv.url, *FAST)
    return root / "corpus", res, expected


def test_two_site_crawl(crawled):
    corpus, res, _ = crawled
    assert res.exit_code == 0, res.stderr
    recs = [json.loads(l) for l in (corpus / "snapshots.jsonl").read_text().splitlines()]
    counts = {s: sum(r["site"] == s for r in recs) for s in ("alpha.example", "bravo.example")}
    assert counts == {"alpha.example": 24, "bravo.example": 23}
    assert len(list((corpus / "texts").glob("*.txt"))) == 4
    assert "alpha.example: ok" in res.output


def test_metrics_rows_and_smog_flag(crawled):
    corpus, _, _ = crawled
    assert run("metrics", "--corpus", str(corpus)).exit_code == 0
    rows = read_csv(corpus / "reports" / "metrics.csv")
    assert len(rows) == 4
    for r in rows:
        w, s, syl = int(r["words"]), int(r["sentences"]), int(r["syllables"])
        assert float(r["fre"]) == pytest.approx(flesch_reading_ease(w, s, syl), abs=1e-9)
        assert r["smog_valid"] == "false"
    names = {fixture_sites.policy_words(n): n for n in ("alpha_v1", "alpha_v2", "bravo_v1", "bravo_v2")}
    for r in rows:
        closest = min(names, key=lambda hand: abs(hand - int(r["words"])))
        assert abs(int(r["words"]) - closest) <= 0.02 * closest


def test_metrics_rerun_identical(crawled):
    corpus, _, _ = crawled
    run("metrics", "--corpus", str(corpus))
    first = reports(corpus)
    assert run("metrics", "--corpus", str(corpus)).exit_code == 0
    assert reports(corpus) == first


def test_empty_site_list(tmp_path):
    (tmp_path / "sites.txt").write_text("\n# nothing\n")
    res = run("crawl", "--corpus", str(tmp_path / "c"), "--sites", str(tmp_path / "sites.txt"))
    assert res.exit_code == 0 and "nothing to do" in res.output


def test_all_fetches_fail(tmp_path):
    archive = FakeArchive(fail_all=503)
    (tmp_path / "sites.txt").write_text("alpha.example\n")
    with ArchiveServer(archive) as srv:
        res = run("crawl", "--corpus", str(tmp_path / "c"), "--sites", str(tmp_path / "sites.txt"),
                  "--archive-url", srv.url, *FAST)
    assert res.exit_code == 1
    assert not list((tmp_path / "c" / "texts").glob("*.txt"))


def test_config_errors(tmp_path):
    assert run("crawl", "--corpus", str(tmp_path)).exit_code == 2  # no site list
    assert run("metrics", "--config", str(tmp_path / "missing.yaml")).exit_code == 2
    (tmp_path / "bad.yaml").write_text("no_such_option: 1\n")
    assert run("metrics", "--config", str(tmp_path / "bad.yaml")).exit_code == 2
    assert run("metrics", "--corpus", str(tmp_path / "empty")).exit_code == 1


# -- compare ----------------------------------------------------------------------------

FILLER = "We keep records safe. "  # four words


def words_text(n_fillers: int, extra: str = "") -> str:
    return "Privacy notice. " + FILLER * n_fillers + extra


@pytest.fixture
def cohort_corpus(tmp_path):
    before, after = datetime(2018, 3, 10), datetime(2018, 6, 10)
    policies = {}
    for i in range(4):
        policies[f"m{i}.example"] = {before: words_text(50 + 10 * i),
                                     after: words_text(175 + 10 * i, "The GDPR applies.")}
        policies[f"n{i}.example"] = {before: words_text(40 + 7 * i), after: words_text(40 + 7 * i)}
    write_corpus(tmp_path / "c", policies)
    return tmp_path / "c"


def test_compare_delta(cohort_corpus):
    res = run("compare", "--corpus", str(cohort_corpus), "--term", "GDPR",
              "--before", "2018-03", "--after", "2018-06")
    assert res.exit_code == 0, res.stderr
    out = json.loads((cohort_corpus / "reports" / "compare_words_2018-03_2018-06.json").read_text())
    m = out["cohorts"]["mentions"]
    # 125 extra fillers of four words, plus the three-word GDPR sentence
    assert m["mean_delta"] == pytest.approx(503.0)
    assert m["n_sites"] == 4 and m["computable"]
    n = out["cohorts"]["non_mentions"]
    assert n["mean_delta"] == 0.0 and n["t"] == 0.0 and n["p_value"] == 1.0


def test_compare_identical_months(cohort_corpus):
    res = run("compare", "--corpus", str(cohort_corpus), "--term", "GDPR",
              "--before", "2018-06", "--after", "2018-06")
    out = json.loads(res.output)
    for cohort in out["cohorts"].values():
        assert cohort["t"] == 0.0 and cohort["p_value"] == 1.0


def test_compare_not_computable(cohort_corpus):
    out = json.loads(run("compare", "--corpus", str(cohort_corpus), "--term", "CCPA",
                         "--before", "2018-03", "--after", "2018-06").output)
    assert out["cohorts"]["mentions"] == {"n_sites": 0, "n_before": 0, "n_after": 0, "computable": False,
                                          "reason": out["cohorts"]["mentions"]["reason"]}


def test_compare_unknown_term_or_metric(cohort_corpus):
    base = ["compare", "--corpus", str(cohort_corpus), "--before", "2018-03", "--after", "2018-06"]
    assert run(*base, "--term", "NOPE").exit_code == 2
    assert run(*base, "--term", "GDPR", "--metric", "shoe_size").exit_code == 2
    assert run("terms", "--corpus", str(cohort_corpus), "--term", "NOPE").exit_code == 2


def test_terms_and_report(cohort_corpus):
    assert run("terms", "--corpus", str(cohort_corpus), "--term", "GDPR").exit_code == 0
    rows = read_csv(cohort_corpus / "reports" / "term_series.csv")
    assert {(r["month"], r["mean"]) for r in rows if r["month"] in ("2018-03", "2018-06")} == \
        {("2018-03", "0.0"), ("2018-06", "0.5")}
    upd = {r["month"]: float(r["update_rate"]) for r in read_csv(cohort_corpus / "reports" / "update_rate.csv")}
    assert upd["2018-04"] == 0.0 and upd["2018-06"] == 0.5
    res = run("report", "--corpus", str(cohort_corpus))
    summary = json.loads((cohort_corpus / "reports" / "summary.json").read_text())
    assert res.exit_code == 0 and summary["sites"] == 8 and summary["unique_policies"] == 12


# -- segment / train / label ----------------------------------------------------------------


def category_block(ci: int, n: int = 3) -> str:
    return " ".join(f"Cat{ci}w{j} cat{ci}w{j + 1} cat{ci}w{j + 2} cat{ci}w{j + 3}." for j in range(n))


LABEL_POLICIES = {  # site -> year -> categories present
    "a.example": {2018: (0, 1), 2019: (0, 1, 2)},
    "b.example": {2018: (1,), 2019: (1,)},
    "c.example": {2018: (0, 3), 2019: (4,)},
}


@pytest.fixture(scope="module")
def labeled(tmp_path_factory):
    root = tmp_path_factory.mktemp("label")
    policies = {
        site: {datetime(year, 5, 1): "\n\n".join(category_block(c) for c in cats)
               for year, cats in years.items()}
        for site, years in LABEL_POLICIES.items()
    }
    write_corpus(root / "c", policies)
    vecs = {}
    for ci in range(len(CATEGORIES)):
        for j in range(12):
            vecs[f"cat{ci}w{j}"] = np.eye(len(CATEGORIES))[ci]
    EmbeddingTable(len(CATEGORIES), vecs).save(root / "emb.txt")
    write_annotations(separable_corpus(200, seed=0), root / "ann.csv")
    schema_path = root / "schema.json"
    from synth import separable_schema

    schema_path.write_text(json.dumps(separable_schema().to_dict()))
    common = ["--corpus", str(root / "c")]
    assert run("segment", *common, "--embeddings", str(root / "emb.txt")).exit_code == 0
    return root, common


def test_label_requires_bundle(labeled):
    root, common = labeled
    res = run("label", *common, "--bundle", str(root / "nowhere"))
    assert res.exit_code == 2 and "train" in res.stderr


def test_segments_follow_blocks(labeled):
    root, _ = labeled
    segs = [json.loads(l) for l in (root / "c" / "segments.jsonl").read_text().splitlines()]
    # segmentation runs once per unique text; b.example never changes
    unique_blocks = {c for years in LABEL_POLICIES.values() for c in years.values()}
    assert len(segs) == sum(len(c) for c in unique_blocks)
    assert all(s["sentence_span"][1] - s["sentence_span"][0] == 3 for s in segs)


def test_train_and_label(labeled, monkeypatch):
    root, common = labeled
    import policylens.cli as cli_mod
    from synth import separable_schema

    monkeypatch.setattr(cli_mod, "load_schema", lambda: separable_schema())
    res = run("train", *common, "--annotations", str(root / "ann.csv"), "--bundle", str(root / "m"))
    assert res.exit_code == 0, res.stderr
    evaluation = json.loads((root / "m" / "evaluation.json").read_text())
    assert evaluation["top"]["micro"]["f1"] >= 0.95

    assert run("label", *common, "--bundle", str(root / "m")).exit_code == 0
    rows = read_csv(root / "c" / "reports" / "label_fractions.csv")
    got = {(int(r["year"]), r["name"]): float(r["fraction"]) for r in rows if r["level"] == "category"}
    for year in (2018, 2019):
        for ci, name in enumerate(CATEGORIES):
            hand = sum(ci in years[year] for years in LABEL_POLICIES.values()) / 3
            assert got[(year, name)] == pytest.approx(hand)
    for r in rows:
        assert int(r["k_low"]) <= int(r["count"]) <= int(r["k_high"])
    first = read_csv(root / "c" / "reports" / "first_mention.csv")
    assert {"site": "a.example", "level": "category", "name": "Charlie", "value": "",
            "first_month": "2019-05"} in first

    assert run("label", *common, "--bundle", str(root / "m"), "--label-threshold", "1.0").exit_code == 0
    rows = read_csv(root / "c" / "reports" / "label_fractions.csv")
    assert rows and all(float(r["fraction"]) == 0.0 for r in rows)
