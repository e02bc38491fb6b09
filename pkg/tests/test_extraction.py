import random
from datetime import datetime

import pytest
from hypothesis import given
from hypothesis import strategies as st

from policylens.extraction import (
    CorpusStore,
    content_hash,
    extract_main_text,
    find_full_policy_links,
    find_policy_links,
    gate,
    normalize_text,
)
from policylens.extraction import content as content_mod
from policylens.extraction.gate import MIN_WORDS, detect_language
from policylens.text.tokenize import words

# -- links ------------------------------------------------------------------------


def page(*anchors: tuple[str, str]) -> str:
    links = " ".join(f'<a href="{h}">{t}</a>' for h, t in anchors)
    return f"<html><body><p>Shop</p><footer>{links}</footer></body></html>"


def test_footer_privacy_link():
    got = find_policy_links(page(("/", "Home"), ("/privacy", "Privacy Policy")))
    assert [(l.href, l.matched_term) for l in got] == [("/privacy", "privacy polic")]


def test_legal_link_lowest_priority():
    got = find_policy_links(page(("/", "Home"), ("/legal-info", "Legal")))
    assert len(got) == 1 and got[0].matched_term == "legal"


def test_vague_anchor_not_found():
    assert find_policy_links(page(("/site-policy", "here"))) == []


def test_priority_order_and_footer_first():
    html = page(("/legal", "Legal"), ("/p1", "Privacy"), ("/p2", "Privacy Policy"), ("/p3", "Privacy Policy"))
    got = find_policy_links(html)
    assert [l.href for l in got] == ["/p3", "/p2", "/p1", "/legal"]


def test_unparseable_input():
    assert find_policy_links("") == []
    assert find_policy_links("<<<>>>") == []


def test_pdf_flag():
    got = find_policy_links(page(("/docs/Privacy.PDF?v=2", "Privacy Policy")))
    assert got[0].is_pdf


def test_full_policy_links():
    summary = '<p><a href="/privacy/full">Read the full privacy policy</a></p>'
    assert [l.href for l in find_full_policy_links(summary)] == ["/privacy/full"]
    assert len(find_full_policy_links('<a href="/n">Privacy Notice</a>')) == 1
    assert find_full_policy_links('<a href="/x">Shop now</a>') == []


# -- main text --------------------------------------------------------------------

ARTICLE_WORDS = [f"tok{i:03d}" for i in range(500)]
NAV = ["Homepage", "Storefront", "Newsroom", "Careers"]


def article_page() -> str:
    paras = []
    for i in range(0, 500, 25):
        paras.append("<p>" + " ".join(ARTICLE_WORDS[i:i + 25]) + ".</p>")
    nav = "".join(f'<a href="/{w.lower()}">{w}</a> ' for w in NAV)
    return (
        f"<html><head><title>T</title><script>var x = 1;</script></head><body>"
        f'<nav class="menu">{nav}</nav><header class="masthead">{nav}</header>'
        f'<div class="content"><article>{"".join(paras)}</article></div>'
        f'<footer class="footer">Copyright {NAV[0]} <a href="/terms">Terms</a></footer>'
        f"</body></html>"
    )


def test_article_extraction():
    text = extract_main_text(article_page())
    toks = set(text.replace(".", " ").split())
    assert set(ARTICLE_WORDS) <= toks
    assert not toks & set(NAV)


def test_script_only_page():
    assert extract_main_text("<html><head><script>var a = 'privacy';</script></head></html>") == ""
    assert extract_main_text("") == ""


def test_keeps_extractor_with_more_words(monkeypatch):
    three, four = " ".join(["w"] * 300), " ".join(["w"] * 450)
    monkeypatch.setattr(content_mod, "extract_dense", lambda html: three)
    monkeypatch.setattr(content_mod, "extract_pruned", lambda html: four)
    assert content_mod.extract_main_text("<p>x</p>") == four
    monkeypatch.setattr(content_mod, "extract_dense", lambda html: four)
    monkeypatch.setattr(content_mod, "extract_pruned", lambda html: three)
    assert content_mod.extract_main_text("<p>x</p>") == four


@given(st.text(max_size=300))
def test_extraction_never_raises(html):
    assert isinstance(extract_main_text(html), str)


# -- gate ---------------------------------------------------------------------------

THRESHOLDS = (0.9, 0.6, 0.1)


def scorers(probs):
    return [(lambda text, p=p: p, t) for p, t in zip(probs, THRESHOLDS)]


def n_words(n: int) -> str:
    return " ".join(["data"] * n)


def test_gate_short_text(english):
    v = gate(n_words(50), language_detector=english)
    assert not v.passed and v.word_count == 50


def test_gate_threshold_examples(english):
    assert gate(n_words(500), scorers([0.95, 0.7, 0.2]), language_detector=english).passed
    assert not gate(n_words(500), scorers([0.1, 0.1, 0.05]), language_detector=english).passed


def test_gate_one_classifier_suffices(english):
    assert gate(n_words(500), scorers([0.0, 0.0, 0.1]), language_detector=english).passed


def test_gate_word_boundary(english):
    assert MIN_WORDS == 100
    assert not gate(n_words(99), language_detector=english).passed
    assert gate(n_words(100), language_detector=english).passed


def test_gate_detector_failure():
    def broken(text):
        raise RuntimeError("no profile")

    v = gate(n_words(200), language_detector=broken)
    assert not v.passed and v.language == "und"


def test_gate_rejects_bad_threshold(english):
    with pytest.raises(ValueError):
        gate("x", [(lambda t: 0.5, 1.5)], language_detector=english)


def test_real_language_detector():
    en = ("We collect information about you when you use our services, and we use it "
          "to provide, improve and protect those services.")
    de = "Wir erheben Daten über Sie, wenn Sie unsere Dienste nutzen, und verwenden sie zur Verbesserung."
    assert detect_language(en)[0] == "en"
    assert detect_language(de)[0] == "de"
    assert detect_language("") == ("und", 0.0)
    assert not gate(de * 20).passed


# -- dedupe -----------------------------------------------------------------------------

T1, T2 = datetime(2018, 1, 5), datetime(2019, 6, 1)


def test_dedupe_keeps_first_seen(tmp_path):
    store = CorpusStore(tmp_path)
    store.dedupe("Policy text.", T1, "a")
    rec = store.dedupe("Policy text.", T2, "a")
    assert len(store) == 1 and rec.first_seen == T1


def test_dedupe_min_rule(tmp_path):
    store = CorpusStore(tmp_path)
    store.dedupe("Policy text.", T2, "b")
    rec = store.dedupe("Policy text.", T1, "a")
    assert rec.first_seen == T1 and rec.site == "a"


def test_dedupe_one_character(tmp_path):
    store = CorpusStore(tmp_path)
    store.dedupe("Policy text.", T1, "a")
    store.dedupe("Policy text!", T1, "a")
    assert len(store) == 2


def test_store_reloads(tmp_path):
    CorpusStore(tmp_path).dedupe("Policy text.", T1, "a")
    again = CorpusStore(tmp_path)
    assert [u.text for u in again.uniques()] == ["Policy text."]


def test_hash_ignores_whitespace_layout():
    assert content_hash("a\r\nb") == content_hash("a  b ")
    assert normalize_text(" a\r\n\tb ") == "a b"
    assert content_hash("a b") != content_hash("a c")


@given(st.lists(st.tuples(st.sampled_from(["x", "y", "z"]), st.integers(0, 10_000)), min_size=1, max_size=20))
def test_dedupe_order_independent(tmp_path_factory, inserts):
    def run(order):
        store = CorpusStore(tmp_path_factory.mktemp("s"))
        for text, day in order:
            store.dedupe(text, datetime.fromordinal(730000 + day), "s", flush=False)
        return {u.content_hash: u.first_seen for u in store.uniques()}

    shuffled = inserts[:]
    random.Random(0).shuffle(shuffled)
    assert run(inserts) == run(shuffled)
    for h, first in run(inserts).items():
        assert first == min(datetime.fromordinal(730000 + d) for t, d in inserts if content_hash(t) == h)


def test_word_counter_matches_gate(english):
    text = "We don't sell data. We share it with partners."
    assert gate(text, language_detector=english).word_count == len(words(text))
