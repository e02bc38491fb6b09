import math
import re

import pytest
from hypothesis import given
from hypothesis import strategies as st
from nltk.stem.porter import PorterStemmer

from passages import ANNOTATED, PASSAGES
from policylens.text import (
    CountingConfig,
    TextCounts,
    annual_reading_hours,
    count,
    count_difficult_words,
    obfuscation,
    passive_fraction,
    porter_stem,
    readability,
    spearman_rank_corr,
    time_to_read,
)
from policylens.text import tokenize
from policylens.text.counting import vowel_group_syllables
from policylens.text.harness import PRESETS, deviations
from policylens.text.passive import is_passive
from policylens.text.readability import UndefinedInputError, flesch_reading_ease
from policylens.text.wordlists import WordListError, default_obfuscating_words, load_word_list

REFERENCE = PorterStemmer(mode=PorterStemmer.ORIGINAL_ALGORITHM)

# -- counting ---------------------------------------------------------------------


def test_count_two_short_sentences():
    c = count("The cat sat. The dog ran.")
    assert (c.words, c.sentences, c.syllables) == (6, 2, 6)


def test_count_single_word():
    c = count("privacy")
    assert (c.words, c.sentences, c.syllables, c.characters) == (1, 1, 3, 7)


@pytest.mark.parametrize("text", ["", "   \n "])
def test_count_rejects_empty(text):
    with pytest.raises(ValueError):
        count(text)


@pytest.mark.parametrize(
    "word,n",
    [("the", 1), ("table", 2), ("tables", 2), ("whale", 1), ("stored", 1), ("wanted", 2),
     ("boxes", 2), ("pages", 2), ("leaves", 1), ("privacy", 3), ("information", 4), ("rhythm", 1),
     ("bed", 1), ("played", 1), ("handled", 2), ("2019", 1)],
)
def test_vowel_group_syllables(word, n):
    assert vowel_group_syllables(word) == n


def test_counting_strategies_differ_where_expected():
    text = "Read this: rules & terms apply. Short one. Then a much longer closing sentence here."
    canon = count(text)
    ws = count(text, CountingConfig(word_strategy="whitespace_split"))
    assert ws.words == canon.words + 1  # the bare "&" is a whitespace token only
    regex = count(text, CountingConfig(sentence_strategy="regex"))
    assert regex.sentences == canon.sentences - 1  # "Short one." is filtered
    full = count(text, CountingConfig(character_strategy="full_text_no_punct_no_space"))
    assert full.characters == canon.characters


def test_counting_config_rejects_unknown_strategy():
    with pytest.raises(ValueError):
        CountingConfig(word_strategy="spacy")


def test_hyphenation_dictionary_overrides_vowel_groups():
    cfg = CountingConfig(syllable_strategy="hyphenation_dict", hyphenation={"created": 3})
    assert count("created", cfg).syllables == 3
    assert count("created").syllables == 2


@given(st.text(alphabet=st.sampled_from("abcdeioy .!?\nXYZ,'-"), min_size=1, max_size=200))
def test_counts_deterministic_and_bounded(text):
    if not text.strip():
        return
    for cfg in PRESETS.values():
        a, b = count(text, cfg), count(text, cfg)
        assert a == b
        assert min(vars(a).values()) >= 0
        assert a.polysyllables <= a.words and a.complex_words <= a.words and a.difficult_words <= a.words


@pytest.mark.parametrize("name", sorted(ANNOTATED))
def test_canonical_counts_near_hand_counts(name):
    dev = deviations([_passage(name)], CountingConfig())
    assert abs(dev["words"][0]) <= 2
    assert abs(dev["sentences"][0]) <= 10
    assert abs(dev["syllables"][0]) <= 5
    assert abs(dev["characters"][0]) <= 2


def _passage(name):
    from policylens.text.harness import Passage

    m = PASSAGES[name]
    return Passage(name, m.text, m.counts)


def test_sentence_splitter_keeps_abbreviations_and_lines():
    text = "We use tools, e.g. analytics, to learn. Contact J. Smith at Example Inc. today.\nHeading\nNext line."
    assert tokenize.sentences(text) == [
        "We use tools, e.g. analytics, to learn.",
        "Contact J. Smith at Example Inc. today.",
        "Heading",
        "Next line.",
    ]


# -- readability ------------------------------------------------------------------


def _counts(w, s, syl, ch, poly=0, diff=0, cplx=0):
    return TextCounts(w, s, syl, ch, poly, diff, cplx)


def test_formulas_on_round_numbers():
    r = readability(_counts(100, 5, 150, 450, 30, 15, 10), include_dc=True)
    assert r.fre == pytest.approx(59.635, abs=1e-9)
    assert r.fkg == pytest.approx(9.91, abs=1e-9)
    assert r.ari == pytest.approx(9.765, abs=1e-9)
    assert r.cl == pytest.approx(9.18, abs=1e-9)
    assert r.dc == pytest.approx(3.3605, abs=1e-9)
    assert r.gf == pytest.approx(12.0, abs=1e-9)
    assert r.smog is None and not r.smog_valid


def test_smog_at_thirty_sentences():
    r = readability(_counts(300, 30, 450, 1350, 30))
    assert r.smog_valid
    assert r.smog == pytest.approx(1.0430 * math.sqrt(30) + 3.1291, abs=1e-12)
    assert r.smog == pytest.approx(8.8419, abs=1e-4)


def test_smog_forced_below_thirty_sentences():
    r = readability(_counts(100, 5, 150, 450, 30), force_smog=True)
    assert not r.smog_valid and r.smog == pytest.approx(1.0430 * math.sqrt(180) + 3.1291)


def test_single_word_fre():
    assert readability(_counts(1, 1, 1, 1)).fre == pytest.approx(121.22, abs=1e-9)


def test_readability_rejects_zero_counts():
    with pytest.raises(UndefinedInputError):
        readability(_counts(0, 1, 0, 0))


@given(st.floats(1, 60), st.floats(1, 3), st.floats(0.01, 1))
def test_fre_decreasing_in_both_ratios(wps, spw, step):
    base = flesch_reading_ease(wps * 10, 10, spw * wps * 10)
    more_syl = flesch_reading_ease(wps * 10, 10, (spw + step) * wps * 10)
    longer = flesch_reading_ease((wps + step) * 10, 10, spw * (wps + step) * 10)
    assert more_syl < base and longer < base


@pytest.mark.parametrize("words,minutes", [(250, 1.0), (0, 0.0), (4191, 16.764)])
def test_time_to_read(words, minutes):
    assert time_to_read(words) == pytest.approx(minutes, abs=1e-12)


def test_annual_reading_hours():
    assert annual_reading_hours(0) == 0
    assert annual_reading_hours(250) == pytest.approx(1462 / 60)
    assert 150 < annual_reading_hours(3200) < 350


# -- difficult words --------------------------------------------------------------

FAMILIAR = frozenset("we share your data with trusted and cat the".split())


def test_difficult_words_rules():
    assert count_difficult_words("We share your data.", FAMILIAR) == 0
    assert count_difficult_words("cats", FAMILIAR) == 0
    text = "We share your data with trusted advertisers, processors and affiliates."
    assert len(tokenize.words(text)) == 10
    assert count_difficult_words(text, FAMILIAR) == 3


def test_difficult_word_exemptions_and_names():
    assert count_difficult_words("The cat's data, shared and sharing.", FAMILIAR) == 0
    assert count_difficult_words("We share 2019 data with 123456 cats.", FAMILIAR) == 1
    # a proper name counts once per window
    assert count_difficult_words("We share data with Acme and Acme and Acme.", FAMILIAR) == 1


def test_familiar_words_feed_counts(tmp_path):
    path = tmp_path / "familiar.txt"
    path.write_text("# familiar\nwe\nshare\nyour\ndata\n", encoding="utf-8")
    from policylens.text import load_familiar_words

    cfg = CountingConfig(familiar_words=load_familiar_words(path))
    assert count("We share your data with partners.", cfg).difficult_words == 2
    with pytest.raises(WordListError):
        load_word_list(tmp_path / "missing.txt")


# -- obfuscation, stemming, passive voice ----------------------------------------------


def test_obfuscation_all_sentences_match():
    s = obfuscation("We mainly collect significant data.", ["mainly", "significant"])
    assert s.obfuscating_word_count == 2 and s.sentences_with_obfuscating_fraction == 1.0


def test_obfuscation_no_match():
    s = obfuscation("We collect data. We share data.", ["mainly"])
    assert s.obfuscating_word_count == 0 and s.sentences_with_obfuscating_fraction == 0.0


def test_obfuscation_stem_matching():
    # the reference stemmer reduces these two words to different stems, so
    # the adverb does not match the adjective entry
    assert REFERENCE.stem("predominantly") != REFERENCE.stem("predominant")
    assert obfuscation("Data is predominantly local.", ["predominant"]).obfuscating_word_count == 0
    assert obfuscation("Data is predominantly local.", ["predominantly"]).obfuscating_word_count == 1
    # inflected forms share a stem with the list entry
    assert obfuscation("We generally share it.", ["general", "generally"]).obfuscating_word_count == 1
    assert obfuscation("Cookies may be shared.", ["cookie"]).obfuscating_word_count == 1


def test_obfuscation_phrase_and_fraction():
    s = obfuscation("We may share data from time to time. We do not sell it.", ["from time to time", "may"])
    assert s.obfuscating_word_count == 2
    assert s.sentences_with_obfuscating_fraction == 0.5


def test_default_obfuscating_list_loads():
    words = default_obfuscating_words()
    assert "mainly" in words and len(words) > 20


@pytest.mark.parametrize("word,stem", [("caresses", "caress"), ("ponies", "poni"), ("collecting", "collect")])
def test_porter_vectors(word, stem):
    assert porter_stem(word) == stem


def _vocabulary() -> list[str]:
    words = set()
    for m in PASSAGES.values():
        words |= set(re.findall(r"[a-z]+", m.text.lower()))
    words |= set(default_obfuscating_words())
    words |= set(
        "caresses ponies ties caress cats feed agreed plastered bled motoring sing conflated troubled sized "
        "hopping tanned falling hissing fizzed failing filing happy sky relational conditional rational "
        "valenci hesitanci digitizer conformabli radicalli differentli vileli analogousli vietnamization "
        "predication operator feudalism decisiveness hopefulness callousness formaliti sensitiviti "
        "sensibiliti triplicate formative formalize electriciti electrical hopeful goodness revival "
        "allowance inference airliner gyroscopic adjustable defensible irritant replacement adjustment "
        "dependent adoption homologou communism activate angulariti homologous effective bowdlerize "
        "probate rate cease controll roll generalization oscillators".split()
    )
    return sorted(w for w in words if " " not in w)


def test_porter_matches_reference_on_vocabulary():
    vocab = _vocabulary()
    assert len(vocab) > 300
    assert [porter_stem(w) for w in vocab] == [REFERENCE.stem(w) for w in vocab]


def test_porter_idempotent_where_reference_is():
    """Stemming a stem changes it only where the reference algorithm does too
    (e.g. use -> us -> u)."""
    for w in _vocabulary():
        once = porter_stem(w)
        if REFERENCE.stem(REFERENCE.stem(w)) == REFERENCE.stem(w):
            assert porter_stem(once) == once, w
        else:
            assert porter_stem(once) == REFERENCE.stem(once) != once, w


@given(st.text(alphabet="abcdefghijklmnopqrstuvwxyz", min_size=1, max_size=14))
def test_porter_matches_reference_on_random_words(word):
    assert porter_stem(word) == REFERENCE.stem(word)


@pytest.mark.parametrize(
    "text,fraction",
    [
        ("The data was collected by us.", 1.0),
        ("We collect data.", 0.0),
        ("Your data is being processed.", 1.0),
        ("Data is not always shared. We keep it.", 0.5),
        ("Your account is written down. It was sent.", 1.0),
        ("The need is great.", 0.0),
    ],
)
def test_passive_fraction(text, fraction):
    assert passive_fraction(text).passive_sentence_fraction == fraction


def test_passive_window_limit():
    assert is_passive("It is very, very, very rarely shared.") is False
    assert is_passive("It is rarely shared.") is True


@given(st.text(max_size=300))
def test_fractions_in_unit_interval(text):
    p = passive_fraction(text).passive_sentence_fraction
    assert 0.0 <= p <= 1.0
    if text.strip():
        o = obfuscation(text, ["mainly", "generally", "may"]).sentences_with_obfuscating_fraction
        assert 0.0 <= o <= 1.0


# -- rank correlation -------------------------------------------------------------------


def test_spearman_examples():
    assert spearman_rank_corr([1, 2, 3, 4], [1, 2, 3, 4]) == pytest.approx(1.0)
    assert spearman_rank_corr([1, 2, 3, 4], [4, 3, 2, 1]) == pytest.approx(-1.0)
    assert spearman_rank_corr([1, 2, 3, 4], [1, 3, 2, 4]) == pytest.approx(0.8)


@given(st.lists(st.floats(-1e6, 1e6, allow_nan=False), min_size=2, max_size=30, unique=True))
def test_spearman_self_and_reversed(a):
    assert spearman_rank_corr(a, a) == pytest.approx(1.0)
    assert spearman_rank_corr(a, [-x for x in a]) == pytest.approx(-1.0)
