import json

import pytest
from hypothesis import given, strategies as st

from tutorforum.corpus import Language
from tutorforum.language import (
    EN_STOPWORDS,
    EN_TRIGRAMS,
    FR_DIACRITICS,
    EmptyTextError,
    detect_language,
)

from .conftest import LANGUAGE_PAIRS

# Independent 50-word stopword-frequency oracle. Tables are deliberately
# small and separate from the production ones.
ORACLE_EN = set("the a an and is are do does how what why i you my your in on of to for with can".split())
ORACLE_FR = set("le la les un une de et est sont comment quoi pourquoi je vous mon votre dans pour avec que qui ne pas".split())
assert len(ORACLE_EN | ORACLE_FR) <= 50


def oracle_verdict(text: str) -> Language:
    words = [w.strip("?.!,;:'\"()") for w in text.lower().split()]
    en = sum(1 for w in words if w in ORACLE_EN)
    fr = sum(1 for w in words if w in ORACLE_FR)
    return Language.EN if en >= fr else Language.FR


@pytest.mark.parametrize(
    "text",
    [
        "How do I declare a variable in my sketch?",
        "Comment déclarer une variable dans mon programme ?",
    ],
)
def test_agrees_with_stopword_frequency_oracle(text):
    assert detect_language(text).language is oracle_verdict(text)


def test_tie_breaks_to_english():
    verdict = detect_language("x = 5")
    assert verdict.language is Language.EN
    assert verdict.confidence == 0.5
    assert verdict.en_score == verdict.fr_score == 0.0


def test_empty_text_rejected():
    with pytest.raises(EmptyTextError):
        detect_language("   ")


def test_code_fences_are_stripped():
    # Identical French code comments inside fences on both sides; only the
    # prose outside the fence may count.
    text = "How do I fix this error?\n```\n// le la les une des et est\n```"
    verdict = detect_language(text)
    assert verdict.language is Language.EN


def test_confidence_definition():
    verdict = detect_language("Comment déclarer une variable dans mon programme ?")
    assert verdict.language is Language.FR
    total = verdict.en_score + verdict.fr_score
    assert verdict.confidence == pytest.approx(max(verdict.en_score, verdict.fr_score) / total)


def load_pairs():
    with LANGUAGE_PAIRS.open(encoding="utf-8") as fh:
        return [json.loads(line) for line in fh if line.strip()]


def test_symmetry_on_first_100_pairs():
    pairs = load_pairs()[:100]
    flipped = sum(
        1
        for pair in pairs
        if detect_language(pair["en"]).language is Language.EN
        and detect_language(pair["fr"]).language is Language.FR
    )
    assert flipped >= 95


def test_fixture_has_200_pairs():
    assert len(load_pairs()) == 200


def test_en_evidence_tables_carry_no_french_diacritics():
    # Required for diacritic monotonicity: appended French characters can
    # never create English-side evidence.
    for word in EN_STOPWORDS:
        assert not set(word) & FR_DIACRITICS
    for trigram in EN_TRIGRAMS:
        assert not set(trigram) & FR_DIACRITICS


plain_text = st.text(
    alphabet=st.characters(whitelist_categories=("L", "N", "P"), whitelist_characters=" àâéèêëîïôûùüç"),
    min_size=1,
    max_size=120,
).filter(lambda s: s.strip())


@given(plain_text)
def test_detection_is_deterministic(text):
    first = detect_language(text)
    second = detect_language(text)
    assert first == second
    assert (first.language is Language.EN) == (first.en_score >= first.fr_score)


@given(plain_text, st.sampled_from("éèçà"), st.integers(min_value=1, max_value=4))
def test_appended_diacritics_never_move_the_verdict_toward_english(text, char, count):
    before = detect_language(text)
    after = detect_language(text + " " + char * count)
    # French evidence grows strictly faster than any incidental English
    # evidence a new word boundary can add, so the verdict can only hold or
    # move toward French.
    assert after.fr_score > before.fr_score
    assert (after.fr_score - before.fr_score) > (after.en_score - before.en_score)
    if before.language is Language.FR or before.en_score == before.fr_score:
        assert after.language is Language.FR


def test_tied_input_flips_french_on_appended_diacritic():
    tied = detect_language("x = 5")
    assert tied.en_score == tied.fr_score
    assert detect_language("x = 5é").language is Language.FR
