"""English/French detection for incoming questions.

Three deterministic evidence sources are summed per language: stopword hits
(weight 2), French diacritic characters (weight 1, French side only), and
character-trigram hits against two small built-in profiles (weight 0.5).
No model weights, no randomness. The winning side selects which half of the
passage bank retrieval searches; ties go to English.
"""

from __future__ import annotations

import re
from dataclasses import dataclass

from .corpus import Language

STOPWORD_WEIGHT = 2.0
DIACRITIC_WEIGHT = 1.0
TRIGRAM_WEIGHT = 0.5

EN_STOPWORDS = frozenset(
    """
    the a an and or but if then for to of in on at by with from as is are was
    were be been being am do does did done have has had i you he she it we
    they me him them my your his its our their this that these those what
    which who whom how why where when can could will would shall should may
    might must not no yes there here please about into over under again once
    any all some more most other another so than too very just also same only
    """.split()
)

FR_STOPWORDS = frozenset(
    """
    le la les un une des du de et est sont que qui quoi dont où quand comment
    pourquoi dans pour avec sur sous entre chez par pas ne nous vous je tu il
    elle on ils elles mon ma mes ton ta tes son sa ses notre nos votre vos
    leur leurs ce cet cette ces se y en au aux si mais ou donc car ni très
    bien aussi comme faire fait être avoir peux peut dois doit quel quelle
    quels quelles même après avant toujours jamais rien tout toute tous
    l d j qu n c
    """.split()
)

FR_DIACRITICS = frozenset("àâäéèêëîïôöùûüÿçœæ")

EN_TRIGRAMS = frozenset(
    [
        " th", "the", "he ", "ing", "ng ", "and", "nd ", " an", " of", "of ",
        " to", "to ", " in", "in ", " is", "is ", " it", "it ", " yo", "you",
        "wha", "hat", " wh", "how", "ow ", " ha", "hav", "ave", " do", "oes",
        "o i", " i ", "my ", " my", " ca", "can", " co", "ith", "wit", " wi",
        "th ", "ld ", "uld", "oul", " sh", "sho", "tha", "his", " be", "are",
        " ar", "ed ", "ork", " wo", "ly ", "ble", " no", "not",
    ]
)

FR_TRIGRAMS = frozenset(
    [
        " de", "de ", " le", "le ", "la ", " la", "les", " qu", "que", "ue ",
        "qui", " et", "et ", " un", "un ", "une", "ne ", " ne", " pa", "pas",
        " po", "pou", "ur ", " vo", "vou", "ous", " no", "nou", " je", "je ",
        " ce", "ce ", "tte", " da", "dan", "ans", "ns ", " su", "sur", "ez ",
        "iez", "ait", "ais", "ère", "eur", "aux", " au", "au ", " à ", "à l",
        "çai", "çon", " ça", "ça ", "ème", "éta", " ét", "és ", "ée ",
    ]
)

_CODE_FENCE = re.compile(r"```.*?```", re.DOTALL)
_WORD = re.compile(r"[^\W\d_]+", re.UNICODE)
_WHITESPACE = re.compile(r"\s+")


class EmptyTextError(ValueError):
    """Raised when there is no text to detect a language from."""


@dataclass(frozen=True)
class LanguageVerdict:
    language: Language
    confidence: float
    en_score: float
    fr_score: float


def detect_language(text: str) -> LanguageVerdict:
    """Score the text against both languages and return the winning side.

    Code between triple backticks is stripped before scoring: code is
    language-neutral and would dilute the evidence.
    """
    if not text or not text.strip():
        raise EmptyTextError("cannot detect the language of empty text")

    scrubbed = _CODE_FENCE.sub(" ", text).lower()
    words = _WORD.findall(scrubbed)

    en_score = STOPWORD_WEIGHT * sum(1 for w in words if w in EN_STOPWORDS)
    fr_score = STOPWORD_WEIGHT * sum(1 for w in words if w in FR_STOPWORDS)
    fr_score += DIACRITIC_WEIGHT * sum(1 for ch in scrubbed if ch in FR_DIACRITICS)

    squeezed = _WHITESPACE.sub(" ", scrubbed).strip()
    for i in range(len(squeezed) - 2):
        trigram = squeezed[i : i + 3]
        if trigram in EN_TRIGRAMS:
            en_score += TRIGRAM_WEIGHT
        if trigram in FR_TRIGRAMS:
            fr_score += TRIGRAM_WEIGHT

    total = en_score + fr_score
    language = Language.EN if en_score >= fr_score else Language.FR
    confidence = max(en_score, fr_score) / total if total > 0 else 0.5
    return LanguageVerdict(language=language, confidence=confidence, en_score=en_score, fr_score=fr_score)
