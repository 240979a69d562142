"""Shared fixtures and independent oracles for the test suite.

The oracles here (brute-force retrieval, python-sum cosine) deliberately do
not reuse the library's retrieval path: they re-derive the expected results
from first principles so the tests catch drift in either direction.
"""

from __future__ import annotations

import random
from pathlib import Path

import pytest

from tutorforum.corpus import (
    Language,
    SourceDocument,
    doc_titles,
    ingest_corpus,
    load_corpus_file,
)
from tutorforum.index import Index, build_index

REPO_ROOT = Path(__file__).resolve().parents[1]
FIXTURES = REPO_ROOT / "fixtures"
TEST_FIXTURES = Path(__file__).resolve().parent / "fixtures"

COURSE_CORPUS = FIXTURES / "course_corpus.jsonl"
LANGUAGE_PAIRS = FIXTURES / "language_pairs_200.jsonl"
EVAL_RECORDS = FIXTURES / "eval_records_536.csv"


@pytest.fixture(scope="session")
def course_docs():
    return load_corpus_file(COURSE_CORPUS)


@pytest.fixture(scope="session")
def course_passages(course_docs):
    return ingest_corpus(course_docs)


@pytest.fixture(scope="session")
def course_index(course_docs, course_passages) -> Index:
    return build_index(course_passages, doc_titles=doc_titles(course_docs))


# ---------------------------------------------------------------------------
# random corpus generation for randomized trials
# ---------------------------------------------------------------------------

EN_WORDS = (
    "the a an and you your my how what why where is are do does can could "
    "variable loop function array string value screen phone game score draw "
    "circle color code line error message lesson quiz assignment deadline "
    "print change declare run start stop block number type name text point"
).split()

FR_WORDS = (
    "le la les un une des et vous votre mon comment quoi pourquoi où est "
    "sont faire peut variable boucle fonction tableau chaîne valeur écran "
    "téléphone jeu score dessiner cercle couleur code ligne erreur message "
    "leçon quiz devoir limite afficher changer déclarer lancer bloc nombre"
).split()

TAG_POOL = ["lesson-1", "lesson-2", "lesson-3", "admin", "game", "setup"]

_WORD_BANKS = {Language.EN: EN_WORDS, Language.FR: FR_WORDS}


def random_sentence(rng: random.Random, language: Language, n_words: int | None = None) -> str:
    words = _WORD_BANKS[language]
    n = n_words or rng.randint(4, 14)
    return " ".join(rng.choice(words) for _ in range(n)) + "."


def random_docs(
    rng: random.Random,
    n_docs: int,
    paragraphs_per_doc: tuple[int, int] = (1, 4),
) -> list[SourceDocument]:
    """Bilingual random documents; both languages always represented."""
    docs = []
    for i in range(n_docs):
        language = Language.EN if (i % 2 == 0) else Language.FR
        n_paragraphs = rng.randint(*paragraphs_per_doc)
        body = "\n\n".join(
            " ".join(random_sentence(rng, language) for _ in range(rng.randint(1, 3)))
            for _ in range(n_paragraphs)
        )
        tags = tuple(rng.sample(TAG_POOL, rng.randint(0, 2)))
        docs.append(
            SourceDocument(
                doc_id=f"d{i}",
                language=language,
                title=f"Doc {i}",
                body=body,
                section_tags=tags,
            )
        )
    return docs


# ---------------------------------------------------------------------------
# independent retrieval oracle
# ---------------------------------------------------------------------------


def oracle_cosine(u, v) -> float:
    """Straightforward summation cosine for unit-or-zero vectors."""
    if not any(float(x) != 0.0 for x in u) or not any(float(x) != 0.0 for x in v):
        return 0.0
    total = 0.0
    for x, y in zip(u, v):
        total += float(x) * float(y)
    return max(-1.0, min(1.0, total))


def oracle_retrieve(index: Index, question_text: str, language: Language, tags, k: int):
    """Exhaustive scan re-deriving the retrieval contract from scratch."""
    query = index.provider.embed(question_text)
    pool = [e for e in index.entries if e.language == language]
    if tags:
        tagged = [e for e in pool if set(tags) & set(e.tags)]
        if tagged:
            pool = tagged
    scored = [(oracle_cosine(query, e.embedding), e.passage_id) for e in pool]
    scored.sort(key=lambda pair: (-pair[0], pair[1]))
    return [(pid, score, rank) for rank, (score, pid) in enumerate(scored[:k], start=1)]
