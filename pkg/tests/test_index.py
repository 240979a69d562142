import random
import re

import httpx
import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from tutorforum.corpus import Language, ingest_corpus
from tutorforum.index import (
    DimensionMismatch,
    EmbeddingError,
    EmptyIndexError,
    HashedFrequencyEmbedder,
    HttpEmbeddingProvider,
    IndexBuildError,
    build_index,
    cosine,
    load_index,
    save_index,
)

from .conftest import oracle_cosine, oracle_retrieve, random_docs, random_sentence


@pytest.fixture(scope="module")
def embedder():
    return HashedFrequencyEmbedder()


def test_embed_is_deterministic(embedder):
    a = embedder.embed("variables store data on the phone")
    b = embedder.embed("variables store data on the phone")
    assert a.dtype == np.float32
    assert np.array_equal(a, b)


def test_embed_unit_norm_or_zero(embedder):
    v = embedder.embed("loops repeat code")
    assert abs(float(np.linalg.norm(v)) - 1.0) <= 1e-6
    zero = embedder.embed("???")  # no alphanumeric tokens
    assert not zero.any()


def test_embed_rejects_empty(embedder):
    with pytest.raises(EmbeddingError):
        embedder.embed("   ")


def test_self_similarity_is_one(embedder):
    v = embedder.embed("draw a circle on the screen")
    assert cosine(v, v) == pytest.approx(1.0, abs=1e-6)


def test_token_overlap_orders_similarity(embedder):
    # Shared-token oracle: t1 and t2 share 2 of 3 tokens, t1 and t3 share 0.
    t1, t2, t3 = "variables store data", "variables hold data", "the mitochondria is powerful"
    tokens = lambda t: set(re.findall(r"[^\W_]+", t.lower()))
    assert len(tokens(t1) & tokens(t2)) == 2
    assert len(tokens(t1) & tokens(t3)) == 0
    e1, e2, e3 = embedder.embed(t1), embedder.embed(t2), embedder.embed(t3)
    assert cosine(e1, e2) > cosine(e1, e3)


def test_cosine_zero_vector_rule(embedder):
    v = embedder.embed("some text")
    assert cosine(v, np.zeros(256, dtype=np.float32)) == 0.0


def test_cosine_dimension_mismatch():
    with pytest.raises(DimensionMismatch):
        cosine(np.ones(4), np.ones(5))


def test_cosine_matches_summation_oracle():
    rng = np.random.default_rng(7)
    for _ in range(20):
        a = rng.normal(size=256)
        a = (a / np.linalg.norm(a)).astype(np.float32)
        b = rng.normal(size=256)
        b = (b / np.linalg.norm(b)).astype(np.float32)
        assert cosine(a, b) == pytest.approx(oracle_cosine(a, b), abs=1e-9)


def test_self_retrieval_scores_one(course_index, course_passages):
    target = course_passages[1]
    hits = course_index.retrieve(target.text, target.language, k=3)
    assert hits[0].passage_id == target.passage_id
    assert hits[0].score == pytest.approx(1.0, abs=1e-6)
    assert hits[0].rank == 1


def test_retrieve_matches_bruteforce_on_random_corpus():
    rng = random.Random(42)
    docs = random_docs(rng, 25, paragraphs_per_doc=(1, 3))
    index = build_index(ingest_corpus(docs))
    for language in (Language.EN, Language.FR):
        question = random_sentence(rng, language)
        hits = index.retrieve(question, language, k=5)
        expected = oracle_retrieve(index, question, language, None, 5)
        assert [(h.passage_id, h.rank) for h in hits] == [(pid, rank) for pid, _, rank in expected]
        for hit, (_, score, _) in zip(hits, expected):
            assert hit.score == pytest.approx(score, abs=1e-9)


def test_tag_filter_exhausts_candidates(course_index):
    hits = course_index.retrieve("how do functions work", Language.EN, tags=["section-3"], k=5)
    assert len(hits) == 4  # only four passages carry the tag
    assert all(course_index.passages_by_id[h.passage_id].doc_id == "en-lesson-3" for h in hits)


def test_unmatched_tags_fall_back_to_language_only(course_index):
    with_bogus = course_index.retrieve("declare a variable", Language.EN, tags=["no-such-tag"], k=5)
    without = course_index.retrieve("declare a variable", Language.EN, k=5)
    assert [h.passage_id for h in with_bogus] == [h.passage_id for h in without]


def test_hits_respect_language_filter(course_index):
    hits = course_index.retrieve("comment déclarer une variable", Language.FR, k=10)
    assert hits
    assert all(course_index.passages_by_id[h.passage_id].language is Language.FR for h in hits)


def test_scores_bounded_for_reference_embedder(course_index):
    hits = course_index.retrieve("the deadline for the assignment", Language.EN, k=30)
    assert all(0.0 <= h.score <= 1.0 for h in hits)


def test_rank_contiguous_and_ties_break_by_passage_id():
    from tutorforum.corpus import SourceDocument

    docs = [
        SourceDocument("a", Language.EN, "A", "same words here.\n\nother thing entirely.", ()),
        SourceDocument("b", Language.EN, "B", "same words here.", ()),
    ]
    index = build_index(ingest_corpus(docs))
    hits = index.retrieve("same words here", Language.EN, k=3)
    assert [h.rank for h in hits] == [1, 2, 3]
    assert [h.passage_id for h in hits][:2] == ["a#p0", "b#p0"]  # tie -> ascending id


def test_retrieve_argument_validation(course_index):
    with pytest.raises(ValueError):
        course_index.retrieve("q", Language.EN, k=0)
    with pytest.raises(ValueError):
        course_index.retrieve("q", "de", k=5)


def test_empty_index_rejected():
    with pytest.raises(IndexBuildError):
        build_index([])


def test_retrieve_on_emptied_index(course_index):
    from tutorforum.index import Index

    empty = Index([], {}, course_index.provider)
    with pytest.raises(EmptyIndexError):
        empty.retrieve("q", Language.EN)


def test_build_failure_names_passage(course_passages):
    class Exploding:
        name = "boom"
        dim = 8

        def embed(self, text):
            raise RuntimeError("backend down")

    with pytest.raises(IndexBuildError) as excinfo:
        build_index(course_passages[:3], Exploding())
    assert course_passages[0].passage_id in str(excinfo.value)


def test_save_load_round_trip_is_bit_exact(tmp_path, course_index):
    save_index(course_index, tmp_path)
    reloaded = load_index(tmp_path)
    assert len(reloaded) == len(course_index)
    for original, loaded in zip(course_index.entries, reloaded.entries):
        assert original.passage_id == loaded.passage_id
        assert original.language is loaded.language
        assert original.tags == loaded.tags
        assert np.array_equal(original.embedding, loaded.embedding)
    question = "how do I declare a variable"
    before = course_index.retrieve(question, Language.EN, k=5)
    after = reloaded.retrieve(question, Language.EN, k=5)
    assert before == after
    assert reloaded.title_for("en-lesson-1#p0") == "Lesson 1: Variables and Data"


def test_load_missing_index_dir(tmp_path):
    from tutorforum.index import IndexStorageError

    with pytest.raises(IndexStorageError):
        load_index(tmp_path / "nope")


@settings(max_examples=25, deadline=None)
@given(st.integers(min_value=0, max_value=2**31 - 1), st.integers(min_value=1, max_value=8))
def test_top_k_is_prefix_of_top_k_plus_one(seed, k):
    rng = random.Random(seed)
    docs = random_docs(rng, rng.randint(2, 10))
    index = build_index(ingest_corpus(docs))
    language = rng.choice([Language.EN, Language.FR])
    question = random_sentence(rng, language)
    smaller = index.retrieve(question, language, k=k)
    larger = index.retrieve(question, language, k=k + 1)
    assert [h.passage_id for h in smaller] == [h.passage_id for h in larger][: len(smaller)]


@settings(max_examples=25, deadline=None)
@given(st.integers(min_value=0, max_value=2**31 - 1))
def test_filter_soundness(seed):
    rng = random.Random(seed)
    docs = random_docs(rng, rng.randint(2, 12))
    index = build_index(ingest_corpus(docs))
    language = rng.choice([Language.EN, Language.FR])
    tags = rng.sample(["lesson-1", "lesson-2", "admin", "game"], rng.randint(1, 2))
    question = random_sentence(rng, language)
    hits = index.retrieve(question, language, tags=tags, k=5)
    tag_matchable = any(
        set(tags) & set(e.tags) for e in index.entries if e.language == language
    )
    for hit in hits:
        passage = index.passages_by_id[hit.passage_id]
        assert passage.language is language
        if tag_matchable:
            assert set(tags) & set(passage.tags)


def test_http_provider_normalizes_and_errors():
    dim = 8

    def handler(request: httpx.Request) -> httpx.Response:
        return httpx.Response(200, json={"values": [2.0] * dim})

    client = httpx.Client(transport=httpx.MockTransport(handler))
    provider = HttpEmbeddingProvider(endpoint="http://embed.test/v1", dim=dim, client=client)
    v = provider.embed("hello")
    assert v.dtype == np.float32
    assert abs(float(np.linalg.norm(v)) - 1.0) <= 1e-6

    def failing(request: httpx.Request) -> httpx.Response:
        return httpx.Response(500, text="boom")

    bad = HttpEmbeddingProvider(
        endpoint="http://embed.test/v1", dim=dim, client=httpx.Client(transport=httpx.MockTransport(failing))
    )
    with pytest.raises(EmbeddingError, match="500"):
        bad.embed("hello")


def test_http_provider_requires_endpoint(monkeypatch):
    monkeypatch.delenv("TUTORFORUM_EMBED_ENDPOINT", raising=False)
    with pytest.raises(EmbeddingError):
        HttpEmbeddingProvider.from_env()


def test_http_provider_shape_check():
    def handler(request: httpx.Request) -> httpx.Response:
        return httpx.Response(200, json={"values": [1.0, 2.0]})

    provider = HttpEmbeddingProvider(
        endpoint="http://embed.test/v1", dim=8, client=httpx.Client(transport=httpx.MockTransport(handler))
    )
    with pytest.raises(EmbeddingError, match="shape"):
        provider.embed("hello")
