import random

import httpx
import pytest

from tutorforum.corpus import Language, ingest_corpus
from tutorforum.index import build_index
from tutorforum.language import detect_language
from tutorforum.ragcore import (
    CITATION_CLAUSE,
    HINT_CLAUSE,
    EmptyContextError,
    ExternalBackend,
    GenerationBackendError,
    NoContextError,
    PromptBundle,
    StubBackend,
    answer_question,
    assemble_prompt,
    build_directive,
    first_sentence,
    generate,
    render_prompt,
)

from .conftest import TEST_FIXTURES, random_docs, random_sentence


def _bundle(course_index, question="How do I declare a variable in my sketch?", k=5, attachments=()):
    verdict = detect_language(question)
    hits = course_index.retrieve(question, verdict.language, k=k)
    return assemble_prompt(question, verdict.language, hits, course_index.passages_by_id, attachments), hits


def test_prompt_lists_passages_in_rank_order(course_index):
    bundle, hits = _bundle(course_index)
    assert len(bundle.context_passages) == 5
    assert [pid for pid, _ in bundle.context_passages] == [h.passage_id for h in hits]


def test_directive_contains_policy_clauses_verbatim():
    directive = build_directive(Language.EN)
    assert HINT_CLAUSE in directive
    assert CITATION_CLAUSE in directive


def test_directive_names_french_for_french_questions():
    assert "Answer in French." in build_directive(Language.FR)
    assert "Answer in English." in build_directive(Language.EN)


def test_empty_hits_rejected(course_index):
    with pytest.raises(EmptyContextError):
        assemble_prompt("q", Language.EN, [], course_index.passages_by_id)


def test_rendered_prompt_matches_golden_file(course_index):
    bundle, _ = _bundle(course_index, attachments=("img-001",))
    golden = (TEST_FIXTURES / "golden_prompt.txt").read_text(encoding="utf-8")
    assert render_prompt(bundle) == golden


def test_first_sentence():
    assert first_sentence("One. Two.") == "One."
    assert first_sentence("No terminator here") == "No terminator here"
    assert first_sentence("Multi\nline text. Rest.") == "Multi line text."


def test_stub_appends_citation_block_in_rank_order(course_index):
    bundle, _ = _bundle(course_index, k=2)
    answer = generate(bundle, StubBackend())
    ids = [pid for pid, _ in bundle.context_passages]
    tail = answer.body.rsplit("Sources:", 1)[1]
    assert tail.index(ids[0]) < tail.index(ids[1])
    assert answer.body.startswith("Hint: ")


def test_stub_is_deterministic(course_index):
    bundle, _ = _bundle(course_index)
    first = generate(bundle, StubBackend())
    second = generate(bundle, StubBackend())
    assert first.body == second.body
    assert first.citations == second.citations


def test_citations_equal_context_ids(course_index):
    bundle, _ = _bundle(course_index, k=5)
    answer = generate(bundle, StubBackend())
    assert len(answer.citations) == 5
    assert set(answer.citations) == {pid for pid, _ in bundle.context_passages}


def test_latency_recorded(course_index):
    bundle, _ = _bundle(course_index)
    answer = generate(bundle, StubBackend())
    assert answer.latency_ms >= 0
    assert answer.generation_backend == "stub"


def test_verbatim_question_cites_source_first(course_index, course_passages):
    target = next(p for p in course_passages if p.language is Language.EN)
    answer = answer_question(course_index, target.text)
    assert answer.citations[0] == target.passage_id


def test_french_question_cites_only_french_passages(course_index):
    answer = answer_question(course_index, "Comment fonctionne une boucle while ?")
    assert answer.citations
    for passage_id in answer.citations:
        assert course_index.passages_by_id[passage_id].language is Language.FR


def test_no_context_error_when_language_missing():
    rng = random.Random(3)
    docs = [d for d in random_docs(rng, 6) if d.language is Language.EN]
    index = build_index(ingest_corpus(docs))
    with pytest.raises(NoContextError) as excinfo:
        answer_question(index, "Comment déclarer une variable dans mon programme ?")
    assert excinfo.value.language is Language.FR


def test_citation_block_carries_doc_titles(course_index):
    answer = answer_question(course_index, "How do I declare a variable in my sketch?")
    assert "(Lesson 1: Variables and Data)" in answer.body


def test_answer_is_pure_function_of_corpus_and_question():
    rng = random.Random(11)
    docs = random_docs(rng, 8)
    question = random_sentence(random.Random(12), Language.EN)

    def run():
        index = build_index(ingest_corpus(docs))
        return answer_question(index, question)

    first, second = run(), run()
    assert first.body == second.body
    assert first.citations == second.citations


def test_external_backend_round_trip():
    def handler(request: httpx.Request) -> httpx.Response:
        import json

        payload = json.loads(request.content)
        assert set(payload) == {"system_directive", "user_text", "context_texts"}
        return httpx.Response(200, json={"body": "Try breaking the task into steps."})

    backend = ExternalBackend(
        endpoint="http://gen.test/v1",
        token="tok",
        client=httpx.Client(transport=httpx.MockTransport(handler)),
    )
    bundle = PromptBundle(
        system_directive=build_directive(Language.EN),
        question_text="q",
        context_passages=(("p1", "Some passage."),),
        attachment_refs=(),
        language=Language.EN,
    )
    answer = generate(bundle, backend)
    assert answer.body.startswith("Try breaking the task into steps.")
    assert answer.citations == ("p1",)
    assert answer.generation_backend == "external"


def test_external_backend_failure_carries_diagnostics():
    def handler(request: httpx.Request) -> httpx.Response:
        return httpx.Response(503, text="overloaded")

    backend = ExternalBackend(
        endpoint="http://gen.test/v1", client=httpx.Client(transport=httpx.MockTransport(handler))
    )
    with pytest.raises(GenerationBackendError, match="503"):
        backend.complete("sys", "q", ["ctx"])


def test_external_backend_rejects_missing_body():
    def handler(request: httpx.Request) -> httpx.Response:
        return httpx.Response(200, json={"noise": 1})

    backend = ExternalBackend(
        endpoint="http://gen.test/v1", client=httpx.Client(transport=httpx.MockTransport(handler))
    )
    with pytest.raises(GenerationBackendError, match="body"):
        backend.complete("sys", "q", ["ctx"])


def test_external_backend_requires_endpoint_env(monkeypatch):
    monkeypatch.delenv("TUTORFORUM_GEN_ENDPOINT", raising=False)
    with pytest.raises(GenerationBackendError):
        ExternalBackend.from_env()


def test_empty_backend_body_rejected(course_index):
    class Silent:
        name = "silent"

        def complete(self, system_directive, user_text, context_texts):
            return "   "

    bundle, _ = _bundle(course_index)
    with pytest.raises(GenerationBackendError, match="empty"):
        generate(bundle, Silent())
