"""Question to cited answer: retrieve, assemble the prompt, generate, cite.

The orchestrator owns two policies that the generation backend cannot be
trusted with: the system directive carries the hints-not-solutions clause and
the citation clause, and the citation block appended to every answer is built
from the retrieval context, never from backend output. With the stub backend
the whole pipeline is a pure function of (corpus bytes, question text).
"""

from __future__ import annotations

import os
import re
import time
from dataclasses import dataclass
from typing import Mapping, Protocol, Sequence

import httpx

from .corpus import Language
from .index import DEFAULT_K, Index, RetrievalHit
from .language import detect_language

HINT_CLAUSE = "Offer hints and guidance instead of complete solutions to graded assignments."
CITATION_CLAUSE = "Finish with a Sources section citing the supplied passages."

BACKEND_URL_ENV = "TUTORFORUM_GEN_ENDPOINT"
BACKEND_TOKEN_ENV = "TUTORFORUM_GEN_TOKEN"

_LANGUAGE_NAMES = {Language.EN: "English", Language.FR: "French"}
_SENTENCE_BREAK = re.compile(r"(?<=[.!?])\s")


class EmptyContextError(ValueError):
    """A prompt was requested with no retrieval hits to ground it."""


class NoContextError(RuntimeError):
    """The pipeline found no retrievable passages for the detected language."""

    def __init__(self, language: Language, message: str):
        super().__init__(message)
        self.language = language


class GenerationBackendError(RuntimeError):
    """The generation backend failed; the message carries its diagnostics."""


@dataclass(frozen=True)
class PromptBundle:
    system_directive: str
    question_text: str
    context_passages: tuple[tuple[str, str], ...]  # (passage_id, text), rank order
    attachment_refs: tuple[str, ...]
    language: Language


@dataclass(frozen=True)
class GeneratedAnswer:
    body: str
    citations: tuple[str, ...]
    generation_backend: str
    latency_ms: int


def build_directive(language: Language) -> str:
    """The fixed system policy: answer language, grounding, hints, citations."""
    return "\n".join(
        [
            f"You are the course teaching assistant. Answer in {_LANGUAGE_NAMES[language]}.",
            "Ground every statement in the supplied course passages; if they do not cover "
            "the question, say so and point the learner to a facilitator.",
            HINT_CLAUSE,
            CITATION_CLAUSE,
        ]
    )


def assemble_prompt(
    question_text: str,
    language: Language,
    hits: Sequence[RetrievalHit],
    passages_by_id: Mapping[str, object],
    attachments: Sequence[str] = (),
) -> PromptBundle:
    """Place retrieved passages in rank order under the fixed directive."""
    if not hits:
        raise EmptyContextError("no retrieval hits to build a prompt from")
    context = tuple((hit.passage_id, passages_by_id[hit.passage_id].text) for hit in hits)
    return PromptBundle(
        system_directive=build_directive(language),
        question_text=question_text,
        context_passages=context,
        attachment_refs=tuple(attachments),
        language=language,
    )


def render_prompt(bundle: PromptBundle) -> str:
    """Deterministic textual form of the bundle, as sent to a backend."""
    lines = [
        "[system]",
        bundle.system_directive,
        "",
        f"[question] ({_LANGUAGE_NAMES[bundle.language]})",
        bundle.question_text,
        "",
    ]
    for position, (passage_id, text) in enumerate(bundle.context_passages, start=1):
        lines.append(f"[context {position}] {passage_id}")
        lines.append(text)
        lines.append("")
    if bundle.attachment_refs:
        lines.append("[attachments] " + ", ".join(bundle.attachment_refs))
        lines.append("")
    return "\n".join(lines)


class GenerationBackend(Protocol):
    name: str

    def complete(self, system_directive: str, user_text: str, context_texts: Sequence[str]) -> str: ...


def first_sentence(text: str) -> str:
    normalized = " ".join(text.split())
    return _SENTENCE_BREAK.split(normalized, maxsplit=1)[0]


@dataclass
class StubBackend:
    """Deterministic offline backend: one hint per context passage, rank order."""

    name: str = "stub"

    def complete(self, system_directive: str, user_text: str, context_texts: Sequence[str]) -> str:
        return "\n".join("Hint: " + first_sentence(text) for text in context_texts)


@dataclass
class ExternalBackend:
    """Adapter for a remote generation endpoint.

    Request: {system_directive, user_text, context_texts[]}. Response: {body}.
    Endpoint and credential come from the environment (or explicit fields).
    """

    endpoint: str
    token: str | None = None
    timeout_s: float = 30.0
    name: str = "external"
    client: httpx.Client | None = None

    @classmethod
    def from_env(cls, timeout_s: float = 30.0) -> "ExternalBackend":
        endpoint = os.environ.get(BACKEND_URL_ENV)
        if not endpoint:
            raise GenerationBackendError(f"{BACKEND_URL_ENV} is not set; cannot use the external backend")
        return cls(endpoint=endpoint, token=os.environ.get(BACKEND_TOKEN_ENV), timeout_s=timeout_s)

    def complete(self, system_directive: str, user_text: str, context_texts: Sequence[str]) -> str:
        payload = {
            "system_directive": system_directive,
            "user_text": user_text,
            "context_texts": list(context_texts),
        }
        headers = {"Authorization": f"Bearer {self.token}"} if self.token else {}
        poster = self.client.post if self.client is not None else httpx.post
        try:
            response = poster(self.endpoint, json=payload, headers=headers, timeout=self.timeout_s)
        except httpx.HTTPError as exc:
            raise GenerationBackendError(f"generation backend request failed: {exc}") from exc
        if response.status_code != 200:
            raise GenerationBackendError(
                f"generation backend returned {response.status_code}: {response.text[:200]}"
            )
        body = response.json().get("body")
        if not body or not str(body).strip():
            raise GenerationBackendError("generation backend response is missing a non-empty 'body'")
        return str(body)


def _citation_block(bundle: PromptBundle, titles_by_passage: Mapping[str, str | None] | None) -> str:
    lines = ["Sources:"]
    for position, (passage_id, _) in enumerate(bundle.context_passages, start=1):
        title = titles_by_passage.get(passage_id) if titles_by_passage else None
        suffix = f" ({title})" if title else ""
        lines.append(f"[{position}] {passage_id}{suffix}")
    return "\n".join(lines)


def generate(
    bundle: PromptBundle,
    backend: GenerationBackend,
    titles_by_passage: Mapping[str, str | None] | None = None,
) -> GeneratedAnswer:
    """Run the backend and append the citation block for the supplied context.

    Citations mirror the block exactly: every context passage, rank order.
    Post-processing never drops them, whatever the backend produced.
    """
    start = time.perf_counter()
    try:
        core = backend.complete(
            bundle.system_directive,
            bundle.question_text,
            [text for _, text in bundle.context_passages],
        )
    except GenerationBackendError:
        raise
    except Exception as exc:
        raise GenerationBackendError(f"generation backend {backend.name!r} failed: {exc}") from exc
    if not core or not core.strip():
        raise GenerationBackendError(f"generation backend {backend.name!r} produced an empty body")
    body = core.rstrip() + "\n\n" + _citation_block(bundle, titles_by_passage)
    latency_ms = max(0, int(round((time.perf_counter() - start) * 1000)))
    return GeneratedAnswer(
        body=body,
        citations=tuple(passage_id for passage_id, _ in bundle.context_passages),
        generation_backend=backend.name,
        latency_ms=latency_ms,
    )


def answer_question(
    index: Index,
    question_text: str,
    tags: Sequence[str] | None = None,
    attachments: Sequence[str] = (),
    backend: GenerationBackend | None = None,
    k: int = DEFAULT_K,
) -> GeneratedAnswer:
    """Full pipeline: detect language, retrieve top-k, assemble, generate, cite."""
    backend = backend or StubBackend()
    verdict = detect_language(question_text)
    hits = index.retrieve(question_text, verdict.language, tags=tags, k=k)
    if not hits:
        raise NoContextError(verdict.language, f"no passages retrievable for language {verdict.language.value!r}")
    bundle = assemble_prompt(question_text, verdict.language, hits, index.passages_by_id, attachments)
    titles = {passage_id: index.title_for(passage_id) for passage_id, _ in bundle.context_passages}
    return generate(bundle, backend, titles)
