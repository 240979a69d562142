"""Course-material ingestion: source documents in, a bank of tagged passages out.

The passage bank is the unit of retrieval for the whole system. One passage
per blank-line-delimited paragraph, tags inherited from the parent document,
immutable once built.
"""

from __future__ import annotations

import json
import re
from collections import Counter
from dataclasses import dataclass
from enum import Enum
from pathlib import Path
from typing import Iterable, Mapping


class Language(str, Enum):
    """Course languages; every document and passage is exactly one of these."""

    EN = "en"
    FR = "fr"


class IngestError(ValueError):
    """A source document could not be turned into passages."""


class CorpusFileError(ValueError):
    """A corpus record file is malformed."""


MAX_PASSAGE_CHARS = 4000

CORPUS_FIELDS = ("doc_id", "language", "title", "body", "section_tags")

_BLANK_LINE = re.compile(r"\n[ \t]*\n+")
_SPACE_RUN = re.compile(r"[ \t]+")
_SENTENCE_END = re.compile(r"[.!?](?=\s|$)")


@dataclass(frozen=True)
class SourceDocument:
    doc_id: str
    language: Language
    title: str
    body: str
    section_tags: tuple[str, ...] = ()


@dataclass(frozen=True)
class Passage:
    passage_id: str
    doc_id: str
    language: Language
    text: str
    tags: tuple[str, ...]
    ordinal: int


def normalize_paragraph(block: str) -> str:
    """Collapse space/tab runs and trim line edges; case and punctuation stay."""
    collapsed = _SPACE_RUN.sub(" ", block)
    lines = [line.strip() for line in collapsed.split("\n")]
    return "\n".join(line for line in lines if line)


def split_paragraphs(body: str) -> list[str]:
    """Split a document body into normalized, non-empty paragraphs."""
    paragraphs = []
    for block in _BLANK_LINE.split(body):
        text = normalize_paragraph(block)
        if text:
            paragraphs.append(text)
    return paragraphs


def _split_oversized(text: str) -> list[str]:
    # Cut at the last sentence boundary before the cap; hard cut if none.
    pieces = []
    rest = text
    while len(rest) > MAX_PASSAGE_CHARS:
        ends = [m.end() for m in _SENTENCE_END.finditer(rest) if m.end() <= MAX_PASSAGE_CHARS]
        cut = ends[-1] if ends else MAX_PASSAGE_CHARS
        pieces.append(rest[:cut].strip())
        rest = rest[cut:].strip()
    if rest:
        pieces.append(rest)
    return pieces


def ingest_document(doc: SourceDocument) -> list[Passage]:
    """Turn one document into passages, in document order.

    Paragraphs are blank-line-delimited. A paragraph longer than
    MAX_PASSAGE_CHARS is split at sentence boundaries before the limit, so a
    single passage never exceeds the cap.
    """
    if not isinstance(doc.language, Language):
        raise IngestError(f"document {doc.doc_id!r} has unsupported language {doc.language!r}")
    texts: list[str] = []
    for paragraph in split_paragraphs(doc.body):
        if len(paragraph) > MAX_PASSAGE_CHARS:
            texts.extend(_split_oversized(paragraph))
        else:
            texts.append(paragraph)
    if not texts:
        raise IngestError(f"document {doc.doc_id!r} has no non-empty paragraphs")
    tags = tuple(doc.section_tags)
    return [
        Passage(
            passage_id=f"{doc.doc_id}#p{ordinal}",
            doc_id=doc.doc_id,
            language=doc.language,
            text=text,
            tags=tags,
            ordinal=ordinal,
        )
        for ordinal, text in enumerate(texts)
    ]


def ingest_corpus(docs: Iterable[SourceDocument]) -> list[Passage]:
    """Ingest many documents; passage ids stay unique corpus-wide."""
    passages: list[Passage] = []
    seen: set[str] = set()
    for doc in docs:
        if doc.doc_id in seen:
            raise IngestError(f"duplicate doc_id {doc.doc_id!r}")
        seen.add(doc.doc_id)
        passages.extend(ingest_document(doc))
    return passages


def corpus_stats(passages: Iterable[Passage]) -> dict:
    """Exact passage counts by language and by tag."""
    passages = list(passages)
    by_language = Counter(p.language.value for p in passages)
    by_tag = Counter(tag for p in passages for tag in p.tags)
    return {"count_by_language": dict(by_language), "count_by_tag": dict(by_tag)}


def load_corpus_file(path: Path | str) -> list[SourceDocument]:
    """Read documents from a line-delimited record file, one JSON object per line."""
    path = Path(path)
    docs = []
    with path.open("r", encoding="utf-8") as fh:
        for line_no, line in enumerate(fh, 1):
            if not line.strip():
                continue
            try:
                record = json.loads(line)
            except json.JSONDecodeError as exc:
                raise CorpusFileError(f"{path}: line {line_no}: invalid JSON ({exc})") from None
            missing = [name for name in CORPUS_FIELDS if name not in record]
            if missing:
                raise CorpusFileError(f"{path}: line {line_no}: missing fields {missing}")
            try:
                language = Language(record["language"])
            except ValueError:
                raise CorpusFileError(
                    f"{path}: line {line_no}: language must be 'en' or 'fr', got {record['language']!r}"
                ) from None
            docs.append(
                SourceDocument(
                    doc_id=str(record["doc_id"]),
                    language=language,
                    title=str(record["title"]),
                    body=str(record["body"]),
                    section_tags=tuple(str(t) for t in record["section_tags"]),
                )
            )
    return docs


def save_corpus_file(docs: Iterable[SourceDocument], path: Path | str) -> None:
    path = Path(path)
    with path.open("w", encoding="utf-8") as fh:
        for doc in docs:
            fh.write(
                json.dumps(
                    {
                        "doc_id": doc.doc_id,
                        "language": doc.language.value,
                        "title": doc.title,
                        "body": doc.body,
                        "section_tags": list(doc.section_tags),
                    },
                    ensure_ascii=False,
                )
                + "\n"
            )


def save_passages(passages: Iterable[Passage], path: Path | str) -> None:
    path = Path(path)
    with path.open("w", encoding="utf-8") as fh:
        for p in passages:
            fh.write(
                json.dumps(
                    {
                        "passage_id": p.passage_id,
                        "doc_id": p.doc_id,
                        "language": p.language.value,
                        "text": p.text,
                        "tags": list(p.tags),
                        "ordinal": p.ordinal,
                    },
                    ensure_ascii=False,
                )
                + "\n"
            )


def load_passages(path: Path | str) -> list[Passage]:
    path = Path(path)
    passages = []
    with path.open("r", encoding="utf-8") as fh:
        for line_no, line in enumerate(fh, 1):
            if not line.strip():
                continue
            try:
                record = json.loads(line)
            except json.JSONDecodeError as exc:
                raise CorpusFileError(f"{path}: line {line_no}: invalid JSON ({exc})") from None
            passages.append(
                Passage(
                    passage_id=record["passage_id"],
                    doc_id=record["doc_id"],
                    language=Language(record["language"]),
                    text=record["text"],
                    tags=tuple(record["tags"]),
                    ordinal=int(record["ordinal"]),
                )
            )
    return passages


def doc_titles(docs: Iterable[SourceDocument]) -> dict[str, str]:
    return {doc.doc_id: doc.title for doc in docs}


def save_doc_titles(titles: Mapping[str, str], path: Path | str) -> None:
    path = Path(path)
    with path.open("w", encoding="utf-8") as fh:
        for doc_id in sorted(titles):
            fh.write(json.dumps({"doc_id": doc_id, "title": titles[doc_id]}, ensure_ascii=False) + "\n")


def load_doc_titles(path: Path | str) -> dict[str, str]:
    path = Path(path)
    titles: dict[str, str] = {}
    if not path.exists():
        return titles
    with path.open("r", encoding="utf-8") as fh:
        for line in fh:
            if line.strip():
                record = json.loads(line)
                titles[record["doc_id"]] = record["title"]
    return titles
