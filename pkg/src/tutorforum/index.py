"""Unit-vector embeddings and exhaustive cosine top-k retrieval over the passage bank.

Course corpora are a few hundred paragraphs, so retrieval is a literal scan of
every saved embedding; there is no approximate-nearest-neighbor structure to
tune or to disagree with the brute-force definition.

The default embedding provider is a deterministic hashed token-frequency
embedder, so two builds of the same corpus are bit-identical. A remote HTTP
provider can be swapped in behind the same interface.
"""

from __future__ import annotations

import hashlib
import json
import math
import os
import re
from collections import Counter
from dataclasses import dataclass, field
from pathlib import Path
from typing import Mapping, Protocol, Sequence

import httpx
import numpy as np

from .corpus import (
    Language,
    Passage,
    load_doc_titles,
    load_passages,
    save_doc_titles,
    save_passages,
)

DEFAULT_DIM = 256
DEFAULT_K = 5

EMBED_URL_ENV = "TUTORFORUM_EMBED_ENDPOINT"
EMBED_TOKEN_ENV = "TUTORFORUM_EMBED_TOKEN"

INDEX_META_FILE = "index.json"
ENTRIES_FILE = "entries.jsonl"
VECTORS_FILE = "vectors.f32"
PASSAGES_FILE = "passages.jsonl"
DOCS_FILE = "docs.jsonl"

_TOKEN = re.compile(r"[^\W_]+", re.UNICODE)


class EmbeddingError(ValueError):
    """Text could not be embedded."""


class DimensionMismatch(ValueError):
    """Two vectors of different dimensions were compared."""


class IndexBuildError(RuntimeError):
    """Index construction failed; the message names the offending passage."""


class EmptyIndexError(RuntimeError):
    """Retrieval was attempted against an index with no entries."""


class IndexStorageError(RuntimeError):
    """An index directory is missing or inconsistent."""


class EmbeddingProvider(Protocol):
    name: str
    dim: int

    def embed(self, text: str) -> np.ndarray: ...


def _bucket(token: str, dim: int) -> int:
    digest = hashlib.blake2b(token.encode("utf-8"), digest_size=8).digest()
    return int.from_bytes(digest, "big") % dim


@dataclass
class HashedFrequencyEmbedder:
    """Reference embedder: hash tokens to buckets, weight by 1 + ln(tf), L2-normalize.

    Deterministic across runs and platforms (stable hash, fixed dtype); all
    components are non-negative, so cosine scores against other reference
    embeddings live in [0, 1].
    """

    dim: int = DEFAULT_DIM
    name: str = "ref"

    def embed(self, text: str) -> np.ndarray:
        if not text or not text.strip():
            raise EmbeddingError("cannot embed empty text")
        counts = Counter(_TOKEN.findall(text.lower()))
        acc = np.zeros(self.dim, dtype=np.float64)
        for token, freq in counts.items():
            acc[_bucket(token, self.dim)] += 1.0 + math.log(freq)
        norm = math.sqrt(float(np.dot(acc, acc)))
        if norm == 0.0:
            return np.zeros(self.dim, dtype=np.float32)
        return (acc / norm).astype(np.float32)


@dataclass
class HttpEmbeddingProvider:
    """Adapter for a remote embedding endpoint: POST {text} -> {values: [...]}.

    The returned vector is re-normalized locally so the unit-norm invariant
    holds regardless of what the endpoint does.
    """

    endpoint: str
    dim: int = DEFAULT_DIM
    timeout_s: float = 30.0
    token: str | None = None
    name: str = "http"
    client: httpx.Client | None = None

    @classmethod
    def from_env(cls, dim: int = DEFAULT_DIM, timeout_s: float = 30.0) -> "HttpEmbeddingProvider":
        endpoint = os.environ.get(EMBED_URL_ENV)
        if not endpoint:
            raise EmbeddingError(f"{EMBED_URL_ENV} is not set; cannot use the http embedding provider")
        return cls(endpoint=endpoint, dim=dim, timeout_s=timeout_s, token=os.environ.get(EMBED_TOKEN_ENV))

    def embed(self, text: str) -> np.ndarray:
        if not text or not text.strip():
            raise EmbeddingError("cannot embed empty text")
        headers = {"Authorization": f"Bearer {self.token}"} if self.token else {}
        poster = self.client.post if self.client is not None else httpx.post
        try:
            response = poster(self.endpoint, json={"text": text}, headers=headers, timeout=self.timeout_s)
        except httpx.HTTPError as exc:
            raise EmbeddingError(f"embedding endpoint request failed: {exc}") from exc
        if response.status_code != 200:
            raise EmbeddingError(f"embedding endpoint returned {response.status_code}")
        values = np.asarray(response.json().get("values", []), dtype=np.float64)
        if values.shape != (self.dim,):
            raise EmbeddingError(f"embedding endpoint returned shape {values.shape}, expected ({self.dim},)")
        norm = math.sqrt(float(np.dot(values, values)))
        if norm == 0.0:
            return np.zeros(self.dim, dtype=np.float32)
        return (values / norm).astype(np.float32)


def cosine(a: np.ndarray, b: np.ndarray) -> float:
    """Dot product of unit vectors, clamped to [-1, 1]; 0 if either is all-zero."""
    a = np.asarray(a)
    b = np.asarray(b)
    if a.shape != b.shape:
        raise DimensionMismatch(f"dimension mismatch: {a.shape} vs {b.shape}")
    a64 = a.astype(np.float64)
    b64 = b.astype(np.float64)
    if not a64.any() or not b64.any():
        return 0.0
    return max(-1.0, min(1.0, float(np.dot(a64, b64))))


@dataclass(frozen=True)
class RetrievalHit:
    passage_id: str
    score: float
    rank: int


@dataclass(frozen=True)
class IndexEntry:
    passage_id: str
    language: Language
    tags: tuple[str, ...]
    embedding: np.ndarray = field(repr=False)


class Index:
    """Immutable retrieval index: entries, their source passages, one provider."""

    def __init__(
        self,
        entries: Sequence[IndexEntry],
        passages_by_id: Mapping[str, Passage],
        provider: EmbeddingProvider,
        doc_titles: Mapping[str, str] | None = None,
    ):
        self.entries = list(entries)
        self.passages_by_id = dict(passages_by_id)
        self.provider = provider
        self.doc_titles = dict(doc_titles or {})

    def __len__(self) -> int:
        return len(self.entries)

    def title_for(self, passage_id: str) -> str | None:
        passage = self.passages_by_id.get(passage_id)
        if passage is None:
            return None
        return self.doc_titles.get(passage.doc_id)

    def retrieve(
        self,
        question_text: str,
        language: Language,
        tags: Sequence[str] | None = None,
        k: int = DEFAULT_K,
    ) -> list[RetrievalHit]:
        """Top-k cosine hits among entries in `language`, optionally tag-filtered.

        The tag filter is soft: if no entry shares a tag with the filter, it
        falls back to language-only candidates instead of returning nothing.
        """
        if k < 1:
            raise ValueError(f"k must be >= 1, got {k}")
        if not self.entries:
            raise EmptyIndexError("the index has no entries")
        if not isinstance(language, Language):
            language = Language(language)  # raises ValueError for unknown languages

        query = self.provider.embed(question_text)
        pool = [e for e in self.entries if e.language == language]
        if tags:
            wanted = set(tags)
            tagged = [e for e in pool if wanted.intersection(e.tags)]
            if tagged:
                pool = tagged
        scored = sorted(
            ((cosine(query, e.embedding), e.passage_id) for e in pool),
            key=lambda pair: (-pair[0], pair[1]),
        )
        return [
            RetrievalHit(passage_id=pid, score=score, rank=rank)
            for rank, (score, pid) in enumerate(scored[:k], start=1)
        ]


def build_index(
    passages: Sequence[Passage],
    provider: EmbeddingProvider | None = None,
    doc_titles: Mapping[str, str] | None = None,
) -> Index:
    """Embed every passage and assemble the immutable index."""
    if not passages:
        raise IndexBuildError("cannot build an index from an empty passage list")
    provider = provider or HashedFrequencyEmbedder()
    entries = []
    by_id: dict[str, Passage] = {}
    for passage in passages:
        if passage.passage_id in by_id:
            raise IndexBuildError(f"duplicate passage_id {passage.passage_id!r}")
        try:
            vector = provider.embed(passage.text)
        except Exception as exc:
            raise IndexBuildError(f"embedding failed for passage {passage.passage_id!r}: {exc}") from exc
        entries.append(IndexEntry(passage.passage_id, passage.language, tuple(passage.tags), vector))
        by_id[passage.passage_id] = passage
    return Index(entries, by_id, provider, doc_titles)


def save_index(index: Index, out_dir: Path | str) -> None:
    """Persist the index: metadata records + flat little-endian float32 vectors."""
    out = Path(out_dir)
    out.mkdir(parents=True, exist_ok=True)
    meta = {
        "version": 1,
        "dim": index.provider.dim,
        "provider": index.provider.name,
        "count": len(index.entries),
    }
    (out / INDEX_META_FILE).write_text(json.dumps(meta, indent=2) + "\n", encoding="utf-8")
    with (out / ENTRIES_FILE).open("w", encoding="utf-8") as fh:
        for entry in index.entries:
            fh.write(
                json.dumps(
                    {
                        "passage_id": entry.passage_id,
                        "language": entry.language.value,
                        "tags": list(entry.tags),
                    },
                    ensure_ascii=False,
                )
                + "\n"
            )
    matrix = np.stack([entry.embedding for entry in index.entries]).astype("<f4")
    (out / VECTORS_FILE).write_bytes(matrix.tobytes(order="C"))
    save_passages([index.passages_by_id[e.passage_id] for e in index.entries], out / PASSAGES_FILE)
    save_doc_titles(index.doc_titles, out / DOCS_FILE)


def provider_from_name(name: str, dim: int) -> EmbeddingProvider:
    if name == "ref":
        return HashedFrequencyEmbedder(dim=dim)
    if name == "http":
        return HttpEmbeddingProvider.from_env(dim=dim)
    raise IndexStorageError(f"unknown embedding provider {name!r}")


def load_index(index_dir: Path | str, provider: EmbeddingProvider | None = None) -> Index:
    """Reload a persisted index; vectors round-trip bit-exactly."""
    root = Path(index_dir)
    meta_path = root / INDEX_META_FILE
    if not meta_path.exists():
        raise IndexStorageError(f"no index found at {root} (missing {INDEX_META_FILE})")
    meta = json.loads(meta_path.read_text(encoding="utf-8"))
    dim = int(meta["dim"])
    count = int(meta["count"])
    if provider is None:
        provider = provider_from_name(meta["provider"], dim)

    raw = (root / VECTORS_FILE).read_bytes()
    expected = count * dim * 4
    if len(raw) != expected:
        raise IndexStorageError(f"{root / VECTORS_FILE}: expected {expected} bytes, found {len(raw)}")
    matrix = np.frombuffer(raw, dtype="<f4").reshape(count, dim).copy()

    entries = []
    with (root / ENTRIES_FILE).open("r", encoding="utf-8") as fh:
        for row, line in enumerate(fh):
            if not line.strip():
                continue
            record = json.loads(line)
            entries.append(
                IndexEntry(
                    passage_id=record["passage_id"],
                    language=Language(record["language"]),
                    tags=tuple(record["tags"]),
                    embedding=matrix[row],
                )
            )
    if len(entries) != count:
        raise IndexStorageError(f"{root / ENTRIES_FILE}: expected {count} entries, found {len(entries)}")

    passages = load_passages(root / PASSAGES_FILE)
    titles = load_doc_titles(root / DOCS_FILE)
    return Index(entries, {p.passage_id: p for p in passages}, provider, titles)
