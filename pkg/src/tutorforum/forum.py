"""Cohort forum domain: questions, answers, votes, acceptance, reputation.

State is event-sourced. Every mutation appends one JSON line to an append-only
log, and replaying the log rebuilds the exact state: entities, vote ledger,
helpfulness scores, badges, and the pending AI-answer queue. Commands validate
against current state and stamp ids/timestamps into the event payload, so a
replay applies the stored payloads verbatim and regenerates nothing.

All mutations are serialized behind one lock; AI answer generation is designed
to run outside it (see `run_ai_pipeline` / `record_ai_answer`), with the
record step idempotent so the first stored AI answer per question wins.
"""

from __future__ import annotations

import json
import threading
import time
from dataclasses import dataclass, field
from enum import Enum
from pathlib import Path
from typing import Any, Callable, Iterable, Sequence

from .corpus import Language
from .index import Index
from .language import detect_language
from .ragcore import GenerationBackend, NoContextError, answer_question

AI_USER_ID = "assistant"
AI_DISPLAY_NAME = "Course Assistant"

ACCEPTED_ANSWER_POINTS = 3
ANSWER_UPVOTE_POINTS = 2
QUESTION_UPVOTE_POINTS = 1
ANSWER_DOWNVOTE_POINTS = -1


class Role(str, Enum):
    LEARNER = "learner"
    FACILITATOR = "facilitator"
    AI = "ai"


class Badge(str, Enum):
    NONE = "none"
    BRONZE = "bronze"
    SILVER = "silver"
    GOLD = "gold"


class VoteDirection(str, Enum):
    UP = "up"
    DOWN = "down"


BADGE_FLOORS = ((Badge.GOLD, 50), (Badge.SILVER, 20), (Badge.BRONZE, 5))

_FALLBACK_BODIES = {
    Language.EN: (
        "I could not find course material for this question, so I cannot give a "
        "grounded answer. Please ask a facilitator to weigh in."
    ),
    Language.FR: (
        "Je n'ai pas trouvé de matériel de cours pour cette question, je ne peux "
        "donc pas donner une réponse fondée. Veuillez demander à un facilitateur "
        "d'intervenir."
    ),
}


def badge_for_score(score: int) -> Badge:
    for badge, floor in BADGE_FLOORS:
        if score >= floor:
            return badge
    return Badge.NONE


class ForumError(RuntimeError):
    """Base class for forum domain failures."""


class UnknownEntityError(ForumError):
    """A referenced cohort, user, question, or answer does not exist."""


class NotPermittedError(ForumError):
    """The actor is not allowed to perform this operation."""


class ConflictError(ForumError):
    """The operation conflicts with forum rules (self-vote, duplicates)."""


class InvalidInputError(ForumError):
    """The operation payload is invalid (empty body, bad role)."""


class LogCorruptionError(ForumError):
    """The event log has an unreadable line; replay halts there."""

    def __init__(self, path: Path, line_no: int, reason: str):
        super().__init__(f"{path}: line {line_no}: corrupt event record ({reason})")
        self.line_no = line_no


@dataclass
class User:
    user_id: str
    display_name: str
    role: Role
    cohort_id: str | None
    helpfulness_score: int = 0
    badge: Badge = Badge.NONE
    first_credit_seq: int | None = None


@dataclass
class Cohort:
    cohort_id: str
    name: str
    member_ids: set[str]
    created_at: float


@dataclass
class Question:
    question_id: str
    cohort_id: str
    author_id: str
    anonymous: bool
    body: str
    tags: tuple[str, ...]
    attachments: tuple[str, ...]
    created_at: float
    detected_language: Language
    upvoters: set[str] = field(default_factory=set)


@dataclass
class Answer:
    answer_id: str
    question_id: str
    author_id: str
    body: str
    citations: tuple[str, ...]
    created_at: float
    accepted: bool = False
    upvotes: int = 0
    downvotes: int = 0
    fallback: bool = False


class _State:
    """Mutable forum state; only `apply` is allowed to change it."""

    def __init__(self) -> None:
        self.users: dict[str, User] = {
            AI_USER_ID: User(AI_USER_ID, AI_DISPLAY_NAME, Role.AI, cohort_id=None)
        }
        self.cohorts: dict[str, Cohort] = {}
        self.questions: dict[str, Question] = {}
        self.answers: dict[str, Answer] = {}
        self.answers_by_question: dict[str, list[str]] = {}
        self.answers_by_author: dict[str, list[str]] = {AI_USER_ID: []}
        self.questions_by_author: dict[str, list[str]] = {}
        self.vote_ledger: dict[tuple[str, str], VoteDirection] = {}
        self.accepted_by_question: dict[str, str] = {}
        self.pending_ai: list[str] = []
        self.idempotency: dict[str, dict[str, Any]] = {}
        self.event_count = 0
        self.counters = {"cohort": 0, "question": 0, "answer": 0}


class Forum:
    """Event-sourced forum facade. Thread-safe; mutations are serialized."""

    def __init__(self, log_path: Path | str | None = None, clock: Callable[[], float] = time.time):
        self._state = _State()
        self._lock = threading.RLock()
        self._clock = clock
        self._log_path = Path(log_path) if log_path is not None else None
        self._log_file = None
        if self._log_path is not None:
            if self._log_path.exists():
                self._replay_file(self._log_path)
            self._log_path.parent.mkdir(parents=True, exist_ok=True)
            self._log_file = self._log_path.open("a", encoding="utf-8")

    # ----- event plumbing -------------------------------------------------

    def _replay_file(self, path: Path) -> None:
        with path.open("r", encoding="utf-8") as fh:
            for line_no, line in enumerate(fh, 1):
                if not line.strip():
                    raise LogCorruptionError(path, line_no, "blank line")
                try:
                    event = json.loads(line)
                except json.JSONDecodeError as exc:
                    raise LogCorruptionError(path, line_no, str(exc)) from None
                if not isinstance(event, dict) or "type" not in event or "payload" not in event:
                    raise LogCorruptionError(path, line_no, "missing type/payload")
                self._apply(event)

    def _commit(self, event_type: str, payload: dict[str, Any], key: str | None = None) -> None:
        event: dict[str, Any] = {"type": event_type, "ts": payload.get("created_at", self._clock()), "payload": payload}
        if key is not None:
            event["key"] = key
        self._apply(event)
        if self._log_file is not None:
            self._log_file.write(json.dumps(event, ensure_ascii=False) + "\n")
            self._log_file.flush()

    def _apply(self, event: dict[str, Any]) -> None:
        handler = getattr(self, "_apply_" + event["type"])
        self._state.event_count += 1
        handler(event["payload"])
        key = event.get("key")
        if key is not None:
            self._state.idempotency[key] = {"type": event["type"], **_result_ids(event)}

    def close(self) -> None:
        with self._lock:
            if self._log_file is not None:
                self._log_file.flush()
                self._log_file.close()
                self._log_file = None

    # ----- lookups ---------------------------------------------------------

    def get_user(self, user_id: str) -> User:
        user = self._state.users.get(user_id)
        if user is None:
            raise UnknownEntityError(f"unknown user {user_id!r}")
        return user

    def get_cohort(self, cohort_id: str) -> Cohort:
        cohort = self._state.cohorts.get(cohort_id)
        if cohort is None:
            raise UnknownEntityError(f"unknown cohort {cohort_id!r}")
        return cohort

    def get_question(self, question_id: str) -> Question:
        question = self._state.questions.get(question_id)
        if question is None:
            raise UnknownEntityError(f"unknown question {question_id!r}")
        return question

    def get_answer(self, answer_id: str) -> Answer:
        answer = self._state.answers.get(answer_id)
        if answer is None:
            raise UnknownEntityError(f"unknown answer {answer_id!r}")
        return answer

    def answers_for(self, question_id: str) -> list[Answer]:
        with self._lock:
            self.get_question(question_id)
            return [self._state.answers[a] for a in self._state.answers_by_question[question_id]]

    def ai_answer_for(self, question_id: str) -> Answer | None:
        with self._lock:
            for answer in self.answers_for(question_id):
                if answer.author_id == AI_USER_ID:
                    return answer
            return None

    def pending_ai_questions(self) -> list[str]:
        with self._lock:
            return list(self._state.pending_ai)

    def cohort_questions(self, cohort_id: str) -> list[Question]:
        with self._lock:
            self.get_cohort(cohort_id)
            return [q for q in self._state.questions.values() if q.cohort_id == cohort_id]

    def idempotency_result(self, key: str) -> dict[str, Any] | None:
        with self._lock:
            return self._state.idempotency.get(key)

    # ----- commands ----------------------------------------------------------

    def create_cohort(
        self,
        name: str,
        members: Iterable[tuple[str, str, Role]] = (),
        key: str | None = None,
    ) -> Cohort:
        """Create a cohort with its roster. Each user joins exactly one cohort."""
        with self._lock:
            cached = self._cached(key)
            if cached is not None:
                return self.get_cohort(cached["cohort_id"])
            roster = []
            seen: set[str] = set()
            for user_id, display_name, role in members:
                role = Role(role)
                if role is Role.AI:
                    raise InvalidInputError("the AI user is provisioned automatically, not via rosters")
                if user_id in self._state.users or user_id in seen:
                    raise ConflictError(f"user {user_id!r} already belongs to a cohort")
                seen.add(user_id)
                roster.append({"user_id": user_id, "display_name": display_name, "role": role.value})
            cohort_id = f"c{self._state.counters['cohort'] + 1}"
            payload = {
                "cohort_id": cohort_id,
                "name": name,
                "members": roster,
                "created_at": self._clock(),
            }
            self._commit("cohort_created", payload, key)
            return self.get_cohort(cohort_id)

    def post_question(
        self,
        cohort_id: str,
        author_id: str,
        body: str,
        tags: Sequence[str] = (),
        anonymous: bool = False,
        attachments: Sequence[str] = (),
        key: str | None = None,
    ) -> Question:
        """Store a question, detect its language, and enqueue the AI-answer job."""
        with self._lock:
            cached = self._cached(key)
            if cached is not None:
                return self.get_question(cached["question_id"])
            cohort = self.get_cohort(cohort_id)
            author = self.get_user(author_id)
            if author.role is Role.AI:
                raise NotPermittedError("the AI user does not post questions")
            if author_id not in cohort.member_ids:
                raise NotPermittedError(f"user {author_id!r} is not a member of cohort {cohort_id!r}")
            if not body or not body.strip():
                raise InvalidInputError("question body must not be empty")
            question_id = f"q{self._state.counters['question'] + 1}"
            payload = {
                "question_id": question_id,
                "cohort_id": cohort_id,
                "author_id": author_id,
                "anonymous": bool(anonymous),
                "body": body,
                "tags": [str(t) for t in tags],
                "attachments": [str(a) for a in attachments],
                "created_at": self._clock(),
                "detected_language": detect_language(body).language.value,
            }
            self._commit("question_posted", payload, key)
            return self.get_question(question_id)

    def run_ai_pipeline(
        self,
        question: Question,
        index: Index,
        backend: GenerationBackend | None = None,
    ) -> tuple[str, tuple[str, ...], bool]:
        """Generate the AI answer content for a question. No lock, no state change.

        Returns (body, citations, fallback). On a no-context failure the body is
        the localized fallback that points the asker at the facilitators.
        """
        try:
            answer = answer_question(
                index,
                question.body,
                tags=question.tags or None,
                attachments=question.attachments,
                backend=backend,
            )
            return answer.body, answer.citations, False
        except NoContextError as exc:
            return _FALLBACK_BODIES[exc.language], (), True

    def record_ai_answer(
        self,
        question_id: str,
        body: str,
        citations: Sequence[str],
        fallback: bool = False,
    ) -> Answer:
        """Store the AI answer; idempotent, the first stored answer wins."""
        with self._lock:
            self.get_question(question_id)
            existing = self.ai_answer_for(question_id)
            if existing is not None:
                return existing
            answer_id = f"a{self._state.counters['answer'] + 1}"
            payload = {
                "answer_id": answer_id,
                "question_id": question_id,
                "author_id": AI_USER_ID,
                "body": body,
                "citations": [str(c) for c in citations],
                "fallback": bool(fallback),
                "created_at": self._clock(),
            }
            self._commit("ai_answer_posted", payload)
            return self.get_answer(answer_id)

    def post_ai_answer(
        self,
        question_id: str,
        index: Index,
        backend: GenerationBackend | None = None,
    ) -> Answer:
        """Answer a question as the AI facilitator: at most one AI answer ever."""
        with self._lock:
            question = self.get_question(question_id)
            existing = self.ai_answer_for(question_id)
            if existing is not None:
                return existing
        body, citations, fallback = self.run_ai_pipeline(question, index, backend)
        return self.record_ai_answer(question_id, body, citations, fallback)

    def post_human_answer(self, question_id: str, author_id: str, body: str, key: str | None = None) -> Answer:
        with self._lock:
            cached = self._cached(key)
            if cached is not None:
                return self.get_answer(cached["answer_id"])
            question = self.get_question(question_id)
            author = self.get_user(author_id)
            if author.role is Role.AI:
                raise NotPermittedError("the AI user posts answers only through the answer pipeline")
            if author_id not in self.get_cohort(question.cohort_id).member_ids:
                raise NotPermittedError(f"user {author_id!r} is not a member of cohort {question.cohort_id!r}")
            if not body or not body.strip():
                raise InvalidInputError("answer body must not be empty")
            answer_id = f"a{self._state.counters['answer'] + 1}"
            payload = {
                "answer_id": answer_id,
                "question_id": question_id,
                "author_id": author_id,
                "body": body,
                "created_at": self._clock(),
            }
            self._commit("human_answer_posted", payload, key)
            return self.get_answer(answer_id)

    def vote(
        self,
        voter_id: str,
        answer_id: str,
        direction: VoteDirection | str,
        key: str | None = None,
    ) -> tuple[int, int]:
        """Cast or replace a vote; returns the answer's (upvotes, downvotes)."""
        direction = VoteDirection(direction)
        with self._lock:
            cached = self._cached(key)
            if cached is not None:
                answer = self.get_answer(cached["answer_id"])
                return answer.upvotes, answer.downvotes
            answer = self.get_answer(answer_id)
            voter = self.get_user(voter_id)
            if voter.role is Role.AI:
                raise NotPermittedError("the AI user does not vote")
            if voter_id == answer.author_id:
                raise ConflictError("voting on your own answer is not allowed")
            question = self.get_question(answer.question_id)
            if voter_id not in self.get_cohort(question.cohort_id).member_ids:
                raise NotPermittedError(f"user {voter_id!r} is not a member of cohort {question.cohort_id!r}")
            if self._state.vote_ledger.get((voter_id, answer_id)) == direction:
                return answer.upvotes, answer.downvotes  # idempotent re-vote
            payload = {
                "voter_id": voter_id,
                "answer_id": answer_id,
                "direction": direction.value,
                "created_at": self._clock(),
            }
            self._commit("answer_voted", payload, key)
            answer = self.get_answer(answer_id)
            return answer.upvotes, answer.downvotes

    def upvote_question(self, voter_id: str, question_id: str, key: str | None = None) -> int:
        """Upvote a question (questions have no downvotes); returns the tally."""
        with self._lock:
            cached = self._cached(key)
            if cached is not None:
                return len(self.get_question(cached["question_id"]).upvoters)
            question = self.get_question(question_id)
            voter = self.get_user(voter_id)
            if voter.role is Role.AI:
                raise NotPermittedError("the AI user does not vote")
            if voter_id == question.author_id:
                raise ConflictError("upvoting your own question is not allowed")
            if voter_id not in self.get_cohort(question.cohort_id).member_ids:
                raise NotPermittedError(f"user {voter_id!r} is not a member of cohort {question.cohort_id!r}")
            if voter_id in question.upvoters:
                return len(question.upvoters)
            payload = {"voter_id": voter_id, "question_id": question_id, "created_at": self._clock()}
            self._commit("question_upvoted", payload, key)
            return len(self.get_question(question_id).upvoters)

    def accept_answer(self, asker_id: str, question_id: str, answer_id: str, key: str | None = None) -> Answer:
        """Mark the single accepted answer; a new acceptance replaces the old one."""
        with self._lock:
            cached = self._cached(key)
            if cached is not None:
                return self.get_answer(cached["answer_id"])
            question = self.get_question(question_id)
            answer = self.get_answer(answer_id)
            if answer.question_id != question_id:
                raise InvalidInputError(f"answer {answer_id!r} does not belong to question {question_id!r}")
            if asker_id != question.author_id:
                raise NotPermittedError("only the question's author can accept an answer")
            if self._state.accepted_by_question.get(question_id) == answer_id:
                return answer
            payload = {
                "question_id": question_id,
                "answer_id": answer_id,
                "asker_id": asker_id,
                "created_at": self._clock(),
            }
            self._commit("answer_accepted", payload, key)
            return self.get_answer(answer_id)

    def leaderboard(self, cohort_id: str, n: int = 10) -> list[User]:
        """Top-n cohort members by helpfulness; ties go to the earliest credit."""
        if n < 1:
            raise InvalidInputError(f"n must be >= 1, got {n}")
        with self._lock:
            cohort = self.get_cohort(cohort_id)
            members = [self._state.users[u] for u in sorted(cohort.member_ids)]
            ranked = sorted(
                (u for u in members if u.role is not Role.AI),
                key=lambda u: (
                    -u.helpfulness_score,
                    u.first_credit_seq if u.first_credit_seq is not None else float("inf"),
                    u.user_id,
                ),
            )
            return ranked[:n]

    # ----- helpfulness -------------------------------------------------------

    def recompute_helpfulness(self, user_id: str) -> tuple[int, Badge]:
        """Recompute one user's score from current state (also done on every apply)."""
        with self._lock:
            self._recompute(user_id)
            user = self.get_user(user_id)
            return user.helpfulness_score, user.badge

    def _recompute(self, user_id: str) -> None:
        state = self._state
        user = state.users[user_id]
        accepted = 0
        answer_up = 0
        answer_down = 0
        for answer_id in state.answers_by_author.get(user_id, ()):
            answer = state.answers[answer_id]
            if answer.accepted:
                accepted += 1
            answer_up += answer.upvotes
            answer_down += answer.downvotes
        question_up = sum(
            len(state.questions[q].upvoters) for q in state.questions_by_author.get(user_id, ())
        )
        score = (
            ACCEPTED_ANSWER_POINTS * accepted
            + ANSWER_UPVOTE_POINTS * answer_up
            + QUESTION_UPVOTE_POINTS * question_up
            + ANSWER_DOWNVOTE_POINTS * answer_down
        )
        user.helpfulness_score = max(0, score)
        user.badge = badge_for_score(user.helpfulness_score)
        if user.helpfulness_score > 0 and user.first_credit_seq is None:
            user.first_credit_seq = state.event_count

    # ----- event handlers ----------------------------------------------------

    def _apply_cohort_created(self, p: dict[str, Any]) -> None:
        state = self._state
        cohort = Cohort(p["cohort_id"], p["name"], set(), float(p["created_at"]))
        state.cohorts[cohort.cohort_id] = cohort
        state.counters["cohort"] += 1
        for member in p["members"]:
            user = User(member["user_id"], member["display_name"], Role(member["role"]), cohort.cohort_id)
            state.users[user.user_id] = user
            cohort.member_ids.add(user.user_id)
            state.answers_by_author.setdefault(user.user_id, [])
            state.questions_by_author.setdefault(user.user_id, [])

    def _apply_question_posted(self, p: dict[str, Any]) -> None:
        state = self._state
        question = Question(
            question_id=p["question_id"],
            cohort_id=p["cohort_id"],
            author_id=p["author_id"],
            anonymous=bool(p["anonymous"]),
            body=p["body"],
            tags=tuple(p["tags"]),
            attachments=tuple(p["attachments"]),
            created_at=float(p["created_at"]),
            detected_language=Language(p["detected_language"]),
        )
        state.questions[question.question_id] = question
        state.answers_by_question[question.question_id] = []
        state.questions_by_author.setdefault(question.author_id, []).append(question.question_id)
        state.pending_ai.append(question.question_id)
        state.counters["question"] += 1

    def _apply_ai_answer_posted(self, p: dict[str, Any]) -> None:
        self._store_answer(p, author_id=AI_USER_ID, citations=tuple(p["citations"]), fallback=bool(p["fallback"]))
        if p["question_id"] in self._state.pending_ai:
            self._state.pending_ai.remove(p["question_id"])

    def _apply_human_answer_posted(self, p: dict[str, Any]) -> None:
        self._store_answer(p, author_id=p["author_id"], citations=(), fallback=False)

    def _store_answer(self, p: dict[str, Any], author_id: str, citations: tuple[str, ...], fallback: bool) -> None:
        state = self._state
        answer = Answer(
            answer_id=p["answer_id"],
            question_id=p["question_id"],
            author_id=author_id,
            body=p["body"],
            citations=citations,
            created_at=float(p["created_at"]),
            fallback=fallback,
        )
        state.answers[answer.answer_id] = answer
        state.answers_by_question[answer.question_id].append(answer.answer_id)
        state.answers_by_author.setdefault(author_id, []).append(answer.answer_id)
        state.counters["answer"] += 1

    def _apply_answer_voted(self, p: dict[str, Any]) -> None:
        state = self._state
        answer = state.answers[p["answer_id"]]
        new = VoteDirection(p["direction"])
        previous = state.vote_ledger.get((p["voter_id"], p["answer_id"]))
        if previous is VoteDirection.UP:
            answer.upvotes -= 1
        elif previous is VoteDirection.DOWN:
            answer.downvotes -= 1
        state.vote_ledger[(p["voter_id"], p["answer_id"])] = new
        if new is VoteDirection.UP:
            answer.upvotes += 1
        else:
            answer.downvotes += 1
        self._recompute(answer.author_id)

    def _apply_question_upvoted(self, p: dict[str, Any]) -> None:
        question = self._state.questions[p["question_id"]]
        question.upvoters.add(p["voter_id"])
        self._recompute(question.author_id)

    def _apply_answer_accepted(self, p: dict[str, Any]) -> None:
        state = self._state
        question_id = p["question_id"]
        new_id = p["answer_id"]
        previous_id = state.accepted_by_question.get(question_id)
        if previous_id is not None and previous_id != new_id:
            state.answers[previous_id].accepted = False
        state.answers[new_id].accepted = True
        state.accepted_by_question[question_id] = new_id
        if previous_id is not None and previous_id != new_id:
            self._recompute(state.answers[previous_id].author_id)
        self._recompute(state.answers[new_id].author_id)

    # ----- idempotency ---------------------------------------------------------

    def _cached(self, key: str | None) -> dict[str, Any] | None:
        if key is None:
            return None
        return self._state.idempotency.get(key)

    # ----- views & snapshots -----------------------------------------------------

    def question_public_view(self, question: Question) -> dict[str, Any]:
        """Externally rendered question; anonymity hides the author entirely."""
        view: dict[str, Any] = {
            "question_id": question.question_id,
            "cohort_id": question.cohort_id,
            "body": question.body,
            "tags": list(question.tags),
            "attachments": list(question.attachments),
            "created_at": question.created_at,
            "detected_language": question.detected_language.value,
            "anonymous": question.anonymous,
            "upvotes": len(question.upvoters),
        }
        if question.anonymous:
            view["author"] = {"display_name": "Anonymous"}
        else:
            author = self._state.users[question.author_id]
            view["author"] = {"user_id": author.user_id, "display_name": author.display_name}
        return view

    def answer_public_view(self, answer: Answer) -> dict[str, Any]:
        author = self._state.users[answer.author_id]
        return {
            "answer_id": answer.answer_id,
            "question_id": answer.question_id,
            "author": {
                "user_id": author.user_id,
                "display_name": author.display_name,
                "role": author.role.value,
            },
            "body": answer.body,
            "citations": list(answer.citations),
            "upvotes": answer.upvotes,
            "downvotes": answer.downvotes,
            "accepted": answer.accepted,
            "fallback": answer.fallback,
            "created_at": answer.created_at,
        }

    def thread_view(self, question_id: str) -> dict[str, Any]:
        with self._lock:
            question = self.get_question(question_id)
            answers = self.answers_for(question_id)
            return {
                "question": self.question_public_view(question),
                "answers": [self.answer_public_view(a) for a in answers],
                "ai_pending": all(a.author_id != AI_USER_ID for a in answers),
            }

    def snapshot(self) -> dict[str, Any]:
        """Canonical deep-comparable dump of the whole state."""
        with self._lock:
            state = self._state
            return {
                "users": {
                    uid: {
                        "display_name": u.display_name,
                        "role": u.role.value,
                        "cohort_id": u.cohort_id,
                        "helpfulness_score": u.helpfulness_score,
                        "badge": u.badge.value,
                        "first_credit_seq": u.first_credit_seq,
                    }
                    for uid, u in sorted(state.users.items())
                },
                "cohorts": {
                    cid: {"name": c.name, "member_ids": sorted(c.member_ids), "created_at": c.created_at}
                    for cid, c in sorted(state.cohorts.items())
                },
                "questions": {
                    qid: {
                        "cohort_id": q.cohort_id,
                        "author_id": q.author_id,
                        "anonymous": q.anonymous,
                        "body": q.body,
                        "tags": list(q.tags),
                        "attachments": list(q.attachments),
                        "created_at": q.created_at,
                        "detected_language": q.detected_language.value,
                        "upvoters": sorted(q.upvoters),
                    }
                    for qid, q in sorted(state.questions.items())
                },
                "answers": {
                    aid: {
                        "question_id": a.question_id,
                        "author_id": a.author_id,
                        "body": a.body,
                        "citations": list(a.citations),
                        "created_at": a.created_at,
                        "accepted": a.accepted,
                        "upvotes": a.upvotes,
                        "downvotes": a.downvotes,
                        "fallback": a.fallback,
                    }
                    for aid, a in sorted(state.answers.items())
                },
                "answer_order": {qid: list(aids) for qid, aids in sorted(state.answers_by_question.items())},
                "vote_ledger": {
                    f"{voter}|{answer}": direction.value
                    for (voter, answer), direction in sorted(state.vote_ledger.items())
                },
                "accepted": dict(sorted(state.accepted_by_question.items())),
                "pending_ai": list(state.pending_ai),
                "idempotency": {k: dict(v) for k, v in sorted(state.idempotency.items())},
                "event_count": state.event_count,
            }


def _result_ids(event: dict[str, Any]) -> dict[str, Any]:
    payload = event["payload"]
    return {k: payload[k] for k in ("cohort_id", "question_id", "answer_id") if k in payload}
