"""Deployment-report metrics from expert- and community-labeled question records.

Each record carries the expert labels (valid, curricular vs administrative,
AI answer correct) and the community signals (who was accepted, whose answers
were upvoted) for one question. All accuracy denominators use valid questions
only. Internal values stay at full precision; rendering rounds to one decimal.
"""

from __future__ import annotations

import csv
import json
from dataclasses import dataclass
from enum import Enum
from pathlib import Path
from typing import Sequence


class Category(str, Enum):
    CURRICULAR = "curricular"
    ADMINISTRATIVE = "administrative"


class AcceptedBy(str, Enum):
    AI = "ai"
    COMMUNITY = "community"
    NONE = "none"


class RecordsError(ValueError):
    """A records file could not be parsed; the message names the row."""


class MetricsError(ValueError):
    """A metric was requested over a record set that cannot support it."""


CSV_COLUMNS = (
    "question_id",
    "valid",
    "category",
    "ai_correct",
    "community_correct",
    "accepted_by",
    "ai_answer_upvoted",
    "community_answer_upvoted",
)


@dataclass(frozen=True)
class EvalRecord:
    question_id: str
    valid: bool
    category: Category | None
    ai_correct: bool
    community_correct: bool
    accepted_by: AcceptedBy
    ai_answer_upvoted: bool
    community_answer_upvoted: bool

    def __post_init__(self) -> None:
        if self.valid and self.category is None:
            raise ValueError(f"record {self.question_id!r}: valid records need a category")
        if not self.valid and self.category is not None:
            raise ValueError(f"record {self.question_id!r}: invalid records must not carry a category")


@dataclass(frozen=True)
class EvalReport:
    n_total: int
    n_valid: int
    pct_curricular: float
    pct_administrative: float
    ai_accuracy_overall: float
    ai_accuracy_curricular: float | None
    ai_accuracy_administrative: float | None
    n_ai_incorrect: int
    community_recovery_rate: float | None
    combined_accuracy: float
    n_accepted: int
    accepted_share_ai: float | None
    accepted_share_community: float | None
    n_upvoted_questions: int
    upvoted_share_ai: float | None
    upvoted_share_community: float | None


def _valid(records: Sequence[EvalRecord]) -> list[EvalRecord]:
    valid = [r for r in records if r.valid]
    if not valid:
        raise MetricsError("no valid records: accuracy metrics are undefined")
    return valid


def ai_accuracy(records: Sequence[EvalRecord]) -> tuple[float, dict[Category, float | None]]:
    """Fraction of valid questions the AI answered correctly, overall and per category."""
    valid = _valid(records)
    overall = sum(1 for r in valid if r.ai_correct) / len(valid)
    per_category: dict[Category, float | None] = {}
    for category in Category:
        members = [r for r in valid if r.category is category]
        per_category[category] = (
            sum(1 for r in members if r.ai_correct) / len(members) if members else None
        )
    return overall, per_category


def combined_accuracy(records: Sequence[EvalRecord]) -> float:
    """Fraction of valid questions answered correctly by the AI or the community."""
    valid = _valid(records)
    return sum(1 for r in valid if r.ai_correct or r.community_correct) / len(valid)


def community_recovery_rate(records: Sequence[EvalRecord]) -> tuple[int, float | None]:
    """Among valid questions the AI missed: how many, and the fraction the community rescued."""
    valid = _valid(records)
    missed = [r for r in valid if not r.ai_correct]
    if not missed:
        return 0, None
    return len(missed), sum(1 for r in missed if r.community_correct) / len(missed)


def category_split(records: Sequence[EvalRecord]) -> tuple[float, float]:
    valid = _valid(records)
    curricular = sum(1 for r in valid if r.category is Category.CURRICULAR)
    return curricular / len(valid), (len(valid) - curricular) / len(valid)


def community_feedback(records: Sequence[EvalRecord]) -> dict:
    """Acceptance and upvote shares; a question can count for both upvote sides."""
    accepted = [r for r in records if r.accepted_by is not AcceptedBy.NONE]
    upvoted = [r for r in records if r.ai_answer_upvoted or r.community_answer_upvoted]
    result: dict = {
        "n_accepted": len(accepted),
        "accepted_share_ai": None,
        "accepted_share_community": None,
        "n_upvoted_questions": len(upvoted),
        "upvoted_share_ai": None,
        "upvoted_share_community": None,
    }
    if accepted:
        result["accepted_share_ai"] = sum(1 for r in accepted if r.accepted_by is AcceptedBy.AI) / len(accepted)
        result["accepted_share_community"] = 1.0 - result["accepted_share_ai"]
    if upvoted:
        result["upvoted_share_ai"] = sum(1 for r in upvoted if r.ai_answer_upvoted) / len(upvoted)
        result["upvoted_share_community"] = sum(1 for r in upvoted if r.community_answer_upvoted) / len(upvoted)
    return result


def compute_report(records: Sequence[EvalRecord]) -> EvalReport:
    overall, per_category = ai_accuracy(records)
    pct_curricular, pct_administrative = category_split(records)
    n_missed, recovery = community_recovery_rate(records)
    feedback = community_feedback(records)
    return EvalReport(
        n_total=len(records),
        n_valid=sum(1 for r in records if r.valid),
        pct_curricular=pct_curricular,
        pct_administrative=pct_administrative,
        ai_accuracy_overall=overall,
        ai_accuracy_curricular=per_category[Category.CURRICULAR],
        ai_accuracy_administrative=per_category[Category.ADMINISTRATIVE],
        n_ai_incorrect=n_missed,
        community_recovery_rate=recovery,
        combined_accuracy=combined_accuracy(records),
        n_accepted=feedback["n_accepted"],
        accepted_share_ai=feedback["accepted_share_ai"],
        accepted_share_community=feedback["accepted_share_community"],
        n_upvoted_questions=feedback["n_upvoted_questions"],
        upvoted_share_ai=feedback["upvoted_share_ai"],
        upvoted_share_community=feedback["upvoted_share_community"],
    )


def _parse_flag(raw: str, column: str) -> bool:
    if raw == "1":
        return True
    if raw == "0":
        return False
    raise ValueError(f"column {column!r} must be 0 or 1, got {raw!r}")


def load_records(path: Path | str) -> list[EvalRecord]:
    """Parse the labeled-records CSV; malformed rows fail with their line number."""
    path = Path(path)
    records = []
    with path.open("r", encoding="utf-8", newline="") as fh:
        reader = csv.DictReader(fh)
        header = reader.fieldnames or []
        missing = [c for c in CSV_COLUMNS if c not in header]
        if missing:
            raise RecordsError(f"{path}: missing columns {missing}")
        for row in reader:
            try:
                category_raw = (row["category"] or "").strip()
                records.append(
                    EvalRecord(
                        question_id=row["question_id"],
                        valid=_parse_flag(row["valid"], "valid"),
                        category=Category(category_raw) if category_raw else None,
                        ai_correct=_parse_flag(row["ai_correct"], "ai_correct"),
                        community_correct=_parse_flag(row["community_correct"], "community_correct"),
                        accepted_by=AcceptedBy(row["accepted_by"]),
                        ai_answer_upvoted=_parse_flag(row["ai_answer_upvoted"], "ai_answer_upvoted"),
                        community_answer_upvoted=_parse_flag(
                            row["community_answer_upvoted"], "community_answer_upvoted"
                        ),
                    )
                )
            except (KeyError, ValueError) as exc:
                raise RecordsError(f"{path}: row at line {reader.line_num}: {exc}") from None
    return records


def _pct(value: float | None) -> str:
    return "n/a" if value is None else f"{100.0 * value:.1f}%"


def render_report(report: EvalReport) -> str:
    """Human-readable report, every rate rounded to one decimal."""
    lines = [
        f"questions: {report.n_total} total, {report.n_valid} valid",
        f"category split: {_pct(report.pct_curricular)} curricular / {_pct(report.pct_administrative)} administrative",
        (
            f"ai accuracy: {_pct(report.ai_accuracy_overall)} overall "
            f"(curricular {_pct(report.ai_accuracy_curricular)}, "
            f"administrative {_pct(report.ai_accuracy_administrative)})"
        ),
        f"ai incorrect: {report.n_ai_incorrect}, community recovery: {_pct(report.community_recovery_rate)}",
        f"combined accuracy: {_pct(report.combined_accuracy)}",
        (
            f"accepted answers: {report.n_accepted} "
            f"(ai {_pct(report.accepted_share_ai)}, community {_pct(report.accepted_share_community)})"
        ),
        (
            f"questions with an upvoted answer: {report.n_upvoted_questions} "
            f"(ai {_pct(report.upvoted_share_ai)}, community {_pct(report.upvoted_share_community)})"
        ),
    ]
    return "\n".join(lines)


def report_to_json(report: EvalReport) -> str:
    """Full-precision JSON form of the report."""
    return json.dumps(report.__dict__, indent=2)
