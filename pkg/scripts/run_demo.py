#!/usr/bin/env python3
"""End-to-end demo on the shipped fixtures, no service required.

Builds the index from the fixture corpus, answers one English and one French
question with the stub backend, then walks a small forum session (question,
AI answer, human answer, votes, acceptance, leaderboard) and prints the
resulting thread and board.
"""

from __future__ import annotations

import json
from pathlib import Path

from tutorforum.corpus import doc_titles, ingest_corpus, load_corpus_file
from tutorforum.forum import Forum, Role
from tutorforum.index import build_index
from tutorforum.ragcore import answer_question

ROOT = Path(__file__).resolve().parents[1]


def main() -> None:
    docs = load_corpus_file(ROOT / "fixtures" / "course_corpus.jsonl")
    index = build_index(ingest_corpus(docs), doc_titles=doc_titles(docs))
    print(f"index: {len(index)} passages\n")

    for question in (
        "How do I declare a variable in my sketch?",
        "Comment fonctionne une boucle while ?",
    ):
        answer = answer_question(index, question)
        print(f"Q: {question}")
        print(answer.body)
        print()

    forum = Forum()
    cohort = forum.create_cohort(
        "Demo cohort",
        [
            ("ama", "Ama", Role.LEARNER),
            ("kofi", "Kofi", Role.LEARNER),
            ("mensah", "Dr. Mensah", Role.FACILITATOR),
        ],
    )
    question = forum.post_question(
        cohort.cohort_id, "ama", "What is the deadline for the assignment?", tags=("admin",)
    )
    forum.post_ai_answer(question.question_id, index)
    human = forum.post_human_answer(question.question_id, "mensah", "Last day of the month.")
    forum.vote("ama", human.answer_id, "up")
    forum.vote("kofi", human.answer_id, "up")
    forum.accept_answer("ama", question.question_id, human.answer_id)

    print("--- thread ---")
    print(json.dumps(forum.thread_view(question.question_id), indent=2, ensure_ascii=False))
    print("--- leaderboard ---")
    for user in forum.leaderboard(cohort.cohort_id, 5):
        print(f"{user.display_name:<12} score={user.helpfulness_score:<3} badge={user.badge.value}")


if __name__ == "__main__":
    main()
