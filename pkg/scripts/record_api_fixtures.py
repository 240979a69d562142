#!/usr/bin/env python3
"""Record real service responses as JSON fixtures for the web client's tests.

Stands the service up in-process with the stub backend, drives a session that
produces an accepted AI answer, an anonymous question, and a leaderboard with
gold, silver, and bronze tiers, then saves selected GET responses under
frontend/tests/fixtures/.
"""

from __future__ import annotations

import json
import time
from pathlib import Path
from tempfile import TemporaryDirectory

from fastapi.testclient import TestClient

from tutorforum.corpus import doc_titles, ingest_corpus, load_corpus_file
from tutorforum.index import build_index, save_index
from tutorforum.service import ServiceConfig, build_app

ROOT = Path(__file__).resolve().parents[1]
OUT = ROOT / "frontend" / "tests" / "fixtures"

N_USERS = 12


def auth(user: str) -> dict:
    return {"Authorization": f"Bearer tok-{user}"}


def wait_ai(client: TestClient, question_id: str) -> dict:
    deadline = time.monotonic() + 15
    while time.monotonic() < deadline:
        thread = client.get(f"/questions/{question_id}").json()
        if not thread["ai_pending"]:
            return thread
        time.sleep(0.05)
    raise RuntimeError(f"no AI answer for {question_id}")


def main() -> None:
    OUT.mkdir(parents=True, exist_ok=True)
    with TemporaryDirectory() as tmp:
        tmp_path = Path(tmp)
        docs = load_corpus_file(ROOT / "fixtures" / "course_corpus.jsonl")
        save_index(build_index(ingest_corpus(docs), doc_titles=doc_titles(docs)), tmp_path / "index")
        data_dir = tmp_path / "data"
        data_dir.mkdir()
        tokens = {f"tok-u{i}": f"u{i}" for i in range(N_USERS)}
        (data_dir / "tokens.json").write_text(json.dumps(tokens))
        config = ServiceConfig(index_dir=tmp_path / "index", data_dir=data_dir)

        with TestClient(build_app(config)) as client:
            members = [
                {"user_id": f"u{i}", "display_name": f"User {i}", "role": "facilitator" if i < 2 else "learner"}
                for i in range(N_USERS)
            ]
            cohort = client.post(
                "/cohorts", json={"name": "Fixture cohort", "members": members}, headers=auth("u0")
            ).json()["cohort_id"]

            def ask(user: str, body: str, **extra) -> str:
                response = client.post(
                    f"/cohorts/{cohort}/questions", json={"body": body, **extra}, headers=auth(user)
                )
                response.raise_for_status()
                return response.json()["question_id"]

            def answer(question_id: str, user: str, body: str) -> str:
                return client.post(
                    f"/questions/{question_id}/answers", json={"body": body}, headers=auth(user)
                ).json()["answer_id"]

            def upvote(answer_id: str, voters: list[str]) -> None:
                for voter in voters:
                    client.post(
                        f"/answers/{answer_id}/vote", json={"direction": "up"}, headers=auth(voter)
                    ).raise_for_status()

            # Main thread: AI answer accepted and upvoted, one human answer downvoted once.
            main_q = ask("u2", "How do I declare a variable in my sketch?", tags=["lesson-1"])
            thread = wait_ai(client, main_q)
            ai_answer_id = thread["answers"][0]["answer_id"]
            upvote(ai_answer_id, ["u3", "u4", "u5"])
            human_id = answer(main_q, "u6", "Write the type, the name, then the value.")
            client.post(f"/answers/{human_id}/vote", json={"direction": "down"}, headers=auth("u7"))
            client.post(
                f"/questions/{main_q}/accept", json={"answer_id": ai_answer_id}, headers=auth("u2")
            ).raise_for_status()

            # Anonymous question with its AI answer.
            anon_q = ask("u3", "Pourquoi mon devoir plante-t-il quand j'ajoute une boucle ?", anonymous=True)
            wait_ai(client, anon_q)

            # Score engineering for badge tiers.
            # gold u1: 5 accepted answers + 20 answer upvotes -> 15 + 40 = 55
            for n in range(5):
                qid = ask("u8", f"Gold scoring question {n}?")
                aid = answer(qid, "u1", "A very helpful explanation.")
                upvote(aid, ["u3", "u4", "u5", "u6"])
                client.post(f"/questions/{qid}/accept", json={"answer_id": aid}, headers=auth("u8"))
            # silver u9: 2 accepted + 7 upvotes -> 6 + 14 = 20
            for n in range(2):
                qid = ask("u10", f"Silver scoring question {n}?")
                aid = answer(qid, "u9", "Another helpful explanation.")
                upvote(aid, ["u3", "u4", "u5"] if n == 0 else ["u3", "u4", "u5", "u6"])
                client.post(f"/questions/{qid}/accept", json={"answer_id": aid}, headers=auth("u10"))
            # bronze u11: 1 accepted + 1 upvote -> 5
            qid = ask("u4", "Bronze scoring question?")
            aid = answer(qid, "u11", "Short but useful.")
            upvote(aid, ["u5"])
            client.post(f"/questions/{qid}/accept", json={"answer_id": aid}, headers=auth("u4"))

            fixtures = {
                "thread_accepted.json": client.get(f"/questions/{main_q}").json(),
                "thread_anonymous.json": client.get(f"/questions/{anon_q}").json(),
                "leaderboard.json": client.get(f"/cohorts/{cohort}/leaderboard", params={"n": 6}).json(),
                "questions.json": client.get(f"/cohorts/{cohort}/questions").json(),
                "me.json": client.get("/me", headers=auth("u2")).json(),
            }
            for name, payload in fixtures.items():
                (OUT / name).write_text(json.dumps(payload, indent=2, ensure_ascii=False) + "\n", encoding="utf-8")
                print("wrote", OUT / name)


if __name__ == "__main__":
    main()
