/**
 * Typed fetch client for the forum service. One method per endpoint;
 * non-2xx responses become ApiError with the status and server detail.
 */

import type {
	AnswerView,
	LeaderboardEntry,
	Me,
	PostedQuestion,
	QuestionListItem,
	ThreadView,
	VoteResult,
} from "./types.js";

export class ApiError extends Error {
	constructor(
		public readonly status: number,
		public readonly detail: string,
	) {
		super(`HTTP ${status}: ${detail}`);
	}
}

export interface AskPayload {
	body: string;
	tags?: string[];
	anonymous?: boolean;
	attachments?: string[];
}

export class ApiClient {
	constructor(
		private readonly baseUrl: string,
		private token: string | null = null,
	) {}

	setToken(token: string | null): void {
		this.token = token;
	}

	private async request<T>(method: string, path: string, body?: unknown): Promise<T> {
		const headers: Record<string, string> = {};
		if (body !== undefined) headers["Content-Type"] = "application/json";
		if (this.token) headers["Authorization"] = `Bearer ${this.token}`;
		const response = await fetch(this.baseUrl + path, {
			method,
			headers,
			body: body === undefined ? undefined : JSON.stringify(body),
		});
		if (!response.ok) {
			let detail = response.statusText;
			try {
				const payload = (await response.json()) as { detail?: string };
				if (payload.detail) detail = payload.detail;
			} catch {
				// non-JSON error body; keep the status text
			}
			throw new ApiError(response.status, detail);
		}
		return (await response.json()) as T;
	}

	health(): Promise<{ status: string; passages: number }> {
		return this.request("GET", "/health");
	}

	me(): Promise<Me> {
		return this.request("GET", "/me");
	}

	createCohort(name: string, members: { user_id: string; display_name: string; role: string }[]) {
		return this.request<{ cohort_id: string }>("POST", "/cohorts", { name, members });
	}

	listQuestions(cohortId: string): Promise<{ questions: QuestionListItem[] }> {
		return this.request("GET", `/cohorts/${cohortId}/questions`);
	}

	getThread(questionId: string): Promise<ThreadView> {
		return this.request("GET", `/questions/${questionId}`);
	}

	ask(cohortId: string, payload: AskPayload): Promise<PostedQuestion> {
		return this.request("POST", `/cohorts/${cohortId}/questions`, payload);
	}

	postAnswer(questionId: string, body: string): Promise<AnswerView> {
		return this.request("POST", `/questions/${questionId}/answers`, { body });
	}

	vote(answerId: string, direction: "up" | "down"): Promise<VoteResult> {
		return this.request("POST", `/answers/${answerId}/vote`, { direction });
	}

	accept(questionId: string, answerId: string): Promise<{ accepted_answer_id: string }> {
		return this.request("POST", `/questions/${questionId}/accept`, { answer_id: answerId });
	}

	leaderboard(cohortId: string, n = 10): Promise<{ entries: LeaderboardEntry[] }> {
		return this.request("GET", `/cohorts/${cohortId}/leaderboard?n=${n}`);
	}
}
