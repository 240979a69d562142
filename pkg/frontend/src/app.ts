/**
 * Single-page controller: hash routing, session token, thread polling while
 * the AI answer is pending, optimistic vote updates reconciled against the
 * service response.
 */

import { ApiClient, ApiError } from "./api.js";
import {
	renderAskForm,
	renderLeaderboard,
	renderLogin,
	renderQuestionList,
	renderThread,
} from "./render.js";
import type { Me, ThreadView } from "./types.js";

const POLL_INTERVAL_MS = 1000;

export class App {
	private readonly api: ApiClient;
	private me: Me | null = null;
	private thread: ThreadView | null = null;
	private pollTimer: ReturnType<typeof setTimeout> | null = null;

	constructor(
		private readonly root: HTMLElement,
		baseUrl: string,
	) {
		this.api = new ApiClient(baseUrl, sessionStorage.getItem("token"));
		this.root.addEventListener("click", (event) => void this.onClick(event));
		this.root.addEventListener("submit", (event) => void this.onSubmit(event));
		window.addEventListener("hashchange", () => void this.route());
	}

	async start(): Promise<void> {
		if (sessionStorage.getItem("token")) {
			try {
				this.me = await this.api.me();
			} catch {
				sessionStorage.removeItem("token");
				this.api.setToken(null);
			}
		}
		await this.route();
	}

	private stopPolling(): void {
		if (this.pollTimer !== null) {
			clearTimeout(this.pollTimer);
			this.pollTimer = null;
		}
	}

	private async route(): Promise<void> {
		this.stopPolling();
		if (!this.me) {
			this.root.innerHTML = renderLogin();
			return;
		}
		const hash = window.location.hash || "#/home";
		try {
			if (hash.startsWith("#/question/")) {
				await this.showThread(hash.slice("#/question/".length));
			} else if (hash.startsWith("#/ask")) {
				this.root.innerHTML = renderAskForm();
			} else if (hash.startsWith("#/leaderboard")) {
				await this.showLeaderboard();
			} else {
				await this.showHome();
			}
		} catch (error) {
			this.showError(error);
		}
	}

	private async showHome(): Promise<void> {
		if (!this.me?.cohort_id) {
			this.root.innerHTML = `<p class="error">Your account is not enrolled in a cohort.</p>`;
			return;
		}
		const listing = await this.api.listQuestions(this.me.cohort_id);
		this.root.innerHTML =
			`<nav><a href="#/ask">Ask a question</a> <a href="#/leaderboard">Leaderboard</a></nav>` +
			renderQuestionList(listing.questions);
	}

	private async showLeaderboard(): Promise<void> {
		if (!this.me?.cohort_id) return;
		const board = await this.api.leaderboard(this.me.cohort_id);
		this.root.innerHTML = `<nav><a href="#/home">Questions</a></nav>` + renderLeaderboard(board.entries);
	}

	private async showThread(questionId: string): Promise<void> {
		this.thread = await this.api.getThread(questionId);
		this.renderCurrentThread();
		this.schedulePollIfPending(questionId);
	}

	private renderCurrentThread(): void {
		if (!this.thread) return;
		this.root.innerHTML =
			`<nav><a href="#/home">← All questions</a></nav>` + renderThread(this.thread, this.me);
	}

	private schedulePollIfPending(questionId: string): void {
		if (!this.thread?.ai_pending) return;
		this.pollTimer = setTimeout(async () => {
			try {
				this.thread = await this.api.getThread(questionId);
				this.renderCurrentThread();
			} catch {
				// transient failure: keep the current view, retry on next tick
			}
			this.schedulePollIfPending(questionId);
		}, POLL_INTERVAL_MS);
	}

	private async onSubmit(event: Event): Promise<void> {
		const form = event.target as HTMLFormElement;
		if (!form.dataset.action) return;
		event.preventDefault();
		if (form.dataset.action === "login") {
			const token = (form.elements.namedItem("token") as HTMLInputElement).value.trim();
			if (!token) return this.formError(form, "Enter your access token.");
			this.api.setToken(token);
			try {
				this.me = await this.api.me();
				sessionStorage.setItem("token", token);
				window.location.hash = "#/home";
				await this.route();
			} catch (error) {
				this.api.setToken(null);
				this.formError(form, error instanceof ApiError ? error.detail : "Sign-in failed.");
			}
		} else if (form.dataset.action === "ask") {
			const body = (form.elements.namedItem("body") as HTMLTextAreaElement).value;
			if (!body.trim()) {
				return this.formError(form, "The question body must not be empty.");
			}
			const tagsRaw = (form.elements.namedItem("tags") as HTMLInputElement).value;
			const anonymous = (form.elements.namedItem("anonymous") as HTMLInputElement).checked;
			if (!this.me?.cohort_id) return;
			try {
				const posted = await this.api.ask(this.me.cohort_id, {
					body,
					tags: tagsRaw.split(",").map((t) => t.trim()).filter(Boolean),
					anonymous,
				});
				window.location.hash = `#/question/${posted.question_id}`;
			} catch (error) {
				this.formError(form, error instanceof ApiError ? error.detail : "Posting failed.");
			}
		}
	}

	private async onClick(event: Event): Promise<void> {
		const target = (event.target as HTMLElement).closest<HTMLElement>("[data-action]");
		if (!target) return;
		const action = target.dataset.action;
		if (action === "open-thread" && target.dataset.questionId) {
			window.location.hash = `#/question/${target.dataset.questionId}`;
		} else if (action === "vote" && target.dataset.answerId) {
			await this.castVote(target.dataset.answerId, target.dataset.direction as "up" | "down");
		} else if (action === "accept" && target.dataset.answerId && this.thread) {
			try {
				await this.api.accept(this.thread.question.question_id, target.dataset.answerId);
				await this.showThread(this.thread.question.question_id);
			} catch (error) {
				this.showInlineError(error);
			}
		}
	}

	private async castVote(answerId: string, direction: "up" | "down"): Promise<void> {
		if (!this.thread) return;
		const answer = this.thread.answers.find((a) => a.answer_id === answerId);
		if (!answer) return;
		// Optimistic bump, then reconcile with the tallies the service returns.
		const saved = { upvotes: answer.upvotes, downvotes: answer.downvotes };
		if (direction === "up") answer.upvotes += 1;
		else answer.downvotes += 1;
		this.renderCurrentThread();
		try {
			const result = await this.api.vote(answerId, direction);
			answer.upvotes = result.upvotes;
			answer.downvotes = result.downvotes;
		} catch (error) {
			answer.upvotes = saved.upvotes;
			answer.downvotes = saved.downvotes;
			this.showInlineError(error);
		}
		this.renderCurrentThread();
	}

	private formError(form: HTMLFormElement, message: string): void {
		const slot = form.querySelector<HTMLElement>(".form-error");
		if (slot) {
			slot.textContent = message;
			slot.hidden = false;
		}
	}

	private showInlineError(error: unknown): void {
		const message = error instanceof ApiError ? error.detail : "Request failed; please retry.";
		const banner = document.createElement("p");
		banner.className = "inline-error";
		banner.textContent = message;
		this.root.prepend(banner);
		setTimeout(() => banner.remove(), 4000);
	}

	private showError(error: unknown): void {
		if (error instanceof ApiError) {
			this.root.innerHTML = `<p class="error">HTTP ${error.status}: ${error.detail}</p>`;
		} else {
			this.root.innerHTML =
				`<div class="retry-banner">Service unreachable. ` +
				`<button data-action="retry" onclick="location.reload()">Retry</button></div>`;
		}
	}
}
