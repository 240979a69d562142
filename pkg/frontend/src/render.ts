/**
 * Pure HTML-string renderers. Every number and name shown comes verbatim
 * from a service payload; the renderers format, they never compute.
 * String output keeps them testable without a DOM.
 */

import type {
	AnswerView,
	LeaderboardEntry,
	Me,
	QuestionListItem,
	QuestionView,
	ThreadView,
} from "./types.js";

export function escapeHtml(text: string): string {
	return text
		.replace(/&/g, "&amp;")
		.replace(/</g, "&lt;")
		.replace(/>/g, "&gt;")
		.replace(/"/g, "&quot;")
		.replace(/'/g, "&#39;");
}

/** Split an answer body into prose and the trailing source lines, if any. */
export function splitSources(body: string): { prose: string; sources: string[] } {
	const marker = "\nSources:\n";
	const at = body.lastIndexOf(marker);
	if (at < 0) return { prose: body, sources: [] };
	const prose = body.slice(0, at).trimEnd();
	const sources = body
		.slice(at + marker.length)
		.split("\n")
		.filter((line) => line.trim().length > 0);
	return { prose, sources };
}

function paragraphs(text: string): string {
	return escapeHtml(text).replace(/\n/g, "<br>");
}

const BADGE_GLYPHS: Record<string, string> = {
	gold: "\u{1F3C5} gold",
	silver: "\u{1F948} silver",
	bronze: "\u{1F949} bronze",
	none: "",
};

export function renderBadge(badge: string): string {
	const glyph = BADGE_GLYPHS[badge] ?? "";
	return glyph ? `<span class="badge badge-${badge}">${glyph}</span>` : "";
}

export function renderQuestionCard(question: QuestionView): string {
	const author = question.author.user_id
		? `<a class="author" data-user-id="${escapeHtml(question.author.user_id)}">${escapeHtml(question.author.display_name)}</a>`
		: `<span class="author anonymous">${escapeHtml(question.author.display_name)}</span>`;
	const tags = question.tags
		.map((tag) => `<span class="tag">${escapeHtml(tag)}</span>`)
		.join(" ");
	return [
		`<article class="question" data-question-id="${escapeHtml(question.question_id)}">`,
		`<header>${author} <span class="lang">${question.detected_language}</span> ${tags}</header>`,
		`<p class="body">${paragraphs(question.body)}</p>`,
		`<footer><span class="question-upvotes">▲ ${question.upvotes}</span></footer>`,
		`</article>`,
	].join("\n");
}

export function renderAnswer(answer: AnswerView, asker: boolean): string {
	const { prose, sources } = splitSources(answer.body);
	const aiLabel =
		answer.author.role === "ai"
			? `<span class="ai-label">AI facilitator</span>`
			: `<span class="role-label">${escapeHtml(answer.author.role)}</span>`;
	const acceptedMarker = answer.accepted
		? `<span class="accepted-marker">✓ Accepted</span>`
		: "";
	const sourcesList =
		sources.length > 0
			? `<div class="sources"><h4>Sources</h4><ul>${sources
					.map((line) => `<li>${escapeHtml(line)}</li>`)
					.join("")}</ul></div>`
			: "";
	const acceptControl =
		asker && !answer.accepted
			? `<button data-action="accept" data-answer-id="${escapeHtml(answer.answer_id)}">Accept</button>`
			: "";
	return [
		`<article class="answer${answer.accepted ? " accepted" : ""}" data-answer-id="${escapeHtml(answer.answer_id)}">`,
		`<header>${escapeHtml(answer.author.display_name)} ${aiLabel} ${acceptedMarker}</header>`,
		`<p class="body">${paragraphs(prose)}</p>`,
		sourcesList,
		`<footer>`,
		`<button data-action="vote" data-direction="up" data-answer-id="${escapeHtml(answer.answer_id)}">▲ <span class="upvotes">${answer.upvotes}</span></button>`,
		`<button data-action="vote" data-direction="down" data-answer-id="${escapeHtml(answer.answer_id)}">▼ <span class="downvotes">${answer.downvotes}</span></button>`,
		acceptControl,
		`</footer>`,
		`</article>`,
	].join("\n");
}

export function renderThread(thread: ThreadView, me: Me | null): string {
	// The accept control needs the asker's identity; anonymous questions hide
	// it, so there the control stays off for everyone.
	const asker =
		me !== null &&
		!thread.question.anonymous &&
		thread.question.author.user_id === me.user_id;
	const pending = thread.ai_pending
		? `<div class="ai-pending">The AI facilitator is preparing an answer…</div>`
		: "";
	return [
		`<section class="thread">`,
		renderQuestionCard(thread.question),
		`<section class="answers">`,
		...thread.answers.map((answer) => renderAnswer(answer, asker)),
		`</section>`,
		pending,
		`</section>`,
	].join("\n");
}

export function renderQuestionList(items: QuestionListItem[]): string {
	const rows = items.map((item) => {
		const author = item.author.user_id ? item.author.display_name : "Anonymous";
		const pending = item.ai_pending ? ` <span class="ai-pending-dot">⏳</span>` : "";
		return [
			`<li data-question-id="${escapeHtml(item.question_id)}">`,
			`<a data-action="open-thread" data-question-id="${escapeHtml(item.question_id)}">${paragraphs(item.body)}</a>`,
			`<span class="meta">${escapeHtml(author)} · ${item.answer_count} answers${pending}</span>`,
			`</li>`,
		].join("");
	});
	return `<ul class="question-list">${rows.join("\n")}</ul>`;
}

export function renderLeaderboard(entries: LeaderboardEntry[]): string {
	const rows = entries.map((entry, position) =>
		[
			`<tr data-user-id="${escapeHtml(entry.user_id)}">`,
			`<td>${position + 1}</td>`,
			`<td>${escapeHtml(entry.display_name)} ${renderBadge(entry.badge)}</td>`,
			`<td class="score">${entry.helpfulness_score}</td>`,
			`</tr>`,
		].join(""),
	);
	return [
		`<table class="leaderboard">`,
		`<thead><tr><th>#</th><th>Member</th><th>Helpfulness</th></tr></thead>`,
		`<tbody>${rows.join("\n")}</tbody>`,
		`</table>`,
	].join("\n");
}

export function renderAskForm(): string {
	return [
		`<form class="ask-form" data-action="ask">`,
		`<textarea name="body" placeholder="Ask your question…"></textarea>`,
		`<input name="tags" placeholder="tags, comma separated">`,
		`<label><input type="checkbox" name="anonymous"> Ask anonymously</label>`,
		`<p class="form-error" hidden></p>`,
		`<button type="submit">Post question</button>`,
		`</form>`,
	].join("\n");
}

export function renderLogin(): string {
	return [
		`<form class="login-form" data-action="login">`,
		`<input name="token" placeholder="access token" type="password">`,
		`<p class="form-error" hidden></p>`,
		`<button type="submit">Sign in</button>`,
		`</form>`,
	].join("\n");
}
