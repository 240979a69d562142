/**
 * Live UI contract test: spin up the stub-backed service and drive the whole
 * ask -> AI answer -> vote -> accept flow through the same client and
 * renderers the browser app uses.
 */

import { spawn, spawnSync, type ChildProcess } from "node:child_process";
import { mkdtempSync, rmSync, writeFileSync } from "node:fs";
import { createServer } from "node:net";
import { tmpdir } from "node:os";
import { dirname, join, resolve } from "node:path";
import { fileURLToPath } from "node:url";
import { afterAll, beforeAll, describe, expect, it } from "vitest";

import { ApiClient, ApiError } from "../src/api.js";
import { renderLeaderboard, renderThread } from "../src/render.js";
import type { Me, ThreadView } from "../src/types.js";

const REPO_ROOT = resolve(dirname(fileURLToPath(import.meta.url)), "../..");
const PYTHON = process.env.PYTHON ?? "python3";

const TOKENS: Record<string, string> = {
	"tok-asker": "asker",
	"tok-peer": "peer",
	"tok-fac": "fac",
};

let workDir: string;
let server: ChildProcess | null = null;
let baseUrl: string;

function freePort(): Promise<number> {
	return new Promise((resolvePort, reject) => {
		const probe = createServer();
		probe.once("error", reject);
		probe.listen(0, "127.0.0.1", () => {
			const address = probe.address();
			if (address === null || typeof address === "string") {
				reject(new Error("no port"));
				return;
			}
			probe.close(() => resolvePort(address.port));
		});
	});
}

async function waitForHealth(client: ApiClient, timeoutMs: number): Promise<void> {
	const deadline = Date.now() + timeoutMs;
	let lastError: unknown = null;
	while (Date.now() < deadline) {
		try {
			await client.health();
			return;
		} catch (error) {
			lastError = error;
			await new Promise((r) => setTimeout(r, 150));
		}
	}
	throw new Error(`service did not become healthy: ${lastError}`);
}

async function waitForAiAnswer(client: ApiClient, questionId: string): Promise<ThreadView> {
	const deadline = Date.now() + 20_000;
	while (Date.now() < deadline) {
		const thread = await client.getThread(questionId);
		if (!thread.ai_pending) return thread;
		await new Promise((r) => setTimeout(r, 100));
	}
	throw new Error(`AI answer for ${questionId} never arrived`);
}

function clientFor(token: string | null): ApiClient {
	return new ApiClient(baseUrl, token);
}

beforeAll(async () => {
	workDir = mkdtempSync(join(tmpdir(), "forum-live-"));
	const indexDir = join(workDir, "index");
	const dataDir = join(workDir, "data");

	const build = spawnSync(
		PYTHON,
		[
			"-m",
			"tutorforum.cli",
			"index",
			"build",
			"--corpus",
			join(REPO_ROOT, "fixtures", "course_corpus.jsonl"),
			"--out",
			indexDir,
		],
		{ cwd: REPO_ROOT, encoding: "utf-8" },
	);
	if (build.status !== 0) {
		throw new Error(`index build failed: ${build.stderr}`);
	}

	spawnSync("mkdir", ["-p", dataDir]);
	writeFileSync(join(dataDir, "tokens.json"), JSON.stringify(TOKENS));

	const port = await freePort();
	baseUrl = `http://127.0.0.1:${port}`;
	const configPath = join(workDir, "service.conf");
	writeFileSync(
		configPath,
		[
			`index_dir = ${indexDir}`,
			`data_dir = ${dataDir}`,
			`listen_address = 127.0.0.1:${port}`,
			`backend = stub`,
			`ai_answer_concurrency = 2`,
			"",
		].join("\n"),
	);

	server = spawn(PYTHON, ["-m", "tutorforum.cli", "serve", "--config", configPath], {
		cwd: REPO_ROOT,
		stdio: ["ignore", "pipe", "pipe"],
	});
	await waitForHealth(clientFor(null), 30_000);
}, 60_000);

afterAll(() => {
	if (server && !server.killed) server.kill("SIGTERM");
	if (workDir) rmSync(workDir, { recursive: true, force: true });
});

describe("live forum flow", () => {
	let cohortId: string;
	let questionId: string;
	let aiAnswerId: string;
	let me: Me;

	it("creates the cohort roster", async () => {
		const facilitator = clientFor("tok-fac");
		const created = await facilitator.createCohort("Live cohort", [
			{ user_id: "asker", display_name: "Ama", role: "learner" },
			{ user_id: "peer", display_name: "Kofi", role: "learner" },
			{ user_id: "fac", display_name: "Dr. Mensah", role: "facilitator" },
		]);
		cohortId = created.cohort_id;
		expect(cohortId).toBeTruthy();
	});

	it("asks a question and receives exactly one AI answer with sources", async () => {
		const asker = clientFor("tok-asker");
		me = await asker.me();
		const posted = await asker.ask(cohortId, {
			body: "How do I declare a variable in my sketch?",
			tags: ["lesson-1"],
		});
		questionId = posted.question_id;
		expect(posted.detected_language).toBe("en");

		const thread = await waitForAiAnswer(clientFor(null), questionId);
		const aiAnswers = thread.answers.filter((a) => a.author.role === "ai");
		expect(aiAnswers.length).toBe(1);
		aiAnswerId = aiAnswers[0].answer_id;
		expect(aiAnswers[0].citations.length).toBeGreaterThan(0);

		const html = renderThread(thread, me);
		expect(html).toContain("AI facilitator");
		expect(html).toContain('<div class="sources">');
		expect(html).toContain('data-action="accept"'); // asker sees the control
	}, 30_000);

	it("votes optimistically and reconciles to service tallies on re-click", async () => {
		const peer = clientFor("tok-peer");
		const first = await peer.vote(aiAnswerId, "up");
		expect(first.upvotes).toBe(1);
		// Re-click of the same direction: replacement semantics keep the tally.
		const second = await peer.vote(aiAnswerId, "up");
		expect(second.upvotes).toBe(1);
		expect(second.downvotes).toBe(0);

		const thread = await clientFor(null).getThread(questionId);
		const html = renderThread(thread, null);
		expect(html).toContain('<span class="upvotes">1</span>');
	});

	it("rejects self-votes and non-asker accepts", async () => {
		const human = await clientFor("tok-peer").postAnswer(questionId, "Start with the type.");
		await expect(clientFor("tok-peer").vote(human.answer_id, "up")).rejects.toMatchObject({
			status: 409,
		});
		await expect(
			clientFor("tok-fac").accept(questionId, human.answer_id),
		).rejects.toMatchObject({ status: 403 });
	});

	it("lets the asker accept the AI answer, rendering one accepted marker", async () => {
		await clientFor("tok-asker").accept(questionId, aiAnswerId);
		const thread = await clientFor(null).getThread(questionId);
		const html = renderThread(thread, me);
		expect(html.split("accepted-marker").length - 1).toBe(1);
		expect(thread.answers.filter((a) => a.accepted).length).toBe(1);
	});

	it("renders anonymous questions without any author identity", async () => {
		const posted = await clientFor("tok-asker").ask(cohortId, {
			body: "Why does my assignment crash on my phone?",
			anonymous: true,
		});
		const thread = await waitForAiAnswer(clientFor(null), posted.question_id);
		const html = renderThread(thread, null);
		expect(html).toContain("Anonymous");
		expect(html).not.toContain("asker");
		expect(html).not.toContain("Ama");
	}, 30_000);

	it("renders the leaderboard with badge tiers from service data", async () => {
		const board = await clientFor(null).leaderboard(cohortId);
		expect(board.entries.length).toBeGreaterThan(0);
		expect(board.entries.every((e) => e.role !== "ai")).toBe(true);
		const html = renderLeaderboard(board.entries);
		for (const entry of board.entries) {
			expect(html).toContain(`<td class="score">${entry.helpfulness_score}</td>`);
		}
		// The accepted AI answer credits the assistant, not any human, so the
		// visible badges stay whatever the service computed for humans.
		const ama = board.entries.find((e) => e.user_id === "asker");
		expect(ama).toBeDefined();
	});

	it("surfaces ApiError for unauthenticated mutations", async () => {
		await expect(
			clientFor(null).ask(cohortId, { body: "no token" }),
		).rejects.toBeInstanceOf(ApiError);
	});
});
