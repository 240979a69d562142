import { defineConfig } from "vitest/config";

export default defineConfig({
	test: {
		include: ["tests/**/*.test.ts"],
		testTimeout: 30_000,
		hookTimeout: 60_000,
		// live.test.ts drives one service session; keep files sequential.
		fileParallelism: false,
		sequence: { concurrent: false },
	},
});
