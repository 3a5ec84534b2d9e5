import { defineConfig } from "vitest/config";

export default defineConfig({
  test: {
    environment: "jsdom",
    include: ["tests/**/*.test.ts"],
    // the e2e test boots a real service process
    testTimeout: 30000,
    hookTimeout: 60000,
  },
});
