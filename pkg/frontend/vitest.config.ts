import { defineConfig } from "vitest/config";

export default defineConfig({
  test: {
    include: ["tests/**/*.test.ts"],
    // DOM-dependent suites opt into jsdom with a per-file pragma
    environment: "node",
  },
});
