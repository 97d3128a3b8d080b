// Plain-object config (no imports) so the globally installed vitest can
// load it even when node_modules is absent.
export default {
  test: {
    include: ["tests/**/*.test.ts"],
    testTimeout: 30000,
    hookTimeout: 60000,
  },
};
