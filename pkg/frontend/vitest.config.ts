import { defineConfig } from 'vitest/config';

export default defineConfig({
  test: {
    environment: 'node',
    include: ['tests/**/*.test.ts'],
    testTimeout: 60000,
    hookTimeout: 60000,
    // the live-server suite shares one spawned backend; keep files sequential
    fileParallelism: false,
  },
});
