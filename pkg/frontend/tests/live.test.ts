// Exercises a running service instance end to end, including the window
// round-trip budget on a 10 MB text. Skipped unless BWTX_SERVICE_URL points
// at a live server, so the default suite stays self-contained.
import { describe, expect, it } from "vitest";
import { ExplorerClient } from "../src/api.js";
import { encodeText } from "../src/bytes.js";

const BASE = process.env.BWTX_SERVICE_URL ?? "";
const SAMPLE = "aacaacaacbdccccc";

const LARGE_N = 10_000_000;
const WINDOW_SAMPLES = 30;
const WARMUP_CALLS = 3;
const BUDGET_MS = 100;

/** Deterministic bytes over a 16-letter alphabet, no RNG dependency. */
function syntheticText(n: number): Uint8Array {
  const out = new Uint8Array(n);
  let state = 0x2545f491;
  for (let i = 0; i < n; i++) {
    state = (Math.imul(state, 1103515245) + 12345) >>> 0;
    out[i] = 0x61 + ((state >>> 16) & 0x0f);
  }
  return out;
}

describe.skipIf(!BASE)("live service", () => {
  const client = new ExplorerClient(BASE);

  it("answers the health probe", async () => {
    expect(await client.healthz()).toBe(true);
  });

  it("serves the explorer page at the root", async () => {
    const res = await fetch(`${BASE}/`);
    expect(res.status).toBe(200);
    expect(res.headers.get("content-type")).toContain("text/html");
    const body = await res.text();
    expect(body).toContain("bwtx explorer");
    expect(body).toContain("main.js");
  });

  it("reproduces the three-ordering comparison", async () => {
    const summary = await client.createSession(encodeText(SAMPLE));
    expect(summary.size).toBe(16);
    expect(summary.m).toBe(17);

    const ascii = await client.addTransform(summary.session_id, "ascii");
    const acbd = await client.addTransform(summary.session_id, "a,c,b,d");
    const cabd = await client.addTransform(summary.session_id, "c,a,b,d");
    expect(ascii.stats.run_count).toBe(9);
    expect(acbd.stats.run_count).toBe(11);
    expect(cabd.stats.run_count).toBe(6);

    const res = await client.propagate(summary.session_id, ascii.id, 4);
    expect(res.rows).toEqual({
      [ascii.id]: 4,
      [acbd.id]: 4,
      [cabd.id]: 9,
    });
  });

  it(
    "keeps window round-trips under budget on a 10 MB text",
    { timeout: 600_000 },
    async () => {
      const summary = await client.createSession(syntheticText(LARGE_N));
      expect(summary.size).toBe(LARGE_N);
      const m = summary.m;
      const info = await client.addTransform(summary.session_id, "ascii");
      expect(info.stats.original_size).toBe(LARGE_N);

      let state = 0x1234abcd;
      const nextOrigin = () => {
        state = (Math.imul(state, 1103515245) + 12345) >>> 0;
        return state % (m - 64);
      };

      const timings: number[] = [];
      for (let i = 0; i < WARMUP_CALLS + WINDOW_SAMPLES; i++) {
        const req = {
          topRow: nextOrigin(),
          leftCol: nextOrigin(),
          height: 64,
          width: 64,
        };
        const started = performance.now();
        const win = await client.getWindow(summary.session_id, info.id, req);
        const elapsed = performance.now() - started;
        expect(win.rows.length).toBe(64);
        expect(win.top_row).toBe(req.topRow);
        if (i >= WARMUP_CALLS) {
          timings.push(elapsed);
        }
      }

      timings.sort((a, b) => a - b);
      const median = timings[Math.floor(timings.length / 2)];
      const worst = timings[timings.length - 1];
      console.log(
        `window round-trips at n=${LARGE_N}: median ${median.toFixed(1)} ms,` +
          ` worst ${worst.toFixed(1)} ms over ${timings.length} samples`
      );
      expect(median).toBeLessThan(BUDGET_MS);
      expect(worst).toBeLessThan(BUDGET_MS);
    }
  );
});
