// @vitest-environment jsdom
import { afterEach, describe, expect, it, vi } from "vitest";
import { ExplorerClient } from "../src/api.js";
import { encodeText } from "../src/bytes.js";
import { WindowGrid } from "../src/grid.js";
import { MockService } from "./mockservice.js";
import type { WindowPayload } from "../src/types.js";

const SAMPLE = "aacaacaacbdccccc";

async function setup(viewport = 8) {
  const mock = new MockService();
  vi.stubGlobal("fetch", mock.handler());
  const client = new ExplorerClient();
  const summary = await client.createSession(encodeText(SAMPLE));
  const info = await client.addTransform(summary.session_id, "ascii");
  const grid = new WindowGrid({
    m: summary.m,
    viewportRows: viewport,
    viewportCols: viewport,
    fetchWindow: (req, signal) =>
      client.getWindow(summary.session_id, info.id, req, signal),
  });
  document.body.appendChild(grid.root);
  await grid.refresh();
  return { mock, grid, m: summary.m };
}

function rowText(grid: WindowGrid, row: number): string {
  const el = grid.root.querySelector(`.grid-canvas [data-row="${row}"]`);
  return el?.textContent ?? "";
}

function lcolText(grid: WindowGrid, row: number): string {
  const el = grid.root.querySelector(`.grid-layer .lcol-row[data-row="${row}"]`);
  return el?.textContent ?? "";
}

afterEach(() => {
  vi.unstubAllGlobals();
  document.body.textContent = "";
});

describe("WindowGrid", () => {
  it("renders the top of the matrix after the first refresh", async () => {
    const { grid } = await setup();
    expect(rowText(grid, 0).startsWith("$aacaacaac")).toBe(true);
    expect(rowText(grid, 1).startsWith("aacaacaac")).toBe(true);
    // pinned transform column for the first three rows
    expect(lcolText(grid, 0)).toBe("c");
    expect(lcolText(grid, 1)).toBe("$");
    expect(lcolText(grid, 2)).toBe("c");
  });

  it("never requests more than the viewport plus one page", async () => {
    const { mock, grid, m } = await setup(8);
    await grid.scrollToRow(9);
    await grid.scrollToRow(m - 1);
    await grid.scrollToCol(12);
    expect(mock.windowLog.length).toBeGreaterThan(1);
    for (const entry of mock.windowLog) {
      expect(entry.height).toBeLessThanOrEqual(16);
      expect(entry.width).toBeLessThanOrEqual(16);
    }
  });

  it("scrolls a target row into the viewport", async () => {
    const { grid } = await setup(8);
    expect(grid.rowVisible(14)).toBe(false);
    await grid.scrollToRow(14);
    expect(grid.topRow).toBe(10);
    expect(grid.rowVisible(14)).toBe(true);
    expect(rowText(grid, 14)).not.toBe("");
  });

  it("refetches when the viewport scrolls", async () => {
    const { mock, grid } = await setup(8);
    const before = mock.windowLog.length;
    const viewport = grid.root.querySelector(".grid-viewport") as HTMLElement;
    viewport.scrollTop = 6 * 22;
    viewport.dispatchEvent(new Event("scroll"));
    await grid.idle();
    expect(mock.windowLog.length).toBeGreaterThan(before);
    expect(grid.topRow).toBe(6);
    // pinned layers track the vertical offset
    const layer = grid.root.querySelector(
      ".grid-gutter .grid-layer"
    ) as HTMLElement;
    expect(layer.style.transform).toBe(`translateY(${-6 * 22}px)`);
  });

  it("marks highlighted, marked, and cursor rows", async () => {
    const { grid } = await setup();
    grid.setHighlights(new Set([4]));
    grid.setMarks(new Map([[6, "mark-breaker"]]));
    grid.setCursor(2);
    const row4 = grid.root.querySelector(`.grid-canvas [data-row="4"]`);
    const row6 = grid.root.querySelector(`.grid-canvas [data-row="6"]`);
    const row2 = grid.root.querySelector(`.grid-canvas [data-row="2"]`);
    expect(row4?.classList.contains("hl")).toBe(true);
    expect(row6?.classList.contains("mark-breaker")).toBe(true);
    expect(row2?.classList.contains("cursor")).toBe(true);
    // the pinned column mirrors the row state
    const l4 = grid.root.querySelector(`.lcol-row[data-row="4"]`);
    expect(l4?.classList.contains("hl")).toBe(true);
    grid.setHighlights(new Set());
    expect(row4?.classList.contains("hl")).toBe(false);
  });

  it("keeps row classes across refetches", async () => {
    const { grid } = await setup();
    grid.setHighlights(new Set([4]));
    await grid.scrollToRow(4);
    const row4 = grid.root.querySelector(`.grid-canvas [data-row="4"]`);
    expect(row4?.classList.contains("hl")).toBe(true);
  });

  it("aborts a stale request when a newer one starts", async () => {
    const seen: AbortSignal[] = [];
    let release: (() => void) | null = null;
    const payload: WindowPayload = {
      top_row: 0,
      left_col: 0,
      height: 1,
      width: 1,
      m: 4,
      rows: [btoa("a")],
      l_column: btoa("a"),
      truncated: [false],
    };
    const grid = new WindowGrid({
      m: 4,
      viewportRows: 2,
      viewportCols: 2,
      fetchWindow: (req, signal) => {
        seen.push(signal);
        if (seen.length === 1) {
          return new Promise((resolve) => {
            release = () => resolve(payload);
          });
        }
        return Promise.resolve(payload);
      },
    });
    const first = grid.refresh();
    const second = grid.refresh();
    expect(seen[0].aborted).toBe(true);
    expect(seen[1].aborted).toBe(false);
    release?.();
    await Promise.all([first, second]);
    // the aborted response must not have clobbered the newer render
    expect(grid.root.querySelectorAll(".grid-canvas .grid-row").length).toBe(1);
  });

  it("clamps fetch bounds at the bottom edge", async () => {
    const { mock, grid, m } = await setup(8);
    await grid.scrollToRow(m - 1);
    const last = mock.windowLog[mock.windowLog.length - 1];
    expect(last.topRow + last.height).toBeLessThanOrEqual(m);
    expect(last.leftCol + last.width).toBeLessThanOrEqual(m);
  });

  it("routes fetch errors to the error hook", async () => {
    const errors: unknown[] = [];
    const grid = new WindowGrid({
      m: 4,
      viewportRows: 2,
      viewportCols: 2,
      fetchWindow: () => Promise.reject(new Error("boom")),
      onError: (err) => errors.push(err),
    });
    await grid.scrollToRow(2).catch(() => undefined);
    await grid.idle();
    expect(errors.length).toBe(1);
  });
});
