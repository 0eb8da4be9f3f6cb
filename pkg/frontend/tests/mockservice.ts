// In-memory stand-in for the bwtx service, faithful enough to drive the UI:
// it sorts the real rotation matrix, so windows, search, propagation, and
// the run statistics all come out exactly as the live server reports them.
import { toBase64 } from "../src/bytes.js";

interface MockTransform {
  id: string;
  name: string;
  order: number[];
  spec: string;
  highlights: number[];
  offsets: number[];
  rowOfOffset: number[];
  L: Uint8Array;
  runCount: number;
  rleLength: number;
}

export interface WindowLogEntry {
  tid: string;
  topRow: number;
  leftCol: number;
  height: number;
  width: number;
}

function json(body: unknown, status = 200): Response {
  return new Response(JSON.stringify(body), {
    status,
    headers: { "Content-Type": "application/json" },
  });
}

function fail(status: number, code: string, message: string): Response {
  return json({ code, message }, status);
}

export class MockService {
  sid = "a1b2c3d4e5f6";
  marker = 0x24;
  private data: Uint8Array | null = null;
  private transforms: MockTransform[] = [];
  private nextId = 1;
  windowLog: WindowLogEntry[] = [];

  get m(): number {
    return this.data ? this.data.length : 0;
  }

  /** Install as the global fetch for the duration of a test. */
  handler(): typeof fetch {
    return (input, init) => this.route(String(input), init);
  }

  private presentBytes(): number[] {
    const seen = new Set<number>();
    const data = this.data as Uint8Array;
    for (const b of data) {
      if (b !== this.marker) {
        seen.add(b);
      }
    }
    return [...seen].sort((a, b) => a - b);
  }

  private parseSpec(spec: string): number[] {
    if (spec === "ascii") {
      return this.presentBytes();
    }
    if (spec === "reverse_ascii") {
      return this.presentBytes().reverse();
    }
    const order = spec.split(",").map((f) => {
      if (f.length !== 1) {
        throw { status: 422, code: "MalformedSpec", message: `bad field ${f}` };
      }
      return f.charCodeAt(0);
    });
    const present = new Set(this.presentBytes());
    for (const b of order) {
      if (!present.has(b)) {
        throw {
          status: 422,
          code: "UnknownCharacter",
          message: `byte ${b} not in text`,
        };
      }
      present.delete(b);
    }
    if (present.size) {
      throw {
        status: 422,
        code: "MissingCharacters",
        message: `missing ${present.size} bytes`,
      };
    }
    return order;
  }

  private build(spec: string, name?: string): MockTransform {
    const data = this.data as Uint8Array;
    const m = data.length;
    const order = this.parseSpec(spec);
    const rank = new Int32Array(256).fill(-1);
    rank[this.marker] = 0;
    order.forEach((b, i) => {
      rank[b] = i + 1;
    });
    const offsets = Array.from({ length: m }, (_, i) => i);
    offsets.sort((a, b) => {
      for (let k = 0; k < m; k++) {
        const ra = rank[data[(a + k) % m]];
        const rb = rank[data[(b + k) % m]];
        if (ra !== rb) {
          return ra - rb;
        }
      }
      return 0;
    });
    const rowOfOffset = new Array<number>(m);
    offsets.forEach((off, row) => {
      rowOfOffset[off] = row;
    });
    const L = new Uint8Array(m);
    for (let row = 0; row < m; row++) {
      L[row] = data[(offsets[row] + m - 1) % m];
    }
    let runCount = 0;
    let rleLength = 0;
    let i = 0;
    while (i < m) {
      let j = i;
      while (j < m && L[j] === L[i]) {
        j++;
      }
      runCount++;
      rleLength += Math.ceil((j - i) / 255) * 2;
      i = j;
    }
    const t: MockTransform = {
      id: `t${this.nextId++}`,
      name: name || spec,
      order,
      spec: order.map((b) => String.fromCharCode(b)).join(","),
      highlights: [],
      offsets,
      rowOfOffset,
      L,
      runCount,
      rleLength,
    };
    this.transforms.push(t);
    return t;
  }

  private cellAt(t: MockTransform, row: number, col: number): number {
    const data = this.data as Uint8Array;
    return data[(t.offsets[row] + col) % data.length];
  }

  private transformSummary(t: MockTransform) {
    return {
      id: t.id,
      name: t.name,
      order: t.order,
      spec: t.spec,
      highlights: t.highlights,
      stats: {
        end_marker_used: this.marker,
        original_size: this.m - 1,
        run_count: t.runCount,
        rle_length: t.rleLength,
      },
    };
  }

  private sessionSummary() {
    const counts = new Map<number, number>();
    for (const b of this.data as Uint8Array) {
      if (b !== this.marker) {
        counts.set(b, (counts.get(b) ?? 0) + 1);
      }
    }
    return {
      session_id: this.sid,
      size: this.m - 1,
      m: this.m,
      end_marker: this.marker,
      alphabet: this.presentBytes().map((b) => ({
        byte: b,
        count: counts.get(b) ?? 0,
      })),
      window: { rows: 64, cols: 64 },
      transforms: this.transforms.map((t) => this.transformSummary(t)),
    };
  }

  private find(tid: string): MockTransform {
    const t = this.transforms.find((x) => x.id === tid);
    if (!t) {
      throw { status: 404, code: "NotFound", message: `no transform ${tid}` };
    }
    return t;
  }

  /** Direct access for assertions: where a source row lands per transform. */
  propagateRows(srcTid: string, row: number): Record<string, number> {
    const src = this.find(srcTid);
    const offset = src.offsets[row];
    const out: Record<string, number> = {};
    for (const t of this.transforms) {
      out[t.id] = t.rowOfOffset[offset];
    }
    return out;
  }

  private async route(url: string, init?: RequestInit): Promise<Response> {
    const u = new URL(url, "http://mock");
    const method = (init?.method ?? "GET").toUpperCase();
    const path = u.pathname;
    try {
      if (path === "/healthz") {
        return json({ status: "ok" });
      }
      if (path === "/sessions" && method === "POST") {
        const text = init?.body as Uint8Array;
        if (!text || !text.length) {
          return fail(400, "EmptyText", "empty input text");
        }
        const data = new Uint8Array(text.length + 1);
        data.set(text, 0);
        data[text.length] = this.marker;
        this.data = data;
        this.transforms = [];
        return json(this.sessionSummary());
      }
      if (!this.data) {
        return fail(404, "NotFound", "no session loaded");
      }
      if (path === `/sessions/${this.sid}` && method === "GET") {
        return json(this.sessionSummary());
      }
      if (path === `/sessions/${this.sid}/transforms` && method === "POST") {
        const body = JSON.parse(String(init?.body));
        const t = this.build(body.ordering, body.name);
        return json({ transform_id: t.id, ...this.transformSummary(t) });
      }
      const tmatch = new RegExp(
        `^/sessions/${this.sid}/transforms/([^/]+)/(window|search|highlights|propagate|analysis)$`
      ).exec(path);
      if (tmatch) {
        return this.routeTransform(tmatch[1], tmatch[2], u, init);
      }
      return fail(404, "NotFound", `no route ${method} ${path}`);
    } catch (err) {
      const e = err as { status?: number; code?: string; message?: string };
      if (e.status) {
        return fail(e.status, e.code ?? "Error", e.message ?? "error");
      }
      throw err;
    }
  }

  private routeTransform(
    tid: string,
    action: string,
    u: URL,
    init?: RequestInit
  ): Response {
    const t = this.find(tid);
    const m = this.m;
    if (action === "window") {
      const topRow = Number(u.searchParams.get("top_row") ?? 0);
      const leftCol = Number(u.searchParams.get("left_col") ?? 0);
      let height = Number(u.searchParams.get("height") ?? 64);
      let width = Number(u.searchParams.get("width") ?? 64);
      if (height > 1024 || width > 1024) {
        return fail(422, "WindowTooLarge", "window dimensions capped at 1024");
      }
      if (topRow < 0 || topRow >= m || leftCol < 0 || leftCol >= m) {
        return fail(416, "OutOfBounds", "window origin outside matrix");
      }
      height = Math.min(height, m - topRow);
      width = Math.min(width, m - leftCol);
      this.windowLog.push({ tid, topRow, leftCol, height, width });
      const rows: string[] = [];
      for (let i = 0; i < height; i++) {
        const cells = new Uint8Array(width);
        for (let c = 0; c < width; c++) {
          cells[c] = this.cellAt(t, topRow + i, leftCol + c);
        }
        rows.push(toBase64(cells));
      }
      return json({
        top_row: topRow,
        left_col: leftCol,
        height,
        width,
        m,
        rows,
        l_column: toBase64(t.L.subarray(topRow, topRow + height)),
        truncated: new Array(height).fill(leftCol + width >= m),
      });
    }
    if (action === "search") {
      const pattern = u.searchParams.get("pattern") ?? "";
      if (!pattern) {
        return fail(422, "ValidationError", "pattern required");
      }
      const needle = new TextEncoder().encode(pattern);
      const matches = (row: number) => {
        if (needle.length > m) {
          return false;
        }
        for (let k = 0; k < needle.length; k++) {
          if (this.cellAt(t, row, k) !== needle[k]) {
            return false;
          }
        }
        return true;
      };
      let lo = 0;
      while (lo < m && !matches(lo)) {
        lo++;
      }
      let hi = lo;
      while (hi < m && matches(hi)) {
        hi++;
      }
      const fromRaw = u.searchParams.get("from_row");
      const direction = u.searchParams.get("direction") ?? "forward";
      let row: number | null;
      if (lo === hi) {
        row = null;
      } else if (fromRaw === null) {
        row = direction === "forward" ? lo : hi - 1;
      } else {
        const from = Number(fromRaw);
        if (direction === "forward") {
          const cand = Math.max(lo, from + 1);
          row = cand < hi ? cand : null;
        } else {
          const cand = Math.min(hi - 1, from - 1);
          row = cand >= lo ? cand : null;
        }
      }
      return json({ row, interval: [lo, hi] });
    }
    if (action === "highlights") {
      const body = JSON.parse(String(init?.body));
      const row = body.row as number;
      if (!Number.isInteger(row) || row < 0 || row >= m) {
        return fail(416, "OutOfBounds", `row must be in 0..${m - 1}`);
      }
      const marked = new Set(t.highlights);
      if (body.on ?? true) {
        marked.add(row);
      } else {
        marked.delete(row);
      }
      t.highlights = [...marked].sort((a, b) => a - b);
      return json({ transform_id: t.id, highlights: t.highlights });
    }
    if (action === "propagate") {
      const body = JSON.parse(String(init?.body));
      const row = body.row as number;
      if (!Number.isInteger(row) || row < 0 || row >= m) {
        return fail(416, "OutOfBounds", `row must be in 0..${m - 1}`);
      }
      const rows = this.propagateRows(tid, row);
      const highlights: Record<string, number[]> = {};
      for (const other of this.transforms) {
        const marked = new Set(other.highlights);
        marked.add(rows[other.id]);
        other.highlights = [...marked].sort((a, b) => a - b);
        highlights[other.id] = other.highlights;
      }
      return json({ rows, highlights });
    }
    if (action === "analysis") {
      const kind = u.searchParams.get("kind");
      if (kind === "run_breakers") {
        const items = [];
        for (let j = 1; j + 1 < m; j++) {
          if (t.L[j - 1] === t.L[j + 1] && t.L[j] !== t.L[j - 1]) {
            items.push({
              row: j,
              breaker: t.L[j],
              flanked_by: t.L[j - 1],
            });
          }
        }
        return json({ kind, items });
      }
      if (kind === "potential_runs") {
        return json({ kind, items: this.potentialRuns(t) });
      }
      return fail(422, "ValidationError", `kind ${kind} not mocked`);
    }
    return fail(404, "NotFound", `no action ${action}`);
  }

  /** Same grouping rule as the service: absorb runs while gaps stay small. */
  private potentialRuns(t: MockTransform, maxGap = 4) {
    const m = this.m;
    const runs: [number, number][] = [];
    let i = 0;
    while (i < m) {
      let j = i;
      while (j < m && t.L[j] === t.L[i]) {
        j++;
      }
      runs.push([i, j]);
      i = j;
    }
    const byChar = new Map<number, [number, number][]>();
    for (const [s, e] of runs) {
      const ch = t.L[s];
      if (!byChar.has(ch)) {
        byChar.set(ch, []);
      }
      (byChar.get(ch) as [number, number][]).push([s, e]);
    }
    const groups = [];
    for (const [ch, chRuns] of byChar) {
      const chains: [number, number][][] = [[chRuns[0]]];
      let gapSum = 0;
      for (let k = 1; k < chRuns.length; k++) {
        const gap = chRuns[k][0] - chRuns[k - 1][1];
        if (gapSum + gap <= maxGap) {
          chains[chains.length - 1].push(chRuns[k]);
          gapSum += gap;
        } else {
          chains.push([chRuns[k]]);
          gapSum = 0;
        }
      }
      let multi = chains.filter((c) => c.length >= 2);
      if (!multi.length) {
        multi = [
          chains.reduce((a, b) =>
            b[0][1] - b[0][0] > a[0][1] - a[0][0] ? b : a
          ),
        ];
      }
      for (const chain of multi) {
        const gaps: [number, number][] = [];
        for (let k = 1; k < chain.length; k++) {
          gaps.push([chain[k - 1][1], chain[k][0]]);
        }
        groups.push({
          character: ch,
          member_runs: chain,
          gaps,
          total_length: chain.reduce((acc, [s, e]) => acc + (e - s), 0),
          total_gap: gaps.reduce((acc, [a, b]) => acc + (b - a), 0),
        });
      }
    }
    groups.sort(
      (a, b) => b.total_length - a.total_length || a.total_gap - b.total_gap
    );
    return groups;
  }
}
