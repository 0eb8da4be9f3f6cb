import type {
  AnalysisKind,
  AnalysisResult,
  ApiErrorBody,
  HighlightResult,
  MoveInput,
  OrderConstraintInput,
  PropagateResult,
  ProposeResult,
  SearchResult,
  SessionSummary,
  TransformInfo,
  WindowPayload,
} from "./types.js";

export class ApiError extends Error {
  constructor(
    public readonly status: number,
    public readonly code: string,
    message: string,
    public readonly cycle?: number[]
  ) {
    super(message);
    this.name = "ApiError";
  }
}

export interface WindowRequest {
  topRow: number;
  leftCol: number;
  height: number;
  width: number;
}

export interface SearchRequest {
  pattern?: string;
  patternB64?: string;
  fromRow?: number;
  direction?: "forward" | "backward";
}

export interface ProposeRequest {
  constraints?: OrderConstraintInput[];
  move?: MoveInput;
  base?: string;
}

async function raiseForStatus(res: Response): Promise<void> {
  if (res.ok) {
    return;
  }
  let body: ApiErrorBody = { code: "HTTPError", message: res.statusText };
  try {
    body = (await res.json()) as ApiErrorBody;
  } catch {
    /* non-JSON error body, keep the fallback */
  }
  throw new ApiError(res.status, body.code, body.message, body.cycle);
}

/** Thin typed client for the bwtx service; one method per endpoint. */
export class ExplorerClient {
  constructor(public readonly baseUrl: string = "") {}

  private async getJson<T>(path: string, signal?: AbortSignal): Promise<T> {
    const res = await fetch(this.baseUrl + path, { signal });
    await raiseForStatus(res);
    return (await res.json()) as T;
  }

  private async postJson<T>(path: string, body: unknown): Promise<T> {
    const res = await fetch(this.baseUrl + path, {
      method: "POST",
      headers: { "Content-Type": "application/json" },
      body: JSON.stringify(body),
    });
    await raiseForStatus(res);
    return (await res.json()) as T;
  }

  async createSession(text: Uint8Array): Promise<SessionSummary> {
    const res = await fetch(this.baseUrl + "/sessions", {
      method: "POST",
      headers: { "Content-Type": "application/octet-stream" },
      body: text as unknown as BodyInit,
    });
    await raiseForStatus(res);
    return (await res.json()) as SessionSummary;
  }

  getSession(sid: string): Promise<SessionSummary> {
    return this.getJson(`/sessions/${sid}`);
  }

  addTransform(
    sid: string,
    ordering: string,
    name?: string
  ): Promise<TransformInfo & { transform_id: string }> {
    const body: Record<string, string> = { ordering };
    if (name) {
      body.name = name;
    }
    return this.postJson(`/sessions/${sid}/transforms`, body);
  }

  getWindow(
    sid: string,
    tid: string,
    req: WindowRequest,
    signal?: AbortSignal
  ): Promise<WindowPayload> {
    const q = new URLSearchParams({
      top_row: String(req.topRow),
      left_col: String(req.leftCol),
      height: String(req.height),
      width: String(req.width),
    });
    return this.getJson(
      `/sessions/${sid}/transforms/${tid}/window?${q}`,
      signal
    );
  }

  search(sid: string, tid: string, req: SearchRequest): Promise<SearchResult> {
    const q = new URLSearchParams();
    if (req.patternB64 !== undefined) {
      q.set("pattern_b64", req.patternB64);
    } else if (req.pattern !== undefined) {
      q.set("pattern", req.pattern);
    }
    if (req.fromRow !== undefined) {
      q.set("from_row", String(req.fromRow));
    }
    if (req.direction) {
      q.set("direction", req.direction);
    }
    return this.getJson(`/sessions/${sid}/transforms/${tid}/search?${q}`);
  }

  setHighlight(
    sid: string,
    tid: string,
    row: number,
    on: boolean
  ): Promise<HighlightResult> {
    return this.postJson(`/sessions/${sid}/transforms/${tid}/highlights`, {
      row,
      on,
    });
  }

  propagate(sid: string, tid: string, row: number): Promise<PropagateResult> {
    return this.postJson(`/sessions/${sid}/transforms/${tid}/propagate`, {
      row,
    });
  }

  analysis<T>(
    sid: string,
    tid: string,
    kind: AnalysisKind,
    opts?: { maxGap?: number; section?: number }
  ): Promise<AnalysisResult<T>> {
    const q = new URLSearchParams({ kind });
    if (opts?.maxGap !== undefined) {
      q.set("max_gap", String(opts.maxGap));
    }
    if (opts?.section !== undefined) {
      q.set("section", String(opts.section));
    }
    return this.getJson(`/sessions/${sid}/transforms/${tid}/analysis?${q}`);
  }

  propose(sid: string, req: ProposeRequest): Promise<ProposeResult> {
    const body: Record<string, unknown> = {};
    if (req.constraints) {
      body.constraints = req.constraints;
    }
    if (req.move) {
      body.move = req.move;
    }
    if (req.base) {
      body.base = req.base;
    }
    return this.postJson(`/sessions/${sid}/orderings/propose`, body);
  }

  async exportSession(sid: string, cache: boolean): Promise<Uint8Array> {
    const res = await fetch(
      `${this.baseUrl}/sessions/${sid}/export?cache=${cache}`
    );
    await raiseForStatus(res);
    return new Uint8Array(await res.arrayBuffer());
  }

  async importSession(blob: Uint8Array): Promise<SessionSummary> {
    const res = await fetch(this.baseUrl + "/sessions/import", {
      method: "POST",
      headers: { "Content-Type": "application/octet-stream" },
      body: blob as unknown as BodyInit,
    });
    await raiseForStatus(res);
    return (await res.json()) as SessionSummary;
  }

  async healthz(): Promise<boolean> {
    const body = await this.getJson<{ status?: string }>("/healthz");
    return body.status === "ok";
  }
}
