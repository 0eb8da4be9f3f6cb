import { ApiError, ExplorerClient } from "./api.js";
import { displayCell, encodeText } from "./bytes.js";
import { OrderingForm } from "./orderform.js";
import { TransformPanel } from "./panel.js";
import { ViewState } from "./state.js";
import type { PanelHooks } from "./panel.js";
import type { WindowRequest } from "./api.js";
import type {
  PotentialRunItem,
  RunBreakerItem,
  SessionSummary,
} from "./types.js";

export interface AppConfig {
  viewportRows?: number;
  viewportCols?: number;
}

const DEFAULT_VIEWPORT_ROWS = 24;
const DEFAULT_VIEWPORT_COLS = 48;

/**
 * Top-level application: session loader, ordering form, and a horizontal
 * rail of transform panels. Everything displayed is reconstructable from
 * the server session, so a reload with the same session id comes back to
 * the same view.
 */
export class ExplorerApp {
  readonly state = new ViewState();
  readonly panels: TransformPanel[] = [];
  readonly form: OrderingForm;

  private rail: HTMLElement;
  private statusEl: HTMLElement;
  private sessionInfo: HTMLElement;
  private textInput: HTMLTextAreaElement;
  private ops: Promise<void> = Promise.resolve();

  constructor(
    readonly root: HTMLElement,
    private readonly client: ExplorerClient,
    private readonly cfg: AppConfig = {}
  ) {
    root.classList.add("app");

    const loader = document.createElement("div");
    loader.className = "loader";
    this.textInput = document.createElement("textarea");
    this.textInput.className = "text-input";
    this.textInput.rows = 2;
    this.textInput.placeholder = "text to explore";
    const loadButton = document.createElement("button");
    loadButton.type = "button";
    loadButton.className = "load-text";
    loadButton.textContent = "load";
    loadButton.addEventListener("click", () =>
      this.track(this.loadText(encodeText(this.textInput.value)))
    );
    const fileInput = document.createElement("input");
    fileInput.type = "file";
    fileInput.className = "load-file";
    fileInput.addEventListener("change", () => {
      const file = fileInput.files?.[0];
      if (file) {
        this.track(
          file
            .arrayBuffer()
            .then((buf) => this.loadText(new Uint8Array(buf)))
        );
      }
    });
    const importInput = document.createElement("input");
    importInput.type = "file";
    importInput.className = "import-session";
    importInput.accept = ".bwtx";
    importInput.addEventListener("change", () => {
      const file = importInput.files?.[0];
      if (file) {
        this.track(
          file
            .arrayBuffer()
            .then((buf) => this.importBlob(new Uint8Array(buf)))
        );
      }
    });
    const exportButton = document.createElement("button");
    exportButton.type = "button";
    exportButton.className = "export-session";
    exportButton.textContent = "export";
    exportButton.addEventListener("click", () =>
      this.track(this.downloadExport(false))
    );
    const exportCached = document.createElement("button");
    exportCached.type = "button";
    exportCached.className = "export-session-cached";
    exportCached.textContent = "export cached";
    exportCached.addEventListener("click", () =>
      this.track(this.downloadExport(true))
    );
    this.sessionInfo = document.createElement("span");
    this.sessionInfo.className = "session-info";
    loader.append(
      this.textInput,
      loadButton,
      fileInput,
      importInput,
      exportButton,
      exportCached,
      this.sessionInfo
    );
    root.appendChild(loader);

    this.form = new OrderingForm({
      addTransform: (spec, name) => this.addOrdering(spec, name),
      propose: (constraints, base) =>
        this.client.propose(this.state.sessionId, {
          constraints,
          base: base ?? undefined,
        }),
      bases: () =>
        this.state.panels.map((p) => ({
          tid: p.transformId,
          name: p.name,
          runCount: p.stats?.run_count ?? null,
        })),
      track: (p) => this.track(p),
    });
    root.appendChild(this.form.root);

    this.rail = document.createElement("div");
    this.rail.className = "rail";
    root.appendChild(this.rail);

    this.statusEl = document.createElement("div");
    this.statusEl.className = "app-status";
    root.appendChild(this.statusEl);

    this.renderEmpty();
  }

  /** Chain an action so tests (and error reporting) can await settledness. */
  private track(p: Promise<void>): void {
    this.ops = this.ops
      .then(() => p)
      .catch((err) => this.reportError(err));
  }

  idle(): Promise<void> {
    return this.ops;
  }

  private reportError(err: unknown): void {
    if (err instanceof ApiError) {
      this.statusEl.textContent = `${err.code}: ${err.message}`;
    } else {
      this.statusEl.textContent = String((err as Error).message ?? err);
    }
  }

  setStatus(text: string): void {
    this.statusEl.textContent = text;
  }

  private renderEmpty(): void {
    if (!this.state.loaded) {
      this.rail.textContent = "";
      const prompt = document.createElement("div");
      prompt.className = "empty-prompt";
      prompt.textContent =
        "No session loaded. Enter a text above or import a saved session.";
      this.rail.appendChild(prompt);
    }
  }

  private hooks(): PanelHooks {
    const sid = () => this.state.sessionId;
    return {
      fetchWindow: (tid: string, req: WindowRequest, signal: AbortSignal) =>
        this.client.getWindow(sid(), tid, req, signal),
      search: (tid, pattern, fromRow, direction) =>
        this.client.search(sid(), tid, {
          pattern,
          fromRow: fromRow ?? undefined,
          direction,
        }),
      toggleHighlight: async (tid, row, on) => {
        const res = await this.client.setHighlight(sid(), tid, row, on);
        return new Set(res.highlights);
      },
      propagate: (tid, row) => this.propagateFrom(tid, row),
      runBreakers: async (tid) =>
        (await this.client.analysis<RunBreakerItem>(sid(), tid, "run_breakers"))
          .items,
      potentialRuns: async (tid) =>
        (
          await this.client.analysis<PotentialRunItem>(
            sid(),
            tid,
            "potential_runs"
          )
        ).items,
      onViewChange: (tid, topRow, leftCol) => {
        this.state.moveWindow(tid, topRow, leftCol);
      },
      track: (p) => this.track(p),
    };
  }

  private applySummary(summary: SessionSummary): void {
    this.state.syncFromSummary(summary);
    this.sessionInfo.textContent =
      `session ${summary.session_id}  n = ${summary.size}  ` +
      `m = ${summary.m}  marker ${displayCell(summary.end_marker)}`;
    this.rail.textContent = "";
    this.panels.length = 0;
    for (const panelState of this.state.panels) {
      this.mountPanel(panelState);
    }
    if (!this.state.panels.length) {
      const hint = document.createElement("div");
      hint.className = "empty-prompt";
      hint.textContent = "Add a transform to see the matrix.";
      this.rail.appendChild(hint);
    }
    this.form.refreshBases();
    if (typeof window !== "undefined" && window.location) {
      window.location.hash = `session=${summary.session_id}`;
    }
  }

  private mountPanel(panelState: ViewState["panels"][number]): TransformPanel {
    const panel = new TransformPanel(
      panelState,
      this.state.m,
      {
        viewportRows: Math.min(
          this.cfg.viewportRows ?? DEFAULT_VIEWPORT_ROWS,
          this.state.m
        ),
        viewportCols: Math.min(
          this.cfg.viewportCols ?? DEFAULT_VIEWPORT_COLS,
          this.state.m
        ),
      },
      this.hooks()
    );
    this.panels.push(panel);
    this.rail.appendChild(panel.root);
    return panel;
  }

  async loadText(text: Uint8Array): Promise<void> {
    if (!text.length) {
      this.setStatus("enter a non-empty text first");
      return;
    }
    const summary = await this.client.createSession(text);
    this.applySummary(summary);
    this.setStatus(`loaded ${summary.size} bytes`);
  }

  async restoreSession(sid: string): Promise<void> {
    const summary = await this.client.getSession(sid);
    this.applySummary(summary);
    await Promise.all(this.panels.map((p) => p.grid.refresh()));
  }

  async importBlob(blob: Uint8Array): Promise<void> {
    const summary = await this.client.importSession(blob);
    this.applySummary(summary);
    await Promise.all(this.panels.map((p) => p.grid.refresh()));
    this.setStatus("session imported");
  }

  async addOrdering(spec: string, name?: string): Promise<void> {
    if (!this.state.loaded) {
      throw new Error("load a text first");
    }
    const info = await this.client.addTransform(
      this.state.sessionId,
      spec,
      name
    );
    const hint = this.rail.querySelector(".empty-prompt");
    if (hint) {
      hint.remove();
    }
    const panelState = this.state.appendTransform(info);
    const panel = this.mountPanel(panelState);
    await panel.grid.refresh();
    this.form.refreshBases();
  }

  /**
   * Propagate one row to every transform: the server reports where the same
   * rotation sits in each panel, every panel scrolls there, and the shared
   * highlight set updates everywhere.
   */
  async propagateFrom(tid: string, row: number): Promise<void> {
    const res = await this.client.propagate(this.state.sessionId, tid, row);
    this.state.setHighlights(res.highlights);
    await Promise.all(
      this.panels.map(async (panel) => {
        const panelState = this.state.panel(panel.transformId);
        if (panelState) {
          panel.applyHighlights(panelState.highlights);
        }
        const target = res.rows[panel.transformId];
        if (target !== undefined) {
          await panel.revealRow(target);
        }
      })
    );
    this.setStatus(`row ${row} propagated to ${this.panels.length} panels`);
  }

  async exportSession(cache: boolean): Promise<Uint8Array> {
    if (!this.state.loaded) {
      throw new Error("nothing to export");
    }
    return this.client.exportSession(this.state.sessionId, cache);
  }

  private async downloadExport(cache: boolean): Promise<void> {
    const blob = await this.exportSession(cache);
    if (typeof URL.createObjectURL !== "function") {
      this.setStatus(`exported ${blob.length} bytes`);
      return;
    }
    const url = URL.createObjectURL(
      new Blob([blob as unknown as BlobPart], {
        type: "application/octet-stream",
      })
    );
    const a = document.createElement("a");
    a.href = url;
    a.download = `${this.state.sessionId}.bwtx`;
    a.click();
    URL.revokeObjectURL(url);
    this.setStatus(`exported ${blob.length} bytes`);
  }

  /** Restore from a #session=... fragment when present. */
  boot(): Promise<void> {
    if (typeof window === "undefined" || !window.location) {
      return Promise.resolve();
    }
    const match = /session=([\w-]+)/.exec(window.location.hash);
    if (!match) {
      return Promise.resolve();
    }
    const p = this.restoreSession(match[1]).catch((err) => {
      this.reportError(err);
      this.renderEmpty();
    });
    this.track(p);
    return p;
  }
}
