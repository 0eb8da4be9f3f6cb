import { displayCell } from "./bytes.js";
import { WindowGrid } from "./grid.js";
import type { WindowRequest } from "./api.js";
import type { PanelState } from "./state.js";
import type {
  AnalysisKind,
  PotentialRunItem,
  RunBreakerItem,
  SearchResult,
  WindowPayload,
} from "./types.js";

/** Server interactions a panel needs; the app supplies these. */
export interface PanelHooks {
  fetchWindow(
    tid: string,
    req: WindowRequest,
    signal: AbortSignal
  ): Promise<WindowPayload>;
  search(
    tid: string,
    pattern: string,
    fromRow: number | null,
    direction: "forward" | "backward"
  ): Promise<SearchResult>;
  toggleHighlight(tid: string, row: number, on: boolean): Promise<Set<number>>;
  propagate(tid: string, row: number): Promise<void>;
  runBreakers(tid: string): Promise<RunBreakerItem[]>;
  potentialRuns(tid: string): Promise<PotentialRunItem[]>;
  onViewChange(tid: string, topRow: number, leftCol: number): void;
  /** Register a fire-and-forget UI action so callers can await settledness. */
  track(p: Promise<void>): void;
}

export interface PanelConfig {
  viewportRows: number;
  viewportCols: number;
}

const OVERLAY_GROUP_LIMIT = 3;

/**
 * One transform of the loaded text: stats header, search and overlay
 * controls, and a virtualized matrix window underneath.
 */
export class TransformPanel {
  readonly root: HTMLElement;
  readonly grid: WindowGrid;
  readonly transformId: string;

  private statusEl: HTMLElement;
  private overlayInfo: HTMLElement;
  private searchInput: HTMLInputElement;
  private lastMatch: number | null = null;
  private lastPattern = "";
  private selectedRow: number | null = null;

  constructor(
    readonly state: PanelState,
    m: number,
    cfg: PanelConfig,
    private readonly hooks: PanelHooks
  ) {
    this.transformId = state.transformId;
    this.root = document.createElement("section");
    this.root.className = "panel";
    this.root.dataset.transformId = state.transformId;

    this.root.appendChild(this.buildHeader());

    const toolbar = document.createElement("div");
    toolbar.className = "panel-toolbar";
    this.searchInput = document.createElement("input");
    this.searchInput.type = "text";
    this.searchInput.placeholder = "prefix search";
    this.searchInput.className = "search-input";
    this.searchInput.addEventListener("keydown", (ev) => {
      if (ev.key === "Enter") {
        hooks.track(this.searchStep(ev.shiftKey ? "backward" : "forward"));
      }
    });
    const prev = button("▲", "prev match", () =>
      hooks.track(this.searchStep("backward"))
    );
    const next = button("▼", "next match", () =>
      hooks.track(this.searchStep("forward"))
    );
    const overlay = document.createElement("select");
    overlay.className = "overlay-select";
    for (const [value, label] of [
      ["", "no overlay"],
      ["run_breakers", "run breakers"],
      ["potential_runs", "potential runs"],
    ]) {
      const opt = document.createElement("option");
      opt.value = value;
      opt.textContent = label;
      overlay.appendChild(opt);
    }
    overlay.addEventListener("change", () => {
      hooks.track(
        this.setOverlay((overlay.value || null) as AnalysisKind | null)
      );
    });
    const findAll = button("find in all", "propagate selected row", () =>
      hooks.track(this.propagateSelected())
    );
    findAll.classList.add("find-all");
    toolbar.append(this.searchInput, prev, next, overlay, findAll);
    this.root.appendChild(toolbar);

    this.grid = new WindowGrid({
      m,
      viewportRows: cfg.viewportRows,
      viewportCols: cfg.viewportCols,
      fetchWindow: (req, signal) =>
        hooks.fetchWindow(state.transformId, req, signal),
      onViewChange: (top, left) =>
        hooks.onViewChange(state.transformId, top, left),
      onRowClick: (row) => this.selectRow(row),
      onRowDblClick: (row) => hooks.track(this.toggleHighlight(row)),
      onError: (err) => this.setStatus(String(err)),
    });
    this.grid.setHighlights(state.highlights);
    this.root.appendChild(this.grid.root);

    this.overlayInfo = document.createElement("div");
    this.overlayInfo.className = "overlay-info";
    this.root.appendChild(this.overlayInfo);

    this.statusEl = document.createElement("div");
    this.statusEl.className = "panel-status";
    this.root.appendChild(this.statusEl);
  }

  private buildHeader(): HTMLElement {
    const head = document.createElement("header");
    head.className = "panel-head";
    const title = document.createElement("div");
    title.className = "panel-title";
    const name = document.createElement("strong");
    name.textContent = this.state.name;
    const spec = document.createElement("code");
    spec.textContent = this.state.spec;
    title.append(name, " ", spec);
    head.appendChild(title);

    const stats = document.createElement("div");
    stats.className = "panel-stats";
    const s = this.state.stats;
    if (s) {
      stats.append(
        statSpan("end-marker", `marker ${displayCell(s.end_marker_used)}`),
        statSpan("size", `n = ${s.original_size}`),
        statSpan("run-count", `r = ${s.run_count}`),
        statSpan("rle-length", `rle = ${s.rle_length} B`)
      );
    } else {
      stats.textContent = "stats pending";
    }
    head.appendChild(stats);
    return head;
  }

  setStatus(text: string): void {
    this.statusEl.textContent = text;
  }

  selectRow(row: number): void {
    this.selectedRow = row;
    this.grid.setCursor(row);
    this.setStatus(`row ${row}`);
  }

  get selected(): number | null {
    return this.selectedRow;
  }

  async toggleHighlight(row: number): Promise<void> {
    const on = !this.state.highlights.has(row);
    const rows = await this.hooks.toggleHighlight(
      this.transformId,
      row,
      on
    );
    this.state.highlights = rows;
    this.grid.setHighlights(rows);
    this.selectRow(row);
  }

  async propagateSelected(): Promise<void> {
    if (this.selectedRow === null) {
      this.setStatus("select a row first");
      return;
    }
    await this.hooks.propagate(this.transformId, this.selectedRow);
  }

  applyHighlights(rows: Set<number>): void {
    this.state.highlights = rows;
    this.grid.setHighlights(rows);
  }

  /** Jump to a row from the outside (search in another panel, propagate). */
  async revealRow(row: number): Promise<void> {
    await this.grid.scrollToRow(row);
    this.grid.setCursor(row);
    this.selectedRow = row;
  }

  async searchStep(direction: "forward" | "backward"): Promise<void> {
    const pattern = this.searchInput.value;
    if (!pattern) {
      this.setStatus("");
      return;
    }
    if (pattern !== this.lastPattern) {
      this.lastMatch = null;
      this.lastPattern = pattern;
    }
    const result = await this.hooks.search(
      this.transformId,
      pattern,
      this.lastMatch,
      direction
    );
    if (result.row === null) {
      const [lo, hi] = result.interval;
      this.setStatus(hi > lo ? "no further match" : "no match");
      this.lastMatch = null;
      return;
    }
    this.lastMatch = result.row;
    const [lo, hi] = result.interval;
    this.setStatus(`row ${result.row} of rows ${lo}..${hi - 1}`);
    await this.revealRow(result.row);
  }

  async setOverlay(kind: AnalysisKind | null): Promise<void> {
    if (kind === null) {
      this.grid.setMarks(new Map());
      this.overlayInfo.textContent = "";
      return;
    }
    const marks = new Map<number, string>();
    if (kind === "run_breakers") {
      const items = await this.hooks.runBreakers(this.transformId);
      for (const b of items) {
        marks.set(b.row, "mark-breaker");
      }
      this.overlayInfo.textContent = items.length
        ? items
            .map(
              (b) =>
                `row ${b.row}: ${displayCell(b.breaker)} splits ` +
                `${displayCell(b.flanked_by)}`
            )
            .join("  ")
        : "no run breakers";
    } else if (kind === "potential_runs") {
      const items = await this.hooks.potentialRuns(this.transformId);
      const top = items.slice(0, OVERLAY_GROUP_LIMIT);
      for (const g of top) {
        for (const [start, end] of g.member_runs) {
          for (let row = start; row < end; row++) {
            marks.set(row, "mark-potential");
          }
        }
      }
      this.overlayInfo.textContent = top
        .map(
          (g) =>
            `${displayCell(g.character)}: length ${g.total_length}, ` +
            `gap ${g.total_gap}`
        )
        .join("  ");
    }
    this.grid.setMarks(marks);
  }
}

function statSpan(role: string, text: string): HTMLElement {
  const span = document.createElement("span");
  span.className = "stat";
  span.dataset.role = role;
  span.textContent = text;
  return span;
}

function button(
  label: string,
  title: string,
  onClick: () => unknown
): HTMLButtonElement {
  const b = document.createElement("button");
  b.type = "button";
  b.textContent = label;
  b.title = title;
  b.addEventListener("click", () => void onClick());
  return b;
}
