import type { AnalysisKind, SessionSummary, TransformInfo } from "./types.js";

export interface PanelState {
  transformId: string;
  name: string;
  spec: string;
  order: number[];
  topRow: number;
  leftCol: number;
  highlights: Set<number>;
  stats: TransformInfo["stats"];
}

export interface SearchState {
  pattern: string;
  lastRow: number | null;
  interval: [number, number];
}

/**
 * Client-side mirror of one server session. Panel order always follows the
 * order the server reports, and window positions stay inside [0, m).
 */
export class ViewState {
  sessionId = "";
  size = 0;
  m = 0;
  endMarker = 0;
  panels: PanelState[] = [];
  activeSearch: SearchState | null = null;
  overlay: AnalysisKind | null = null;

  get loaded(): boolean {
    return this.sessionId !== "";
  }

  clampRow(row: number): number {
    if (!Number.isFinite(row) || row < 0) {
      return 0;
    }
    return Math.min(Math.floor(row), Math.max(this.m - 1, 0));
  }

  clampCol(col: number): number {
    if (!Number.isFinite(col) || col < 0) {
      return 0;
    }
    return Math.min(Math.floor(col), Math.max(this.m - 1, 0));
  }

  panel(tid: string): PanelState | undefined {
    return this.panels.find((p) => p.transformId === tid);
  }

  /**
   * Rebuild panel list from a session summary. Existing window positions
   * survive for transforms that are still present; new transforms start at
   * the origin.
   */
  syncFromSummary(summary: SessionSummary): void {
    this.sessionId = summary.session_id;
    this.size = summary.size;
    this.m = summary.m;
    this.endMarker = summary.end_marker;
    const previous = new Map(this.panels.map((p) => [p.transformId, p]));
    this.panels = summary.transforms.map((t) => {
      const old = previous.get(t.id);
      return {
        transformId: t.id,
        name: t.name,
        spec: t.spec,
        order: t.order.slice(),
        topRow: this.clampRow(old ? old.topRow : 0),
        leftCol: this.clampCol(old ? old.leftCol : 0),
        highlights: new Set(t.highlights),
        stats: t.stats,
      };
    });
  }

  appendTransform(info: TransformInfo): PanelState {
    const panel: PanelState = {
      transformId: info.id,
      name: info.name,
      spec: info.spec,
      order: info.order.slice(),
      topRow: 0,
      leftCol: 0,
      highlights: new Set(info.highlights),
      stats: info.stats,
    };
    this.panels.push(panel);
    return panel;
  }

  moveWindow(tid: string, topRow: number, leftCol: number): PanelState {
    const panel = this.panel(tid);
    if (!panel) {
      throw new Error(`unknown transform ${tid}`);
    }
    panel.topRow = this.clampRow(topRow);
    panel.leftCol = this.clampCol(leftCol);
    return panel;
  }

  setHighlights(perTransform: Record<string, number[]>): void {
    for (const panel of this.panels) {
      const rows = perTransform[panel.transformId];
      if (rows) {
        panel.highlights = new Set(rows);
      }
    }
  }
}
