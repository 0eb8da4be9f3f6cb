import { displayCell, fromBase64, isPrintable } from "./bytes.js";
import type { WindowRequest } from "./api.js";
import type { WindowPayload } from "./types.js";

export interface GridOptions {
  /** Total matrix rows (and columns); every row is exactly m cells. */
  m: number;
  /** Visible viewport size, in cells. Fixed so requests stay bounded. */
  viewportRows: number;
  viewportCols: number;
  rowHeight?: number;
  cellWidth?: number;
  fetchWindow: (
    req: WindowRequest,
    signal: AbortSignal
  ) => Promise<WindowPayload>;
  onViewChange?: (topRow: number, leftCol: number) => void;
  onRowClick?: (row: number) => void;
  onRowDblClick?: (row: number) => void;
  onError?: (err: unknown) => void;
}

const DEFAULT_ROW_HEIGHT = 22;
const DEFAULT_CELL_WIDTH = 14;

/**
 * Server-backed virtualized matrix view. Only the cells inside the viewport
 * plus at most one extra page are ever requested, so memory stays flat no
 * matter how large the text is. The row-number gutter and the L column are
 * pinned outside the horizontal scroll area; the L column stays visible at
 * any horizontal offset.
 */
export class WindowGrid {
  readonly root: HTMLElement;
  private viewport: HTMLElement;
  private canvas: HTMLElement;
  private gutterLayer: HTMLElement;
  private lcolLayer: HTMLElement;

  private readonly m: number;
  private readonly rows: number;
  private readonly cols: number;
  private readonly rowHeight: number;
  private readonly cellWidth: number;

  private highlights = new Set<number>();
  private marks = new Map<number, string>();
  private cursorRow: number | null = null;

  private inflight: AbortController | null = null;
  private pending: Promise<void> = Promise.resolve();
  private rendered = new Map<number, HTMLElement[]>();

  constructor(private readonly opts: GridOptions) {
    this.m = opts.m;
    this.rows = Math.max(1, Math.min(opts.viewportRows, this.m));
    this.cols = Math.max(1, Math.min(opts.viewportCols, this.m));
    this.rowHeight = opts.rowHeight ?? DEFAULT_ROW_HEIGHT;
    this.cellWidth = opts.cellWidth ?? DEFAULT_CELL_WIDTH;

    this.root = el("div", "grid");
    const gutter = el("div", "grid-gutter");
    this.gutterLayer = el("div", "grid-layer");
    gutter.appendChild(this.gutterLayer);

    this.viewport = el("div", "grid-viewport");
    this.viewport.style.height = `${this.rows * this.rowHeight}px`;
    this.viewport.style.width = `${this.cols * this.cellWidth}px`;
    this.canvas = el("div", "grid-canvas");
    this.canvas.style.height = `${this.m * this.rowHeight}px`;
    this.canvas.style.width = `${this.m * this.cellWidth}px`;
    this.viewport.appendChild(this.canvas);

    const lcol = el("div", "grid-lcol");
    lcol.style.height = `${this.rows * this.rowHeight}px`;
    this.lcolLayer = el("div", "grid-layer");
    lcol.appendChild(this.lcolLayer);

    gutter.style.height = `${this.rows * this.rowHeight}px`;
    this.root.appendChild(gutter);
    this.root.appendChild(this.viewport);
    this.root.appendChild(lcol);

    this.viewport.addEventListener("scroll", () => {
      this.syncPinned();
      this.pending = this.refresh().catch((err) => {
        this.opts.onError?.(err);
      });
    });
  }

  get topRow(): number {
    return this.clampRow(Math.floor(this.viewport.scrollTop / this.rowHeight));
  }

  get leftCol(): number {
    return this.clampRow(
      Math.floor(this.viewport.scrollLeft / this.cellWidth)
    );
  }

  /** Resolves when the last scheduled fetch has been rendered. */
  idle(): Promise<void> {
    return this.pending;
  }

  private clampRow(v: number): number {
    return Math.max(0, Math.min(v, this.m - 1));
  }

  private syncPinned(): void {
    const y = -this.viewport.scrollTop;
    this.gutterLayer.style.transform = `translateY(${y}px)`;
    this.lcolLayer.style.transform = `translateY(${y}px)`;
  }

  /** Fetch the viewport plus half a page of context on every side. */
  private requestBounds(): WindowRequest {
    const topRow = this.clampRow(this.topRow - (this.rows >> 1));
    const leftCol = this.clampRow(this.leftCol - (this.cols >> 1));
    return {
      topRow,
      leftCol,
      height: Math.min(this.rows * 2, this.m - topRow),
      width: Math.min(this.cols * 2, this.m - leftCol),
    };
  }

  async refresh(): Promise<void> {
    if (this.inflight) {
      this.inflight.abort();
    }
    const controller = new AbortController();
    this.inflight = controller;
    const req = this.requestBounds();
    let payload: WindowPayload;
    try {
      payload = await this.opts.fetchWindow(req, controller.signal);
    } catch (err) {
      if ((err as { name?: string }).name === "AbortError") {
        return;
      }
      throw err;
    }
    if (controller.signal.aborted) {
      return;
    }
    this.inflight = null;
    this.render(payload);
    this.opts.onViewChange?.(this.topRow, this.leftCol);
  }

  private render(payload: WindowPayload): void {
    this.canvas.textContent = "";
    this.gutterLayer.textContent = "";
    this.lcolLayer.textContent = "";
    this.rendered.clear();

    const lbytes = fromBase64(payload.l_column);
    for (let i = 0; i < payload.height; i++) {
      const row = payload.top_row + i;
      const cells = fromBase64(payload.rows[i]);

      const rowEl = el("div", "grid-row");
      rowEl.style.top = `${row * this.rowHeight}px`;
      rowEl.style.left = `${payload.left_col * this.cellWidth}px`;
      rowEl.style.height = `${this.rowHeight}px`;
      rowEl.dataset.row = String(row);
      for (let c = 0; c < cells.length; c++) {
        const cell = el("span", "cell");
        const byte = cells[c];
        cell.textContent = displayCell(byte);
        if (!isPrintable(byte)) {
          cell.classList.add("esc");
        }
        // the in-window copy of the L column gets the same accent as the
        // pinned one so it reads as one column when scrolled into view
        if (payload.left_col + c === this.m - 1) {
          cell.classList.add("lcell");
        }
        cell.style.width = `${this.cellWidth}px`;
        rowEl.appendChild(cell);
      }
      rowEl.addEventListener("click", () => this.opts.onRowClick?.(row));
      rowEl.addEventListener("dblclick", () => this.opts.onRowDblClick?.(row));
      this.canvas.appendChild(rowEl);

      const gutterEl = el("div", "grid-row gutter-row");
      gutterEl.style.top = `${row * this.rowHeight}px`;
      gutterEl.style.height = `${this.rowHeight}px`;
      gutterEl.textContent = String(row);
      this.gutterLayer.appendChild(gutterEl);

      const lEl = el("div", "grid-row lcol-row");
      lEl.style.top = `${row * this.rowHeight}px`;
      lEl.style.height = `${this.rowHeight}px`;
      lEl.textContent = displayCell(lbytes[i]);
      lEl.dataset.row = String(row);
      lEl.addEventListener("click", () => this.opts.onRowClick?.(row));
      lEl.addEventListener("dblclick", () =>
        this.opts.onRowDblClick?.(row)
      );
      this.lcolLayer.appendChild(lEl);

      this.rendered.set(row, [rowEl, gutterEl, lEl]);
    }
    this.applyRowClasses();
    this.syncPinned();
  }

  private applyRowClasses(): void {
    for (const [row, els] of this.rendered) {
      const hl = this.highlights.has(row);
      const mark = this.marks.get(row);
      const cursor = this.cursorRow === row;
      for (const e of els) {
        e.classList.toggle("hl", hl);
        e.classList.toggle("cursor", cursor);
        e.classList.remove("mark-breaker", "mark-potential");
        if (mark) {
          e.classList.add(mark);
        }
      }
    }
  }

  setHighlights(rows: Set<number>): void {
    this.highlights = new Set(rows);
    this.applyRowClasses();
  }

  /** Overlay marks: row -> css class, e.g. "mark-breaker". */
  setMarks(marks: Map<number, string>): void {
    this.marks = new Map(marks);
    this.applyRowClasses();
  }

  setCursor(row: number | null): void {
    this.cursorRow = row;
    this.applyRowClasses();
  }

  /** Scroll so the given row sits roughly mid-viewport, then refetch. */
  scrollToRow(row: number): Promise<void> {
    const target = this.clampRow(row);
    const top = Math.max(0, (target - (this.rows >> 1)) * this.rowHeight);
    this.viewport.scrollTop = top;
    this.syncPinned();
    const p = this.refresh();
    this.pending = p.catch((err) => this.opts.onError?.(err));
    return p;
  }

  scrollToCol(col: number): Promise<void> {
    this.viewport.scrollLeft = this.clampRow(col) * this.cellWidth;
    this.syncPinned();
    const p = this.refresh();
    this.pending = p.catch((err) => this.opts.onError?.(err));
    return p;
  }

  /** True when the row is inside the current visible viewport. */
  rowVisible(row: number): boolean {
    const top = this.topRow;
    return row >= top && row < top + this.rows;
  }
}

function el(tag: string, className: string): HTMLElement {
  const node = document.createElement(tag);
  node.className = className;
  return node;
}
