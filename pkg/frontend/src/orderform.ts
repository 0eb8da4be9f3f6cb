import { ApiError } from "./api.js";
import { parseConstraints } from "./bytes.js";
import { PRESET_NAMES } from "./types.js";
import type { ProposeResult } from "./types.js";

export interface OrderFormHooks {
  addTransform(spec: string, name?: string): Promise<void>;
  propose(
    constraints: { lesser: number; greater: number }[],
    base: string | null
  ): Promise<ProposeResult>;
  /** Panels eligible as a tuning base, in display order. */
  bases(): { tid: string; name: string; runCount: number | null }[];
  /** Register a fire-and-forget UI action so callers can await settledness. */
  track(p: Promise<void>): void;
}

/**
 * Controls for creating transforms: a preset dropdown or a comma-separated
 * ordering on one side, and a constraint tuner with a before/after run-count
 * preview on the other. Validation problems coming back from the server show
 * up inline instead of vanishing into the console.
 */
export class OrderingForm {
  readonly root: HTMLElement;
  private presetSelect: HTMLSelectElement;
  private specInput: HTMLInputElement;
  private nameInput: HTMLInputElement;
  private errorEl: HTMLElement;

  private constraintInput: HTMLInputElement;
  private baseSelect: HTMLSelectElement;
  private previewEl: HTMLElement;
  private applyButton: HTMLButtonElement;
  private proposed: ProposeResult | null = null;

  constructor(private readonly hooks: OrderFormHooks) {
    this.root = document.createElement("div");
    this.root.className = "orderform";

    const addRow = document.createElement("div");
    addRow.className = "form-row";
    this.presetSelect = document.createElement("select");
    this.presetSelect.className = "preset-select";
    const custom = document.createElement("option");
    custom.value = "";
    custom.textContent = "custom list";
    this.presetSelect.appendChild(custom);
    for (const preset of PRESET_NAMES) {
      const opt = document.createElement("option");
      opt.value = preset;
      opt.textContent = preset;
      this.presetSelect.appendChild(opt);
    }
    this.presetSelect.addEventListener("change", () => {
      this.specInput.disabled = this.presetSelect.value !== "";
    });

    this.specInput = document.createElement("input");
    this.specInput.type = "text";
    this.specInput.placeholder = "ordering, e.g. c,a,b,d";
    this.specInput.className = "spec-input";

    this.nameInput = document.createElement("input");
    this.nameInput.type = "text";
    this.nameInput.placeholder = "name (optional)";
    this.nameInput.className = "name-input";

    const addButton = document.createElement("button");
    addButton.type = "button";
    addButton.textContent = "add transform";
    addButton.className = "add-transform";
    addButton.addEventListener("click", () => hooks.track(this.submit()));

    addRow.append(
      this.presetSelect,
      this.specInput,
      this.nameInput,
      addButton
    );

    const tuneRow = document.createElement("div");
    tuneRow.className = "form-row";
    this.constraintInput = document.createElement("input");
    this.constraintInput.type = "text";
    this.constraintInput.placeholder = "constraints, e.g. c<a";
    this.constraintInput.className = "constraint-input";
    this.baseSelect = document.createElement("select");
    this.baseSelect.className = "base-select";
    const previewButton = document.createElement("button");
    previewButton.type = "button";
    previewButton.textContent = "preview";
    previewButton.className = "preview-constraints";
    previewButton.addEventListener("click", () =>
      hooks.track(this.preview())
    );
    this.previewEl = document.createElement("span");
    this.previewEl.className = "preview-result";
    this.applyButton = document.createElement("button");
    this.applyButton.type = "button";
    this.applyButton.textContent = "apply";
    this.applyButton.className = "apply-proposal";
    this.applyButton.disabled = true;
    this.applyButton.addEventListener("click", () =>
      hooks.track(this.apply())
    );
    tuneRow.append(
      this.constraintInput,
      this.baseSelect,
      previewButton,
      this.previewEl,
      this.applyButton
    );

    this.errorEl = document.createElement("div");
    this.errorEl.className = "form-error";

    this.root.append(addRow, tuneRow, this.errorEl);
    this.refreshBases();
  }

  refreshBases(): void {
    this.baseSelect.textContent = "";
    const none = document.createElement("option");
    none.value = "";
    none.textContent = "base: first panel";
    this.baseSelect.appendChild(none);
    for (const b of this.hooks.bases()) {
      const opt = document.createElement("option");
      opt.value = b.tid;
      opt.textContent = `base: ${b.name}`;
      this.baseSelect.appendChild(opt);
    }
  }

  setError(text: string): void {
    this.errorEl.textContent = text;
  }

  private showError(err: unknown): void {
    if (err instanceof ApiError) {
      this.setError(`${err.code}: ${err.message}`);
    } else {
      this.setError(String((err as Error).message ?? err));
    }
  }

  async submit(): Promise<void> {
    const spec = this.presetSelect.value || this.specInput.value.trim();
    if (!spec) {
      this.setError("enter an ordering or pick a preset");
      return;
    }
    this.setError("");
    try {
      await this.hooks.addTransform(
        spec,
        this.nameInput.value.trim() || undefined
      );
      this.specInput.value = "";
      this.nameInput.value = "";
      this.refreshBases();
    } catch (err) {
      this.showError(err);
    }
  }

  async preview(): Promise<void> {
    this.setError("");
    this.proposed = null;
    this.applyButton.disabled = true;
    let constraints;
    try {
      constraints = parseConstraints(this.constraintInput.value);
    } catch (err) {
      this.setError(String((err as Error).message));
      return;
    }
    const baseTid = this.baseSelect.value || null;
    try {
      const result = await this.hooks.propose(constraints, baseTid);
      this.proposed = result;
      const bases = this.hooks.bases();
      const base = baseTid
        ? bases.find((b) => b.tid === baseTid)
        : bases[0];
      const before = base?.runCount;
      const arrow =
        before !== null && before !== undefined
          ? `r ${before} → ${result.preview_stats.run_count}`
          : `r ${result.preview_stats.run_count}`;
      this.previewEl.textContent = `${result.spec}  ${arrow}`;
      this.applyButton.disabled = false;
    } catch (err) {
      this.showError(err);
    }
  }

  async apply(): Promise<void> {
    if (!this.proposed) {
      return;
    }
    try {
      await this.hooks.addTransform(this.proposed.spec);
      this.previewEl.textContent = "";
      this.proposed = null;
      this.applyButton.disabled = true;
      this.refreshBases();
    } catch (err) {
      this.showError(err);
    }
  }
}
