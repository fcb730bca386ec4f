import { ApiClient, ApiError } from "./api.js";
import type { Notifier } from "./banner.js";
import type { AppState } from "./state.js";
import type { AtomJson } from "./types.js";
import { DONT_TEST } from "./types.js";

function eligibleAtoms(state: AppState, paramSig: string): AtomJson[] {
  return state.test.atoms.filter(
    (a) => state.ancestry(a.sig).has(paramSig) || a.subsets.includes(paramSig),
  );
}

/**
 * Column-by-column builder for connections of arity three and up.
 *
 * One dropdown per column; each is filled from the valid-targets query
 * for the columns already chosen, so an ill-typed or blocked tuple can
 * never be assembled. Nothing is posted until Confirm.
 */
export class ConnectionModal {
  private backdrop: HTMLElement | null = null;
  private selects: HTMLSelectElement[] = [];
  private confirmBtn: HTMLButtonElement | null = null;
  private relation = "";

  constructor(
    private readonly state: AppState,
    private readonly api: ApiClient,
    private readonly notifier: Notifier,
    private readonly host: HTMLElement,
    private readonly onCommitted: () => Promise<void>,
  ) {}

  get isOpen(): boolean {
    return this.backdrop !== null;
  }

  async open(relation: string, presetSource?: string): Promise<void> {
    const field = this.state.field(relation);
    if (!field || this.backdrop) {
      return;
    }
    this.relation = relation;
    const doc = this.host.ownerDocument;

    this.backdrop = doc.createElement("div");
    this.backdrop.className = "modal-backdrop";
    const modal = doc.createElement("div");
    modal.className = "modal connection-modal";

    const title = doc.createElement("h3");
    title.textContent = `${relation} : ${field.cols.join(" → ")}`;
    modal.appendChild(title);

    this.selects = field.cols.map((col, i) => {
      const row = doc.createElement("label");
      row.className = "modal-row";
      row.textContent = `${col} `;
      const select = doc.createElement("select");
      select.className = "col-select";
      select.dataset.col = String(i);
      select.disabled = true;
      select.addEventListener("change", () => {
        void this.choose(i, select.value);
      });
      row.appendChild(select);
      modal.appendChild(row);
      return select;
    });

    const actions = doc.createElement("div");
    actions.className = "modal-actions";
    this.confirmBtn = doc.createElement("button");
    this.confirmBtn.className = "confirm";
    this.confirmBtn.textContent = "Connect";
    this.confirmBtn.disabled = true;
    this.confirmBtn.addEventListener("click", () => {
      void this.confirm();
    });
    const cancel = doc.createElement("button");
    cancel.className = "cancel";
    cancel.textContent = "Cancel";
    cancel.addEventListener("click", () => this.close());
    actions.appendChild(this.confirmBtn);
    actions.appendChild(cancel);
    modal.appendChild(actions);

    this.backdrop.appendChild(modal);
    this.host.appendChild(this.backdrop);

    await this.populate(0, []);
    if (presetSource) {
      const first = this.selects[0];
      const hasPreset = Array.from(first.options).some(
        (o) => o.value === presetSource,
      );
      if (hasPreset) {
        await this.choose(0, presetSource);
      }
    }
  }

  /** Pick a column value; resets and repopulates everything after it. */
  async choose(col: number, atomId: string): Promise<void> {
    const select = this.selects[col];
    select.value = atomId;
    for (let i = col + 1; i < this.selects.length; i++) {
      this.selects[i].textContent = "";
      this.selects[i].disabled = true;
    }
    this.updateConfirm();
    if (!atomId) {
      return;
    }
    if (col + 1 < this.selects.length) {
      await this.populate(col + 1, this.chosen().slice(0, col + 1));
    }
  }

  private async populate(col: number, prefix: string[]): Promise<void> {
    const { targets } = await this.api.validTargets(
      this.state.projectId,
      this.state.testName,
      this.relation,
      prefix,
    );
    const select = this.selects[col];
    const doc = select.ownerDocument;
    select.textContent = "";
    const blank = doc.createElement("option");
    blank.value = "";
    blank.textContent = "choose…";
    select.appendChild(blank);
    for (const atomId of targets) {
      const option = doc.createElement("option");
      option.value = atomId;
      option.textContent = this.state.atom(atomId)?.nickname ?? atomId;
      select.appendChild(option);
    }
    select.disabled = false;
    this.updateConfirm();
  }

  private chosen(): string[] {
    return this.selects.map((s) => s.value);
  }

  private updateConfirm(): void {
    if (this.confirmBtn) {
      this.confirmBtn.disabled = this.chosen().some((v) => !v);
    }
  }

  async confirm(): Promise<void> {
    const atomIds = this.chosen();
    if (atomIds.some((v) => !v)) {
      return;
    }
    try {
      await this.api.addConnection(
        this.state.projectId,
        this.state.testName,
        this.relation,
        atomIds,
      );
    } catch (err) {
      // Leave the modal up so the columns can be adjusted.
      if (err instanceof ApiError) {
        this.notifier.alert(err.message);
        return;
      }
      throw err;
    }
    this.close();
    await this.onCommitted();
  }

  close(): void {
    this.backdrop?.remove();
    this.backdrop = null;
    this.selects = [];
    this.confirmBtn = null;
  }
}

/**
 * The predicate expectations modal: one row per predicate with a
 * Don't Test / Valid / Invalid selector and, for parameterized ones,
 * an atom picker per parameter. Every change is PUT immediately; the
 * Run button hands off to the run pipeline.
 */
export class PredicatesModal {
  private backdrop: HTMLElement | null = null;

  constructor(
    private readonly state: AppState,
    private readonly api: ApiClient,
    private readonly notifier: Notifier,
    private readonly host: HTMLElement,
    private readonly hooks: {
      run: () => Promise<void>;
      onStateChanged: () => Promise<void>;
    },
  ) {}

  get isOpen(): boolean {
    return this.backdrop !== null;
  }

  /** Re-reads the test body first so the rows show persisted state. */
  async open(): Promise<void> {
    if (this.backdrop) {
      return;
    }
    this.state.setTest(
      await this.api.getTest(this.state.projectId, this.state.testName),
    );
    const doc = this.host.ownerDocument;

    this.backdrop = doc.createElement("div");
    this.backdrop.className = "modal-backdrop";
    const modal = doc.createElement("div");
    modal.className = "modal predicates-modal";

    const title = doc.createElement("h3");
    title.textContent = "Predicates";
    modal.appendChild(title);

    const preds = [...this.state.project.schema.preds].sort(
      (a, b) => a.declIndex - b.declIndex,
    );
    for (const pred of preds) {
      modal.appendChild(this.buildRow(pred.name, pred.params));
    }

    const actions = doc.createElement("div");
    actions.className = "modal-actions";
    const run = doc.createElement("button");
    run.id = "modal-run";
    run.textContent = "Run";
    run.addEventListener("click", () => {
      void this.hooks.run();
    });
    const close = doc.createElement("button");
    close.className = "cancel";
    close.textContent = "Close";
    close.addEventListener("click", () => this.close());
    actions.appendChild(run);
    actions.appendChild(close);
    modal.appendChild(actions);

    this.backdrop.appendChild(modal);
    this.host.appendChild(this.backdrop);
  }

  private buildRow(pred: string, params: [string, string][]): HTMLElement {
    const doc = this.host.ownerDocument;
    const row = doc.createElement("div");
    row.className = "pred-row";
    row.dataset.pred = pred;

    const name = doc.createElement("span");
    name.className = "pred-name";
    name.textContent = params.length
      ? `${pred} [${params.map(([n, s]) => `${n}: ${s}`).join(", ")}]`
      : pred;
    row.appendChild(name);

    const current = this.state.test.predicateStates[pred] ?? {
      state: DONT_TEST,
      args: [],
    };

    const tri = doc.createElement("span");
    tri.className = "tri-state";
    for (const [value, caption] of [
      ["dontTest", "Don't Test"],
      ["valid", "Valid"],
      ["invalid", "Invalid"],
    ] as const) {
      const label = doc.createElement("label");
      const radio = doc.createElement("input");
      radio.type = "radio";
      radio.name = `tri-${pred}`;
      radio.value = value;
      radio.checked = current.state === value;
      radio.addEventListener("change", () => {
        void this.commit(row, pred);
      });
      label.appendChild(radio);
      label.appendChild(doc.createTextNode(caption));
      tri.appendChild(label);
    }
    row.appendChild(tri);

    params.forEach(([pname, psig], i) => {
      const select = doc.createElement("select");
      select.className = "arg-select";
      select.dataset.param = pname;
      const blank = doc.createElement("option");
      blank.value = "";
      blank.textContent = `${pname}…`;
      select.appendChild(blank);
      for (const atom of eligibleAtoms(this.state, psig)) {
        const option = doc.createElement("option");
        option.value = atom.id;
        option.textContent = atom.nickname;
        select.appendChild(option);
      }
      select.value = current.args[i] ?? "";
      select.addEventListener("change", () => {
        void this.commit(row, pred);
      });
      row.appendChild(select);
    });

    return row;
  }

  /** PUT the row's state; incomplete args just mark the row and wait. */
  async commit(row: HTMLElement, pred: string): Promise<void> {
    const checked = row.querySelector<HTMLInputElement>(
      `input[name="tri-${pred}"]:checked`,
    );
    const triState = checked?.value ?? DONT_TEST;
    const args = Array.from(
      row.querySelectorAll<HTMLSelectElement>(".arg-select"),
      (s) => s.value,
    );
    if (triState !== DONT_TEST && args.some((a) => !a)) {
      row.classList.add("needs-args");
      return;
    }
    row.classList.remove("needs-args");
    try {
      await this.api.putPredicate(
        this.state.projectId,
        this.state.testName,
        pred,
        triState,
        triState === DONT_TEST ? [] : args,
      );
    } catch (err) {
      if (err instanceof ApiError) {
        this.notifier.alert(err.message);
        return;
      }
      throw err;
    }
    await this.hooks.onStateChanged();
  }

  close(): void {
    this.backdrop?.remove();
    this.backdrop = null;
  }
}
