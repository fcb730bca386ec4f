import type { AppState } from "./state.js";

export interface DrawerHandlers {
  onAddAtom: (sig: string) => void;
  onOpenPredicate: (pred: string) => void;
  onRun: () => void;
}

/**
 * Left sidebar: one draggable chip per concrete sig, one button per
 * predicate, and the run control. Chips also respond to plain clicks so
 * the canvas works without drag support.
 */
export class Drawer {
  constructor(
    private readonly root: HTMLElement,
    private readonly state: AppState,
    private readonly handlers: DrawerHandlers,
  ) {}

  render(): void {
    this.root.textContent = "";
    const doc = this.root.ownerDocument;

    const sigHeader = doc.createElement("h2");
    sigHeader.textContent = "Sigs";
    this.root.appendChild(sigHeader);

    const sigList = doc.createElement("div");
    sigList.id = "sig-list";
    for (const sig of this.state.drawerSigs()) {
      const chip = doc.createElement("div");
      chip.className = sig.abstract ? "sig-chip disabled" : "sig-chip";
      chip.dataset.sig = sig.name;
      chip.textContent = sig.name;
      chip.style.background = this.state.colorFor(sig.name);
      // Abstract sigs stay visible in the drawer but cannot spawn atoms.
      chip.draggable = !sig.abstract;
      if (!sig.abstract) {
        chip.addEventListener("dragstart", (ev: DragEvent) => {
          ev.dataTransfer?.setData("text/sig", sig.name);
        });
        chip.addEventListener("click", () =>
          this.handlers.onAddAtom(sig.name),
        );
      }
      sigList.appendChild(chip);
    }
    this.root.appendChild(sigList);

    const predHeader = doc.createElement("h2");
    predHeader.textContent = "Predicates";
    this.root.appendChild(predHeader);

    const predList = doc.createElement("div");
    predList.id = "pred-list";
    for (const pred of this.state.project.schema.preds) {
      const btn = doc.createElement("button");
      btn.className = "pred-button";
      btn.dataset.pred = pred.name;
      const st = this.state.test.predicateStates[pred.name];
      btn.dataset.state = st ? st.state : "dontTest";
      btn.textContent = pred.name;
      btn.addEventListener("click", () =>
        this.handlers.onOpenPredicate(pred.name),
      );
      predList.appendChild(btn);
    }
    this.root.appendChild(predList);

    const run = doc.createElement("button");
    run.id = "run-button";
    run.textContent = "Run";
    run.addEventListener("click", () => this.handlers.onRun());
    this.root.appendChild(run);
  }
}
