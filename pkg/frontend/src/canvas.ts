import { ApiClient, ApiError } from "./api.js";
import type { Notifier } from "./banner.js";
import type { AppState } from "./state.js";
import type { AtomJson, ConnectionJson } from "./types.js";

// Atom boxes are fixed-size rounded rects; wires anchor at the center.
export const ATOM_W = 120;
export const ATOM_H = 48;

const SVG_NS = "http://www.w3.org/2000/svg";

export interface PendingConnection {
  relation: string;
  sourceId: string;
  targets: string[];
}

export interface CanvasHooks {
  /** Arity three and up goes through the column-by-column modal. */
  openConnectionModal(relation: string, presetSource: string): void;
}

interface QueuedMove {
  atomId: string;
  x: number;
  y: number;
}

/**
 * Owns the canvas DOM and every canvas-side API interaction.
 *
 * The server stays the source of truth: each successful mutation is
 * followed by a GET of the whole test body and a full redraw, so the
 * screen always shows exactly what a fresh page load would show. The
 * one exception is dragging, which moves the box locally and persists
 * through a trailing-edge throttled PATCH.
 */
export class CanvasController {
  pending: PendingConnection | null = null;

  private moveTimer: ReturnType<typeof setTimeout> | null = null;
  private queuedMove: QueuedMove | null = null;
  private readonly throttleMs: number;

  constructor(
    private readonly state: AppState,
    private readonly api: ApiClient,
    private readonly notifier: Notifier,
    private readonly root: HTMLElement,
    private readonly hooks: CanvasHooks,
    opts: { patchThrottleMs?: number } = {},
  ) {
    this.throttleMs = opts.patchThrottleMs ?? 150;
  }

  // ── data flow ─────────────────────────────────────────────────────

  async refresh(): Promise<void> {
    this.state.setTest(
      await this.api.getTest(this.state.projectId, this.state.testName),
    );
    this.render();
  }

  private async mutate(action: () => Promise<unknown>): Promise<boolean> {
    try {
      await action();
    } catch (err) {
      if (err instanceof ApiError) {
        // Server refusals are shown word for word.
        this.notifier.alert(err.message);
        return false;
      }
      throw err;
    }
    await this.refresh();
    return true;
  }

  async spawnAtom(sig: string, x?: number, y?: number): Promise<boolean> {
    const n = this.state.test.atoms.length;
    // Cascade fresh atoms so stacked drops stay visible.
    const px = x ?? 40 + (n % 6) * 40;
    const py = y ?? 40 + n * 28;
    return this.mutate(() =>
      this.api.addAtom(this.state.projectId, this.state.testName, sig, px, py),
    );
  }

  async removeAtom(atomId: string): Promise<boolean> {
    return this.mutate(() =>
      this.api.removeAtom(this.state.projectId, this.state.testName, atomId),
    );
  }

  async toggleMarker(atomId: string, subsetSig: string): Promise<boolean> {
    const atom = this.state.atom(atomId);
    if (!atom) {
      return false;
    }
    const subsets = atom.subsets.includes(subsetSig)
      ? atom.subsets.filter((s) => s !== subsetSig)
      : [...atom.subsets, subsetSig];
    return this.mutate(() =>
      this.api.patchAtom(this.state.projectId, this.state.testName, atomId, {
        subsets,
      }),
    );
  }

  async removeConnection(index: number): Promise<boolean> {
    return this.mutate(() =>
      this.api.removeConnection(this.state.projectId, this.state.testName, index),
    );
  }

  // ── connection drawing ────────────────────────────────────────────

  async beginConnection(relation: string, sourceId: string): Promise<void> {
    const { targets } = await this.api.validTargets(
      this.state.projectId,
      this.state.testName,
      relation,
      [sourceId],
    );
    if (targets.length === 0) {
      const nick = this.state.atom(sourceId)?.nickname ?? sourceId;
      this.notifier.notice(`no valid ${relation} targets from ${nick}`);
      return;
    }
    this.pending = { relation, sourceId, targets };
    this.applyHighlights();
  }

  async completeConnection(targetId: string): Promise<void> {
    const pending = this.pending;
    if (!pending) {
      return;
    }
    if (!pending.targets.includes(targetId)) {
      // Grayed atoms are inert; the connection attempt stays open.
      this.notifier.notice(`not a valid target for ${pending.relation}`);
      return;
    }
    this.pending = null;
    await this.mutate(() =>
      this.api.addConnection(
        this.state.projectId,
        this.state.testName,
        pending.relation,
        [pending.sourceId, targetId],
      ),
    );
  }

  cancelConnection(): void {
    if (this.pending) {
      this.pending = null;
      this.render();
    }
  }

  // ── drag persistence ──────────────────────────────────────────────

  moveAtom(atomId: string, x: number, y: number): void {
    const atom = this.state.atom(atomId);
    if (!atom) {
      return;
    }
    atom.x = x;
    atom.y = y;
    const el = this.atomElement(atomId);
    if (el) {
      el.style.left = `${x}px`;
      el.style.top = `${y}px`;
    }
    this.drawWires();
    // A new drag target must not orphan the previous atom's position.
    if (this.queuedMove && this.queuedMove.atomId !== atomId) {
      void this.sendQueuedMove();
    }
    this.queuedMove = { atomId, x, y };
    if (this.moveTimer === null) {
      this.moveTimer = setTimeout(() => {
        this.moveTimer = null;
        void this.sendQueuedMove();
      }, this.throttleMs);
    }
  }

  /** Push any position still waiting on the throttle; call on drag end. */
  async flushMove(): Promise<void> {
    if (this.moveTimer !== null) {
      clearTimeout(this.moveTimer);
      this.moveTimer = null;
    }
    await this.sendQueuedMove();
  }

  private async sendQueuedMove(): Promise<void> {
    const queued = this.queuedMove;
    this.queuedMove = null;
    if (!queued) {
      return;
    }
    await this.api.patchAtom(
      this.state.projectId,
      this.state.testName,
      queued.atomId,
      { x: queued.x, y: queued.y },
    );
  }

  // ── execution ─────────────────────────────────────────────────────

  async runTest(): Promise<void> {
    this.notifier.clearBanner();
    try {
      const result = await this.api.runTest(
        this.state.projectId,
        this.state.testName,
      );
      if (result.status === "pass") {
        this.notifier.showPass(result.elapsedMs);
      } else {
        const failing = result.diagnostics
          .filter((d) => !d.holds)
          .map((d) => d.subject);
        this.notifier.showFail(failing, result.elapsedMs);
      }
    } catch (err) {
      if (err instanceof ApiError && err.code === "structuralBlock") {
        const violations = Array.isArray(err.details) ? err.details : [];
        this.notifier.showBlocked(
          violations.map((v) => String((v as { detail: unknown }).detail)),
        );
      } else if (err instanceof ApiError) {
        this.notifier.alert(err.message);
      } else {
        throw err;
      }
    }
  }

  // ── rendering ─────────────────────────────────────────────────────

  render(): void {
    this.root.textContent = "";
    const doc = this.root.ownerDocument;

    const wires = doc.createElementNS(SVG_NS, "svg");
    wires.setAttribute("id", "wires");
    this.root.appendChild(wires);

    for (const atom of this.state.test.atoms) {
      this.root.appendChild(this.buildAtom(atom));
    }
    this.drawWires();
    this.applyHighlights();
  }

  atomElement(atomId: string): HTMLElement | null {
    return this.root.querySelector(`[data-atom-id="${atomId}"]`);
  }

  private buildAtom(atom: AtomJson): HTMLElement {
    const doc = this.root.ownerDocument;
    const el = doc.createElement("div");
    el.className = "atom";
    el.dataset.atomId = atom.id;
    el.dataset.sig = atom.sig;
    el.style.left = `${atom.x}px`;
    el.style.top = `${atom.y}px`;
    el.style.background = this.state.colorFor(atom.sig);

    const nick = doc.createElement("span");
    nick.className = "nick";
    nick.textContent = atom.nickname;
    el.appendChild(nick);

    const del = doc.createElement("button");
    del.className = "atom-delete";
    del.textContent = "×";
    del.addEventListener("click", (ev) => {
      ev.stopPropagation();
      void this.removeAtom(atom.id);
    });
    el.appendChild(del);

    const badges = doc.createElement("div");
    badges.className = "badges";
    for (const subset of this.state.subsetSigsFor(atom.sig)) {
      const badge = doc.createElement("span");
      badge.className = atom.subsets.includes(subset.name)
        ? "badge on"
        : "badge";
      badge.dataset.subset = subset.name;
      badge.textContent = subset.name;
      badge.addEventListener("click", (ev) => {
        ev.stopPropagation();
        void this.toggleMarker(atom.id, subset.name);
      });
      badges.appendChild(badge);
    }
    el.appendChild(badges);

    const ports = doc.createElement("div");
    ports.className = "ports";
    for (const field of this.fieldsFrom(atom)) {
      const port = doc.createElement("button");
      port.className = "port";
      port.dataset.relation = field.name;
      port.textContent = field.name;
      port.addEventListener("click", (ev) => {
        ev.stopPropagation();
        if (field.cols.length === 2) {
          void this.beginConnection(field.name, atom.id);
        } else {
          this.hooks.openConnectionModal(field.name, atom.id);
        }
      });
      ports.appendChild(port);
    }
    el.appendChild(ports);

    el.addEventListener("click", () => {
      if (this.pending) {
        void this.completeConnection(atom.id);
      }
    });
    return el;
  }

  /** Fields this atom can head, by declared first column. */
  private fieldsFrom(atom: AtomJson) {
    const families = this.state.ancestry(atom.sig);
    for (const s of atom.subsets) {
      families.add(s);
    }
    return this.state.project.schema.fields.filter((f) =>
      families.has(f.cols[0]),
    );
  }

  private drawWires(): void {
    const svg = this.root.querySelector("#wires");
    if (!svg) {
      return;
    }
    svg.textContent = "";
    this.state.test.connections.forEach((conn, index) => {
      svg.appendChild(this.buildWire(conn, index));
    });
  }

  private buildWire(conn: ConnectionJson, index: number): SVGElement {
    const doc = this.root.ownerDocument;
    const group = doc.createElementNS(SVG_NS, "g");
    group.setAttribute("class", "wire");
    group.setAttribute("data-index", String(index));
    group.setAttribute("data-relation", conn.relation);

    const center = (atomId: string): [number, number] => {
      const atom = this.state.atom(atomId);
      return atom
        ? [atom.x + ATOM_W / 2, atom.y + ATOM_H / 2]
        : [0, 0];
    };

    // Higher-arity tuples render as chained segments through each atom.
    for (let i = 0; i + 1 < conn.atomIds.length; i++) {
      const [x1, y1] = center(conn.atomIds[i]);
      const [x2, y2] = center(conn.atomIds[i + 1]);
      if (conn.atomIds[i] === conn.atomIds[i + 1]) {
        const loop = doc.createElementNS(SVG_NS, "path");
        loop.setAttribute(
          "d",
          `M ${x1} ${y1 - ATOM_H / 2} c -30 -36, 30 -36, 0 0`,
        );
        loop.setAttribute("class", "wire-line");
        group.appendChild(loop);
      } else {
        const line = doc.createElementNS(SVG_NS, "line");
        line.setAttribute("x1", String(x1));
        line.setAttribute("y1", String(y1));
        line.setAttribute("x2", String(x2));
        line.setAttribute("y2", String(y2));
        line.setAttribute("class", "wire-line");
        group.appendChild(line);
      }
    }

    const [sx, sy] = center(conn.atomIds[0]);
    const [tx, ty] = center(conn.atomIds[1] ?? conn.atomIds[0]);
    const label = doc.createElementNS(SVG_NS, "text");
    label.setAttribute("x", String((sx + tx) / 2));
    label.setAttribute("y", String((sy + ty) / 2 - 6));
    label.setAttribute("class", "wire-label");
    label.textContent = conn.relation;
    label.addEventListener("click", () => {
      void this.removeConnection(index);
    });
    group.appendChild(label);

    // Hovering a connection grays out every atom not on it.
    const members = new Set(conn.atomIds);
    group.addEventListener("mouseenter", () => this.dimExcept(members));
    group.addEventListener("mouseleave", () => this.clearDim());
    return group;
  }

  private applyHighlights(): void {
    const pending = this.pending;
    for (const el of this.root.querySelectorAll<HTMLElement>(".atom")) {
      el.classList.remove("glow", "grayed", "source");
      if (!pending) {
        continue;
      }
      const id = el.dataset.atomId ?? "";
      if (pending.targets.includes(id)) {
        el.classList.add("glow");
      } else {
        el.classList.add("grayed");
      }
      if (id === pending.sourceId) {
        el.classList.add("source");
      }
    }
  }

  dimExcept(keep: Set<string>): void {
    for (const el of this.root.querySelectorAll<HTMLElement>(".atom")) {
      el.classList.toggle("dimmed", !keep.has(el.dataset.atomId ?? ""));
    }
  }

  clearDim(): void {
    for (const el of this.root.querySelectorAll<HTMLElement>(".atom")) {
      el.classList.remove("dimmed");
    }
  }
}
