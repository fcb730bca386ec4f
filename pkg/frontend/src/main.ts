import { ApiClient } from "./api.js";
import { Notifier } from "./banner.js";
import { CanvasController } from "./canvas.js";
import { Drawer } from "./drawer.js";
import { ConnectionModal, PredicatesModal } from "./modals.js";
import { AppState } from "./state.js";

interface DragState {
  atomId: string;
  offsetX: number;
  offsetY: number;
}

/**
 * Page wiring. With ?project= and ?test= in the URL the canvas opens
 * directly; otherwise a plain list of projects and tests is offered.
 * All durable state lives server-side, so a reload lands back on the
 * same canvas by re-fetching it.
 */
export async function boot(doc: Document): Promise<void> {
  const params = new URLSearchParams(doc.defaultView?.location.search ?? "");
  const projectId = params.get("project");
  const testName = params.get("test");
  const api = new ApiClient();

  if (!projectId || !testName) {
    await renderPicker(doc, api);
    return;
  }

  const state = new AppState(api, projectId, testName);
  await state.load();

  const notifier = new Notifier(doc);
  const canvasEl = doc.getElementById("canvas")!;
  const modalHost = doc.getElementById("modal-root")!;

  const connectionModal = new ConnectionModal(
    state,
    api,
    notifier,
    modalHost,
    async () => {
      await controller.refresh();
    },
  );
  const controller: CanvasController = new CanvasController(
    state,
    api,
    notifier,
    canvasEl,
    {
      openConnectionModal: (relation, presetSource) => {
        void connectionModal.open(relation, presetSource);
      },
    },
  );
  const predicatesModal = new PredicatesModal(state, api, notifier, modalHost, {
    run: () => controller.runTest(),
    onStateChanged: async () => {
      await controller.refresh();
      drawer.render();
    },
  });
  const drawer = new Drawer(doc.getElementById("drawer")!, state, {
    onAddAtom: (sig) => {
      void controller.spawnAtom(sig);
    },
    onOpenPredicate: () => {
      void predicatesModal.open();
    },
    onRun: () => {
      void controller.runTest();
    },
  });

  doc.getElementById("test-title")!.textContent =
    `${state.project.name} / ${testName}`;
  drawer.render();
  controller.render();

  // Sig tokens dropped from the drawer spawn at the drop point.
  canvasEl.addEventListener("dragover", (ev) => ev.preventDefault());
  canvasEl.addEventListener("drop", (ev) => {
    ev.preventDefault();
    const sig = ev.dataTransfer?.getData("text/sig");
    if (!sig) {
      return;
    }
    const rect = canvasEl.getBoundingClientRect();
    void controller.spawnAtom(sig, ev.clientX - rect.left, ev.clientY - rect.top);
  });

  // Clicking empty canvas or pressing Escape abandons a pending wire.
  canvasEl.addEventListener("click", (ev) => {
    if (ev.target === canvasEl) {
      controller.cancelConnection();
    }
  });
  doc.addEventListener("keydown", (ev) => {
    if (ev.key === "Escape") {
      controller.cancelConnection();
      connectionModal.close();
      predicatesModal.close();
    }
  });

  let drag: DragState | null = null;
  canvasEl.addEventListener("mousedown", (ev) => {
    const target = ev.target as HTMLElement;
    if (target.closest("button, select, .badge, .port")) {
      return;
    }
    const atomEl = target.closest<HTMLElement>(".atom");
    if (!atomEl || controller.pending) {
      return;
    }
    const rect = canvasEl.getBoundingClientRect();
    const atom = state.atom(atomEl.dataset.atomId ?? "");
    if (!atom) {
      return;
    }
    drag = {
      atomId: atom.id,
      offsetX: ev.clientX - rect.left - atom.x,
      offsetY: ev.clientY - rect.top - atom.y,
    };
  });
  doc.addEventListener("mousemove", (ev) => {
    if (!drag) {
      return;
    }
    const rect = canvasEl.getBoundingClientRect();
    controller.moveAtom(
      drag.atomId,
      ev.clientX - rect.left - drag.offsetX,
      ev.clientY - rect.top - drag.offsetY,
    );
  });
  doc.addEventListener("mouseup", () => {
    if (drag) {
      drag = null;
      void controller.flushMove();
    }
  });
}

async function renderPicker(doc: Document, api: ApiClient): Promise<void> {
  const canvasEl = doc.getElementById("canvas")!;
  canvasEl.textContent = "";
  const list = doc.createElement("ul");
  list.id = "project-picker";

  const resp = await fetch("/projects");
  const { projects } = (await resp.json()) as {
    projects: { id: string; name: string }[];
  };
  for (const project of projects) {
    const item = doc.createElement("li");
    const caption = doc.createElement("strong");
    caption.textContent = project.name;
    item.appendChild(caption);
    const tests = doc.createElement("ul");
    const detail = await api.getProject(project.id);
    for (const test of detail.tests) {
      const leaf = doc.createElement("li");
      const link = doc.createElement("a");
      link.href = `?project=${encodeURIComponent(project.id)}&test=${encodeURIComponent(test)}`;
      link.textContent = test;
      leaf.appendChild(link);
      tests.appendChild(leaf);
    }
    item.appendChild(tests);
    list.appendChild(item);
  }
  canvasEl.appendChild(list);
  doc.getElementById("test-title")!.textContent = "pick a test case";
}

if (typeof document !== "undefined" && document.getElementById("canvas")) {
  void boot(document);
}
