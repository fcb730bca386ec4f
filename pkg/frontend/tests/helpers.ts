// Builds the page skeleton and the full widget graph against a mock
// server, mirroring the wiring in main.ts minus browser-only event glue.

import { ApiClient } from "../src/api.js";
import { Notifier } from "../src/banner.js";
import { CanvasController } from "../src/canvas.js";
import { Drawer } from "../src/drawer.js";
import { ConnectionModal, PredicatesModal } from "../src/modals.js";
import { AppState } from "../src/state.js";
import type { MockServer } from "./mock_server.js";

export interface App {
  api: ApiClient;
  state: AppState;
  notifier: Notifier;
  controller: CanvasController;
  connectionModal: ConnectionModal;
  predicatesModal: PredicatesModal;
  drawer: Drawer;
  uninstall: () => void;
}

const SKELETON = `
  <header>
    <span id="test-title"></span>
    <div id="banner" hidden></div>
  </header>
  <main>
    <aside id="drawer"></aside>
    <section id="canvas"></section>
  </main>
  <div id="alerts"></div>
  <div id="modal-root"></div>
`;

export async function mountApp(
  server: MockServer,
  opts: { patchThrottleMs?: number } = {},
): Promise<App> {
  document.body.innerHTML = SKELETON;
  const uninstall = server.install();

  const api = new ApiClient();
  const state = new AppState(api, server.proj.id, server.test.name);
  await state.load();

  const notifier = new Notifier(document);
  const canvasEl = document.getElementById("canvas")!;
  const modalHost = document.getElementById("modal-root")!;

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
    opts,
  );
  const predicatesModal = new PredicatesModal(state, api, notifier, modalHost, {
    run: () => controller.runTest(),
    onStateChanged: async () => {
      await controller.refresh();
      drawer.render();
    },
  });
  const drawer = new Drawer(document.getElementById("drawer")!, state, {
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

  drawer.render();
  controller.render();
  return {
    api,
    state,
    notifier,
    controller,
    connectionModal,
    predicatesModal,
    drawer,
    uninstall,
  };
}

/** Let queued promise callbacks and fire-and-forget handlers settle. */
export async function flush(rounds = 3): Promise<void> {
  for (let i = 0; i < rounds; i++) {
    await new Promise((resolve) => setTimeout(resolve, 0));
  }
}

export function atomEls(): HTMLElement[] {
  return Array.from(document.querySelectorAll<HTMLElement>("#canvas .atom"));
}

export function atomIdsWithClass(className: string): string[] {
  return atomEls()
    .filter((el) => el.classList.contains(className))
    .map((el) => el.dataset.atomId ?? "")
    .sort();
}

export function alertTexts(): string[] {
  return Array.from(
    document.querySelectorAll("#alerts .alert-popup"),
    (el) => el.textContent ?? "",
  );
}

export function wireEls(): SVGElement[] {
  return Array.from(document.querySelectorAll<SVGElement>("#canvas .wire"));
}

export function banner(): HTMLElement {
  return document.getElementById("banner")!;
}
