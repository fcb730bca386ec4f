// The predicates modal: tri-state selection persists through PUT and is
// reloaded through GET, argument pickers gate the PUT until complete,
// and Run paints the pass/fail/blocked banner.

import { afterEach, beforeEach, describe, expect, it } from "vitest";

import { alertTexts, banner, flush, mountApp, type App } from "./helpers.js";
import {
  LISTS_SCHEMA,
  MockServer,
  PARAM_SCHEMA,
  project,
} from "./mock_server.js";

function triRadio(pred: string, value: string): HTMLInputElement {
  return document.querySelector<HTMLInputElement>(
    `.pred-row[data-pred="${pred}"] input[value="${value}"]`,
  )!;
}

function checkTri(pred: string, value: string): void {
  // click() runs the radio activation steps, so the rest of the group
  // unchecks and the change event fires, as in a real browser.
  triRadio(pred, value).click();
}

describe("predicate tri-state round-trip", () => {
  let server: MockServer;
  let app: App;

  beforeEach(async () => {
    server = new MockServer(project("lists", LISTS_SCHEMA));
    app = await mountApp(server);
    await app.controller.spawnAtom("List");
  });

  afterEach(() => {
    app.uninstall();
  });

  it("defaults to Don't Test and persists each switch through PUT", async () => {
    await app.predicatesModal.open();
    expect(triRadio("acyclic", "dontTest").checked).toBe(true);

    checkTri("acyclic", "valid");
    await flush();
    expect(server.requests("PUT", "/predicates/acyclic")).toHaveLength(1);
    expect(server.test.predicateStates.acyclic).toEqual({
      state: "valid",
      args: [],
    });

    checkTri("acyclic", "invalid");
    await flush();
    expect(server.test.predicateStates.acyclic).toEqual({
      state: "invalid",
      args: [],
    });
  });

  it("reopening the modal reads the persisted state back through GET", async () => {
    await app.predicatesModal.open();
    checkTri("acyclic", "invalid");
    await flush();
    app.predicatesModal.close();

    const getsBefore = server.requests("GET", "/tests/t0").length;
    await app.predicatesModal.open();

    expect(server.requests("GET", "/tests/t0").length).toBeGreaterThan(
      getsBefore,
    );
    expect(triRadio("acyclic", "invalid").checked).toBe(true);
    expect(triRadio("acyclic", "dontTest").checked).toBe(false);
  });

  it("returning to Don't Test clears the stored expectation", async () => {
    await app.predicatesModal.open();
    checkTri("acyclic", "valid");
    await flush();
    checkTri("acyclic", "dontTest");
    await flush();

    expect(server.test.predicateStates.acyclic).toEqual({
      state: "dontTest",
      args: [],
    });
    app.predicatesModal.close();
    await app.predicatesModal.open();
    expect(triRadio("acyclic", "dontTest").checked).toBe(true);
  });

  it("mirrors the state onto the drawer's predicate buttons", async () => {
    await app.predicatesModal.open();
    checkTri("acyclic", "valid");
    await flush();

    const button = document.querySelector<HTMLElement>(
      '#drawer .pred-button[data-pred="acyclic"]',
    )!;
    expect(button.dataset.state).toBe("valid");
  });
});

describe("parameterized predicate arguments", () => {
  let server: MockServer;
  let app: App;
  let nodeIds: string[];

  beforeEach(async () => {
    server = new MockServer(project("param", PARAM_SCHEMA));
    app = await mountApp(server);
    await app.controller.spawnAtom("Node");
    await app.controller.spawnAtom("Node");
    nodeIds = server.test.atoms.map((a) => a.id);
  });

  afterEach(() => {
    app.uninstall();
  });

  it("holds the PUT until every argument is picked", async () => {
    await app.predicatesModal.open();
    checkTri("self_loop", "valid");
    await flush();

    const row = document.querySelector<HTMLElement>(
      '.pred-row[data-pred="self_loop"]',
    )!;
    expect(server.requests("PUT", "/predicates")).toHaveLength(0);
    expect(row.classList.contains("needs-args")).toBe(true);

    const argSelect = row.querySelector<HTMLSelectElement>(".arg-select")!;
    argSelect.value = nodeIds[0];
    argSelect.dispatchEvent(new Event("change"));
    await flush();

    expect(server.test.predicateStates.self_loop).toEqual({
      state: "valid",
      args: [nodeIds[0]],
    });
    expect(row.classList.contains("needs-args")).toBe(false);
  });

  it("round-trips the chosen argument by nickname", async () => {
    await app.predicatesModal.open();
    checkTri("self_loop", "invalid");
    const row = document.querySelector<HTMLElement>(
      '.pred-row[data-pred="self_loop"]',
    )!;
    const argSelect = row.querySelector<HTMLSelectElement>(".arg-select")!;
    const byNickname = Array.from(argSelect.options).find(
      (o) => o.textContent === "Node1",
    )!;
    argSelect.value = byNickname.value;
    argSelect.dispatchEvent(new Event("change"));
    await flush();
    app.predicatesModal.close();

    await app.predicatesModal.open();
    const reopened = document.querySelector<HTMLSelectElement>(
      '.pred-row[data-pred="self_loop"] .arg-select',
    )!;
    expect(reopened.value).toBe(nodeIds[1]);
    expect(triRadio("self_loop", "invalid").checked).toBe(true);
  });
});

describe("run banner", () => {
  let server: MockServer;
  let app: App;

  beforeEach(async () => {
    server = new MockServer(project("lists", LISTS_SCHEMA));
    app = await mountApp(server);
    await app.controller.spawnAtom("List");
  });

  afterEach(() => {
    app.uninstall();
  });

  it("paints green on pass", async () => {
    server.runResult = {
      status: "pass",
      commandString: "some disj l0 : List {\n}",
      diagnostics: [{ kind: "structural", subject: "one sig List", holds: true }],
      elapsedMs: 2.5,
    };
    await app.predicatesModal.open();
    document.getElementById("modal-run")!.click();
    await flush();

    expect(banner().className).toBe("pass");
    expect(banner().textContent).toContain("PASS");
    expect(banner().hidden).toBe(false);
  });

  it("paints red on fail and names the failing constraints", async () => {
    server.runResult = {
      status: "fail",
      commandString: "",
      diagnostics: [
        { kind: "structural", subject: "one sig List", holds: true },
        { kind: "predicate", subject: "acyclic", holds: false },
      ],
      elapsedMs: 4.0,
    };
    await app.controller.runTest();

    expect(banner().className).toBe("fail");
    expect(banner().textContent).toContain("FAIL: acyclic");
  });

  it("paints amber with the pre-run report when the run is blocked", async () => {
    server.runBlocked = [
      { kind: "lowerBound", subject: "List", detail: "one sig List has no atoms" },
    ];
    await app.controller.runTest();

    expect(banner().className).toBe("blocked");
    expect(banner().textContent).toContain("one sig List has no atoms");
    expect(alertTexts()).toEqual([]);
  });
});
