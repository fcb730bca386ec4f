// Connection-mode highlighting must agree with the valid-targets query
// exactly: the returned atoms glow, every other atom is grayed and inert.

import { afterEach, beforeEach, describe, expect, it } from "vitest";

import {
  alertTexts,
  atomIdsWithClass,
  flush,
  mountApp,
  type App,
} from "./helpers.js";
import { LISTS_SCHEMA, MockServer, project } from "./mock_server.js";

describe("valid-target highlighting", () => {
  let server: MockServer;
  let app: App;
  let listId: string;
  let nodeIds: string[];

  beforeEach(async () => {
    server = new MockServer(project("lists", LISTS_SCHEMA));
    app = await mountApp(server);
    await app.controller.spawnAtom("List");
    await app.controller.spawnAtom("Node");
    await app.controller.spawnAtom("Node");
    await app.controller.spawnAtom("Node");
    listId = server.test.atoms[0].id;
    nodeIds = server.test.atoms.slice(1).map((a) => a.id);
  });

  afterEach(() => {
    app.uninstall();
  });

  async function freshTargets(relation: string, source: string) {
    const { targets } = await app.api.validTargets(
      "lists",
      "t0",
      relation,
      [source],
    );
    return [...targets].sort();
  }

  it("glows exactly the atoms the server lists for header", async () => {
    await app.controller.beginConnection("header", listId);

    const expected = await freshTargets("header", listId);
    expect(expected).toEqual([...nodeIds].sort());
    expect(atomIdsWithClass("glow")).toEqual(expected);
    expect(atomIdsWithClass("grayed")).toEqual([listId]);
    expect(atomIdsWithClass("source")).toEqual([listId]);
  });

  it("includes the source itself when self-loops are legal", async () => {
    await app.controller.beginConnection("link", nodeIds[0]);

    const expected = await freshTargets("link", nodeIds[0]);
    expect(expected).toEqual([...nodeIds].sort());
    expect(atomIdsWithClass("glow")).toEqual(expected);
    // Only the List atom is out of bounds for link.
    expect(atomIdsWithClass("grayed")).toEqual([listId]);
  });

  it("drops highlights once the connection lands", async () => {
    await app.controller.beginConnection("header", listId);
    await app.controller.completeConnection(nodeIds[1]);
    await flush();

    expect(app.controller.pending).toBeNull();
    expect(atomIdsWithClass("glow")).toEqual([]);
    expect(atomIdsWithClass("grayed")).toEqual([]);
    expect(server.test.connections).toEqual([
      { relation: "header", atomIds: [listId, nodeIds[1]] },
    ]);
  });

  it("shows a notice and no highlights when the target set is empty", async () => {
    await app.controller.beginConnection("header", listId);
    await app.controller.completeConnection(nodeIds[0]);
    await flush();

    // header is lone, so the List atom is saturated now.
    expect(await freshTargets("header", listId)).toEqual([]);
    await app.controller.beginConnection("header", listId);

    expect(app.controller.pending).toBeNull();
    expect(atomIdsWithClass("glow")).toEqual([]);
    expect(alertTexts()).toEqual(["no valid header targets from List0"]);
  });

  it("treats a drop on a grayed atom as a no-op with a notice", async () => {
    await app.controller.beginConnection("header", listId);
    const before = server.requests("POST", "/connections").length;

    // The List atom is grayed; clicking it must not post anything.
    document
      .querySelector<HTMLElement>(`[data-atom-id="${listId}"]`)!
      .click();
    await flush();

    expect(server.requests("POST", "/connections")).toHaveLength(before);
    expect(alertTexts()).toEqual(["not a valid target for header"]);
    // The attempt stays open for a retry on a glowing atom.
    expect(app.controller.pending?.relation).toBe("header");
  });

  it("clears every highlight on cancel", async () => {
    await app.controller.beginConnection("header", listId);
    app.controller.cancelConnection();

    expect(atomIdsWithClass("glow")).toEqual([]);
    expect(atomIdsWithClass("grayed")).toEqual([]);
    expect(atomIdsWithClass("source")).toEqual([]);
  });

  it("excludes saturated link sources from a fresh query", async () => {
    await app.controller.beginConnection("link", nodeIds[0]);
    await app.controller.completeConnection(nodeIds[1]);
    await flush();

    // Node0 already links out; lone forbids a second tuple from it.
    expect(await freshTargets("link", nodeIds[0])).toEqual([]);
    await app.controller.beginConnection("link", nodeIds[0]);
    expect(app.controller.pending).toBeNull();
    expect(atomIdsWithClass("glow")).toEqual([]);
  });
});
