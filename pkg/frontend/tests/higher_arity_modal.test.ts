// The ternary connection modal: one dropdown per column, each filled
// from the valid-targets query for the columns chosen so far, and no
// mutation until Connect.

import { afterEach, beforeEach, describe, expect, it } from "vitest";

import { flush, mountApp, wireEls, type App } from "./helpers.js";
import { LTS_SCHEMA, MockServer, project } from "./mock_server.js";

describe("higher-arity connection modal", () => {
  let server: MockServer;
  let app: App;
  let s0: string;
  let s1: string;
  let e0: string;

  beforeEach(async () => {
    server = new MockServer(project("lts", LTS_SCHEMA));
    app = await mountApp(server);
    await app.controller.spawnAtom("State");
    await app.controller.spawnAtom("State");
    await app.controller.spawnAtom("Event");
    [s0, s1, e0] = server.test.atoms.map((a) => a.id);
  });

  afterEach(() => {
    app.uninstall();
  });

  function selects(): HTMLSelectElement[] {
    return Array.from(
      document.querySelectorAll<HTMLSelectElement>(
        ".connection-modal .col-select",
      ),
    );
  }

  function optionValues(select: HTMLSelectElement): string[] {
    return Array.from(select.options, (o) => o.value)
      .filter(Boolean)
      .sort();
  }

  async function targetsFor(prefix: string[]): Promise<string[]> {
    const { targets } = await app.api.validTargets("lts", "t0", "trans", prefix);
    return [...targets].sort();
  }

  it("offers one dropdown per column, filled column by column", async () => {
    await app.connectionModal.open("trans", s0);

    const cols = selects();
    expect(cols).toHaveLength(3);
    expect(optionValues(cols[0])).toEqual(await targetsFor([]));
    expect(cols[0].value).toBe(s0);
    expect(optionValues(cols[1])).toEqual(await targetsFor([s0]));
    // The last column stays disabled until the middle one is chosen.
    expect(cols[2].disabled).toBe(true);

    cols[1].value = e0;
    cols[1].dispatchEvent(new Event("change"));
    await flush();
    expect(optionValues(cols[2])).toEqual(await targetsFor([s0, e0]));
  });

  it("posts the assembled tuple on Connect and closes", async () => {
    await app.connectionModal.open("trans", s0);
    await app.connectionModal.choose(1, e0);
    await app.connectionModal.choose(2, s1);

    const confirm = document.querySelector<HTMLButtonElement>(
      ".connection-modal .confirm",
    )!;
    expect(confirm.disabled).toBe(false);
    confirm.click();
    await flush();

    expect(server.test.connections).toEqual([
      { relation: "trans", atomIds: [s0, e0, s1] },
    ]);
    expect(document.querySelector(".connection-modal")).toBeNull();
    // The chained wire shows up after the post-commit refresh.
    expect(wireEls()).toHaveLength(1);
    expect(wireEls()[0].getAttribute("data-relation")).toBe("trans");
  });

  it("cancel tears the modal down without any mutation", async () => {
    await app.connectionModal.open("trans", s0);
    await app.connectionModal.choose(1, e0);

    document
      .querySelector<HTMLButtonElement>(".connection-modal .cancel")!
      .click();

    expect(server.requests("POST", "/connections")).toHaveLength(0);
    expect(server.test.connections).toEqual([]);
    expect(document.querySelector(".connection-modal")).toBeNull();
  });

  it("filters tuples that already exist from the last column", async () => {
    server.test.connections.push({
      relation: "trans",
      atomIds: [s0, e0, s1],
    });

    await app.connectionModal.open("trans", s0);
    await app.connectionModal.choose(1, e0);

    const last = selects()[2];
    expect(optionValues(last)).toEqual([s0]);
    expect(optionValues(last)).toEqual(await targetsFor([s0, e0]));
  });

  it("resets downstream choices when an upstream column changes", async () => {
    await app.connectionModal.open("trans", s0);
    await app.connectionModal.choose(1, e0);
    await app.connectionModal.choose(2, s1);
    expect(
      document.querySelector<HTMLButtonElement>(".connection-modal .confirm")!
        .disabled,
    ).toBe(false);

    await app.connectionModal.choose(0, s1);

    const cols = selects();
    expect(cols[1].value).toBe("");
    expect(cols[2].value).toBe("");
    expect(
      document.querySelector<HTMLButtonElement>(".connection-modal .confirm")!
        .disabled,
    ).toBe(true);
  });

  it("opens from an atom's port for an arity-three field", async () => {
    const port = document.querySelector<HTMLElement>(
      `[data-atom-id="${s0}"] .port[data-relation="trans"]`,
    )!;
    port.click();
    await flush();

    expect(document.querySelector(".connection-modal")).not.toBeNull();
    expect(selects()[0].value).toBe(s0);
  });
});
