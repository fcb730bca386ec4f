import type { ApiClient } from "./api.js";
import type {
  AtomJson,
  FieldJson,
  ProjectJson,
  SigJson,
  TestJson,
} from "./types.js";

/**
 * Client-side snapshot of one project plus one open test canvas.
 *
 * Everything here is reconstructed from GET responses; the only local
 * additions are lookup maps. Mutating endpoints return the full test
 * body, so refresh() after a write keeps us in sync without diffing.
 */
export class AppState {
  readonly projectId: string;
  readonly testName: string;
  project!: ProjectJson;
  test!: TestJson;

  constructor(
    private readonly api: ApiClient,
    projectId: string,
    testName: string,
  ) {
    this.projectId = projectId;
    this.testName = testName;
  }

  async load(): Promise<void> {
    this.project = await this.api.getProject(this.projectId);
    this.test = await this.api.getTest(this.projectId, this.testName);
  }

  /** Replace the canvas body. Mutation endpoints hand this back directly. */
  setTest(test: TestJson): void {
    this.test = test;
  }

  atom(atomId: string): AtomJson | undefined {
    return this.test.atoms.find((a) => a.id === atomId);
  }

  sig(name: string): SigJson | undefined {
    return this.project.schema.sigs.find((s) => s.name === name);
  }

  field(name: string): FieldJson | undefined {
    return this.project.schema.fields.find((f) => f.name === name);
  }

  /**
   * Sigs shown in the drawer, declaration order. Abstract ones are kept
   * so the hierarchy stays visible, but they render non-draggable;
   * subset sigs never spawn atoms and are left out entirely.
   */
  drawerSigs(): SigJson[] {
    return this.project.schema.sigs
      .filter((s) => s.parentKind !== "in")
      .sort((a, b) => a.declIndex - b.declIndex);
  }

  /** Subset sigs offered as markers on atoms of compatible parents. */
  subsetSigsFor(sigName: string): SigJson[] {
    const lineage = this.ancestry(sigName);
    return this.project.schema.sigs.filter(
      (s) =>
        s.parentKind === "in" && s.parents.some((p) => lineage.has(p)),
    );
  }

  /** The sig itself plus every extends-ancestor, by name. */
  ancestry(sigName: string): Set<string> {
    const seen = new Set<string>();
    let cur = this.sig(sigName);
    while (cur) {
      seen.add(cur.name);
      if (cur.parentKind !== "extends") {
        break;
      }
      cur = this.sig(cur.parents[0]);
    }
    return seen;
  }

  colorFor(sigName: string): string {
    const colors = this.project.colorAssignments;
    // Walk up the extends chain so subsigs inherit their family color.
    for (const name of this.ancestry(sigName)) {
      if (colors[name]) {
        return colors[name];
      }
    }
    return "#8899aa";
  }

  connectionsAt(atomId: string): number[] {
    const hits: number[] = [];
    this.test.connections.forEach((c, i) => {
      if (c.atomIds.includes(atomId)) {
        hits.push(i);
      }
    });
    return hits;
  }
}
