// JSON shapes exchanged with the service. Field names mirror the wire
// format exactly; keep them in sync with the server's serializers.

export interface SigJson {
  name: string;
  mult: string; // one | lone | some | any
  abstract: boolean;
  parentKind: string; // top | extends | in
  parents: string[];
  declIndex: number;
}

export interface FieldJson {
  name: string;
  owner: string;
  cols: string[];
  mult: string | null; // null on multi-arrow fields
  arrowMults: (string | null)[][];
  declIndex: number;
}

export interface PredJson {
  name: string;
  params: [string, string][];
  assert: boolean;
  declIndex: number;
}

export interface SchemaJson {
  sigs: SigJson[];
  fields: FieldJson[];
  preds: PredJson[];
}

export interface ProjectJson {
  id: string;
  name: string;
  modelSource: string;
  colorAssignments: Record<string, string>;
  schema: SchemaJson;
  tests: string[];
}

export interface AtomJson {
  id: string;
  sig: string;
  nickname: string;
  subsets: string[];
  x: number;
  y: number;
}

export interface ConnectionJson {
  relation: string;
  atomIds: string[];
}

export interface PredicateStateJson {
  state: string; // dontTest | valid | invalid
  args: string[];
}

export interface TestJson {
  name: string;
  atoms: AtomJson[];
  connections: ConnectionJson[];
  predicateStates: Record<string, PredicateStateJson>;
  nicknameCounters: Record<string, number>;
}

export interface DiagnosticJson {
  kind: string; // structural | fact | predicate
  subject: string;
  holds: boolean;
}

export interface RunResultJson {
  status: string; // pass | fail
  commandString: string;
  diagnostics: DiagnosticJson[];
  elapsedMs: number;
}

export interface ViolationJson {
  kind: string;
  subject: string;
  detail: string;
}

export const DONT_TEST = "dontTest";
export const VALID = "valid";
export const INVALID = "invalid";
export const PREDICATE_STATES = [DONT_TEST, VALID, INVALID] as const;
