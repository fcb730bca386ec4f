import type {
  AtomJson,
  ConnectionJson,
  PredicateStateJson,
  ProjectJson,
  RunResultJson,
  TestJson,
} from "./types.js";

/** Error raised when the service answers with its error envelope. */
export class ApiError extends Error {
  readonly code: string;
  readonly status: number;
  // Object for guidance verdicts, array of violations for structural
  // blocks, absent otherwise. Narrow at the use site.
  readonly details: unknown;

  constructor(status: number, code: string, message: string, details?: unknown) {
    super(message);
    this.name = "ApiError";
    this.status = status;
    this.code = code;
    this.details = details;
  }
}

async function request<T>(
  method: string,
  path: string,
  body?: unknown,
): Promise<T> {
  const init: RequestInit = { method };
  if (body !== undefined) {
    init.headers = { "Content-Type": "application/json" };
    init.body = JSON.stringify(body);
  }
  const resp = await fetch(path, init);
  if (resp.status === 204) {
    return undefined as T;
  }
  const payload = await resp.json();
  if (!resp.ok) {
    const err = payload?.error ?? {};
    throw new ApiError(
      resp.status,
      err.code ?? "unknown",
      err.message ?? `request failed with status ${resp.status}`,
      err.details,
    );
  }
  return payload as T;
}

/** Typed wrapper over the slice of the endpoint table the canvas uses. */
export class ApiClient {
  private readonly base: string;

  constructor(base = "") {
    // A trailing slash would double up when joining paths.
    this.base = base.replace(/\/$/, "");
  }

  private url(path: string): string {
    return `${this.base}${path}`;
  }

  getProject(projectId: string): Promise<ProjectJson> {
    return request("GET", this.url(`/projects/${projectId}`));
  }

  getTest(projectId: string, name: string): Promise<TestJson> {
    return request("GET", this.url(`/projects/${projectId}/tests/${name}`));
  }

  addAtom(
    projectId: string,
    test: string,
    sig: string,
    x = 0,
    y = 0,
  ): Promise<AtomJson> {
    return request(
      "POST",
      this.url(`/projects/${projectId}/tests/${test}/atoms`),
      { sig, x, y },
    );
  }

  removeAtom(
    projectId: string,
    test: string,
    atomId: string,
  ): Promise<{ removedConnections: ConnectionJson[] }> {
    return request(
      "DELETE",
      this.url(`/projects/${projectId}/tests/${test}/atoms/${atomId}`),
    );
  }

  patchAtom(
    projectId: string,
    test: string,
    atomId: string,
    patch: { x?: number; y?: number; subsets?: string[] },
  ): Promise<AtomJson> {
    return request(
      "PATCH",
      this.url(`/projects/${projectId}/tests/${test}/atoms/${atomId}`),
      patch,
    );
  }

  addConnection(
    projectId: string,
    test: string,
    relation: string,
    atomIds: string[],
  ): Promise<{ relation: string; atomIds: string[]; index: number }> {
    return request(
      "POST",
      this.url(`/projects/${projectId}/tests/${test}/connections`),
      { relation, atomIds },
    );
  }

  removeConnection(
    projectId: string,
    test: string,
    index: number,
  ): Promise<{ removed: ConnectionJson[] }> {
    return request(
      "DELETE",
      this.url(`/projects/${projectId}/tests/${test}/connections/${index}`),
    );
  }

  validTargets(
    projectId: string,
    test: string,
    relation: string,
    prefixAtomIds: string[],
  ): Promise<{ targets: string[] }> {
    return request(
      "POST",
      this.url(`/projects/${projectId}/tests/${test}/valid-targets`),
      { relation, prefixAtomIds },
    );
  }

  putPredicate(
    projectId: string,
    test: string,
    pred: string,
    state: string,
    args: string[],
  ): Promise<PredicateStateJson> {
    return request(
      "PUT",
      this.url(`/projects/${projectId}/tests/${test}/predicates/${pred}`),
      { state, args },
    );
  }

  runTest(
    projectId: string,
    test: string,
    allowStructuralFailure = false,
  ): Promise<RunResultJson> {
    return request(
      "POST",
      this.url(`/projects/${projectId}/tests/${test}/run`),
      { allowStructuralFailure },
    );
  }
}
