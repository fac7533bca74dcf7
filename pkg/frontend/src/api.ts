/** Client for the /v1 service API.
 *
 * Every method resolves to the parsed document together with the raw
 * response text, so views can display the server's bytes verbatim.  At
 * most one simulate/run request is in flight at a time: submitting a new
 * one aborts the previous.
 */

import type {
  AnalysisDoc,
  InvertDoc,
  MapDoc,
  MapListEntry,
  RankingDoc,
  Raw,
  ScenarioBody,
  TargetBody,
  TrajectoryDoc,
} from "./types.js";

export class ApiError extends Error {
  constructor(
    message: string,
    readonly code: string,
    readonly status: number,
  ) {
    super(message);
  }
}

/** Server unreachable or response unreadable; the UI offers a retry. */
export class ConnectionError extends Error {}

async function parseErrorEnvelope(response: Response): Promise<ApiError> {
  let code = "error";
  let message = `request failed with status ${response.status}`;
  try {
    const body = (await response.json()) as { error?: { code?: string; message?: string } };
    if (body.error) {
      code = body.error.code ?? code;
      message = body.error.message ?? message;
    }
  } catch {
    // keep the generic message
  }
  return new ApiError(message, code, response.status);
}

export class ApiClient {
  private runController: AbortController | null = null;

  constructor(
    readonly baseUrl: string,
    private readonly fetchImpl: typeof fetch = fetch,
  ) {}

  private async request<T>(
    path: string,
    init: RequestInit = {},
  ): Promise<Raw<T>> {
    let response: Response;
    try {
      response = await this.fetchImpl(`${this.baseUrl}${path}`, {
        headers: { "content-type": "application/json" },
        ...init,
      });
    } catch (err) {
      if (err instanceof DOMException && err.name === "AbortError") throw err;
      throw new ConnectionError(`cannot reach server at ${this.baseUrl}`);
    }
    if (!response.ok) throw await parseErrorEnvelope(response);
    const raw = await response.text();
    return { doc: JSON.parse(raw) as T, raw };
  }

  listMaps(): Promise<Raw<{ maps: MapListEntry[] }>> {
    return this.request("/v1/maps");
  }

  getMap(id: string): Promise<Raw<MapDoc>> {
    return this.request(`/v1/maps/${id}`);
  }

  createMap(doc: MapDoc): Promise<Raw<{ id: string; revision: number }>> {
    return this.request("/v1/maps", { method: "POST", body: JSON.stringify(doc) });
  }

  putMap(id: string, doc: MapDoc): Promise<Raw<{ id: string; revision: number }>> {
    return this.request(`/v1/maps/${id}`, { method: "PUT", body: JSON.stringify(doc) });
  }

  analyze(id: string, tol = 1e-6): Promise<Raw<AnalysisDoc>> {
    return this.request(`/v1/maps/${id}/analyze`, {
      method: "POST",
      body: JSON.stringify({ tol }),
    });
  }

  /** Aborts any previous still-running simulate; later submissions win. */
  simulate(
    id: string,
    body: {
      schedule: Record<string, Record<string, number>>;
      horizon: number;
      clamp?: boolean;
      y_base?: Record<string, number> | null;
    },
  ): Promise<Raw<TrajectoryDoc>> {
    this.runController?.abort();
    const controller = new AbortController();
    this.runController = controller;
    return this.request(`/v1/maps/${id}/simulate`, {
      method: "POST",
      body: JSON.stringify(body),
      signal: controller.signal,
    });
  }

  compare(
    id: string,
    scenarios: ScenarioBody[],
    target: TargetBody,
  ): Promise<Raw<RankingDoc>> {
    return this.request(`/v1/maps/${id}/scenarios/compare`, {
      method: "POST",
      body: JSON.stringify({ scenarios, target }),
    });
  }

  invert(
    id: string,
    controls: string[],
    target: TargetBody,
    ridge = 0,
  ): Promise<Raw<InvertDoc>> {
    return this.request(`/v1/maps/${id}/scenarios/invert`, {
      method: "POST",
      body: JSON.stringify({ controls, target, ridge }),
    });
  }
}

/** Base URL: ?api=... query parameter, else same origin. */
export function resolveBaseUrl(location: Location): string {
  const fromQuery = new URLSearchParams(location.search).get("api");
  if (fromQuery) return fromQuery.replace(/\/$/, "");
  return "";
}
