/**
 * Typed client for the session API.  All topology lives server-side; the UI
 * only reads snapshots, posts edits and listens to the event stream.
 *
 * fetch / EventSource are injectable so tests can script the server.
 */

export type Vec3 = [number, number, number];

export interface PolygonData {
  degree: number;
  points: Vec3[];
}

export interface QuickAnalysis {
  simple: boolean;
  witness_segments: [number, number] | null;
  degree: number;
  total_curvature: number;
}

export interface SessionSnapshot {
  api: number;
  id: string;
  version: number;
  polygon: PolygonData;
  quick?: QuickAnalysis;
}

export interface SamplesResponse {
  version: number;
  count: number;
  points: Vec3[];
}

export interface SubdivisionResponse {
  u: number;
  depth: number;
  polygons: Vec3[][];
}

export interface SessionEvent {
  type: string;
  version?: number;
  quick?: QuickAnalysis;
  checks?: string[];
  result?: Record<string, unknown>;
}

export type FetchLike = (url: string, init?: RequestInit) => Promise<Response>;

export class ApiError extends Error {
  constructor(readonly status: number, detail: string) {
    super(detail);
  }
}

export class SessionClient {
  constructor(
    readonly base: string,
    private readonly fetchImpl: FetchLike = (u, i) => fetch(u, i),
  ) {}

  private async request<T>(method: string, path: string, body?: unknown): Promise<T> {
    const response = await this.fetchImpl(`${this.base}${path}`, {
      method,
      headers: body === undefined ? undefined : { "Content-Type": "application/json" },
      body: body === undefined ? undefined : JSON.stringify(body),
    });
    if (!response.ok) {
      let detail = `${response.status}`;
      try {
        const payload = await response.json();
        detail = typeof payload.detail === "string" ? payload.detail : JSON.stringify(payload);
      } catch {
        /* no JSON body */
      }
      throw new ApiError(response.status, detail);
    }
    if (response.status === 204) return undefined as T;
    return (await response.json()) as T;
  }

  createSession(init?: { fixture?: string; polygon?: PolygonData }): Promise<SessionSnapshot> {
    return this.request("POST", "/sessions", init ?? { fixture: "trefoil" });
  }

  getPolygon(id: string): Promise<SessionSnapshot> {
    return this.request("GET", `/sessions/${id}/polygon`);
  }

  moveVertex(id: string, index: number, point: Vec3): Promise<SessionSnapshot> {
    return this.request("POST", `/sessions/${id}/vertex/${index}`, { op: "move", point });
  }

  samples(id: string, count = 512): Promise<SamplesResponse> {
    return this.request("GET", `/sessions/${id}/samples?count=${count}`);
  }

  subdivision(id: string, u: number, depth: number): Promise<SubdivisionResponse> {
    return this.request("GET", `/sessions/${id}/subdivision?u=${u}&depth=${depth}`);
  }

  scheduleAnalysis(id: string, checks: string[]): Promise<{ status: string }> {
    return this.request("POST", `/sessions/${id}/analysis`, { checks });
  }

  /** Subscribe to the server-sent event stream; returns an unsubscribe. */
  events(id: string, onEvent: (e: SessionEvent) => void,
         sourceFactory?: (url: string) => EventSource): () => void {
    const make = sourceFactory ?? ((url: string) => new EventSource(url));
    const source = make(`${this.base}/sessions/${id}/events`);
    source.onmessage = (message) => {
      try {
        onEvent(JSON.parse(message.data) as SessionEvent);
      } catch {
        /* ignore malformed frames */
      }
    };
    return () => source.close();
  }
}
