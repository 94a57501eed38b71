/** Typed client for the scoring service. All numbers displayed anywhere in
 * the UI originate from these response bodies; nothing is computed locally. */

import type {
  BandsResponse,
  ModifierLetter,
  ProfilesResponse,
  ScoreRequest,
  ScoreResponse,
  SimulateRequest,
  SimulationResponse,
  TaxonomyResponse,
} from "./types.js";

export type FetchLike = (input: string, init?: RequestInit) => Promise<Response>;

export class ApiError extends Error {
  readonly status: number;
  readonly detail: unknown;

  constructor(status: number, detail: unknown) {
    super(typeof detail === "string" ? detail : `service error (${status})`);
    this.status = status;
    this.detail = detail;
  }
}

export class CortexApi {
  private readonly base: string;
  private readonly fetchImpl: FetchLike;

  constructor(baseUrl: string, fetchImpl?: FetchLike) {
    this.base = baseUrl.replace(/\/$/, "");
    this.fetchImpl = fetchImpl ?? ((input, init) => fetch(input, init));
  }

  private async request<T>(path: string, init?: RequestInit): Promise<T> {
    const response = await this.fetchImpl(`${this.base}${path}`, init);
    const body = await response.json().catch(() => null);
    if (!response.ok) {
      const detail =
        body && typeof body === "object" && "detail" in body
          ? (body as { detail: unknown }).detail
          : body;
      throw new ApiError(response.status, detail);
    }
    return body as T;
  }

  health(): Promise<{ status: string; engine_version: string }> {
    return this.request("/v1/health");
  }

  taxonomy(): Promise<TaxonomyResponse> {
    return this.request("/v1/taxonomy");
  }

  score(req: ScoreRequest): Promise<ScoreResponse> {
    return this.request("/v1/score", {
      method: "POST",
      headers: { "Content-Type": "application/json" },
      body: JSON.stringify(req),
    });
  }

  simulate(req: SimulateRequest): Promise<SimulationResponse> {
    return this.request("/v1/simulate", {
      method: "POST",
      headers: { "Content-Type": "application/json" },
      body: JSON.stringify(req),
    });
  }

  bands(modifier?: ModifierLetter, framework?: string): Promise<BandsResponse> {
    const params = new URLSearchParams();
    if (modifier) params.set("modifier", modifier);
    if (framework) params.set("framework", framework);
    const qs = params.toString();
    return this.request(`/v1/catalogue/bands${qs ? `?${qs}` : ""}`);
  }

  profiles(): Promise<ProfilesResponse> {
    return this.request("/v1/catalogue/profiles");
  }
}
