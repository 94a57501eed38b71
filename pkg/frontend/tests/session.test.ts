import { describe, expect, it } from "vitest";

import { ApiError, CortexApi, FetchLike } from "../src/api.js";
import { ScenarioSession, newScenario } from "../src/session.js";
import type { ScoreResponse } from "../src/types.js";

function scoreResponse(composite: number): ScoreResponse {
  return {
    engine_version: "1.0.0",
    taxonomy_version: "2025.1",
    group_id: "pii-leakage",
    likelihood: 4,
    impact: 5,
    severity: 0.8,
    utility: 0.9092820467105875,
    weighted_terms: {
      utility: 0.3182487163487056,
      context: 0.105,
      governance: 0.1125,
      technical: 0.06,
      exposure: 0.07,
      residual: 0.09,
    },
    composite,
    tier: "High",
  };
}

function fakeFetch(status: number, body: unknown): { fetch: FetchLike; calls: any[] } {
  const calls: any[] = [];
  const fetch: FetchLike = async (input, init) => {
    calls.push({ input, init });
    return {
      ok: status >= 200 && status < 300,
      status,
      json: async () => body,
    } as Response;
  };
  return { fetch, calls };
}

describe("ScenarioSession", () => {
  it("posts the full scenario and displays only response values", async () => {
    const body = scoreResponse(0.7557487163487056);
    const { fetch, calls } = fakeFetch(200, body);
    const session = new ScenarioSession(new CortexApi("http://svc", fetch), newScenario("s", "pii-leakage"));
    session.setModifier("C", 0.8);
    const response = await session.score();
    expect(response).toEqual(body);

    const sent = JSON.parse(calls[0].init.body);
    expect(calls[0].input).toBe("http://svc/v1/score");
    expect(sent.group_id).toBe("pii-leakage");
    expect(sent.profile.C).toBe(0.8);
    expect(sent.k).toBe(3);

    const display = session.scoreDisplay()!;
    expect(display.composite).toBe("0.756");
    expect(display.compositeRaw).toBe(body.composite);
    expect(display.tier).toBe("High");
    expect(display.terms.map((t) => t.name)).toContain("residual");
  });

  it("surfaces structured service errors", async () => {
    const { fetch } = fakeFetch(422, { detail: "n_samples 2000000 exceeds the service ceiling 1000000" });
    const session = new ScenarioSession(new CortexApi("http://svc", fetch), newScenario("s", "pii-leakage"));
    await expect(session.simulate()).rejects.toThrowError(ApiError);
    await session.simulate().catch((err: ApiError) => {
      expect(err.status).toBe(422);
      expect(String(err.detail)).toContain("ceiling");
    });
  });

  it("renormalizes weights when auto mode is on", () => {
    const session = new ScenarioSession(new CortexApi("http://svc"), newScenario("s", "x"));
    session.autoRenormalize = true;
    session.setWeight("alpha", 0.5);
    expect(session.weightsValid()).toBe(true);
    session.autoRenormalize = false;
    session.setWeight("alpha", 0.9);
    expect(session.weightsValid()).toBe(false);
    expect(session.weightsProblem()).toMatch(/sum/);
  });

  it("applies presets onto the profile", () => {
    const session = new ScenarioSession(new CortexApi("http://svc"), newScenario("s", "x"));
    session.applyPreset({
      system_type: "facial recognition in public surveillance",
      display_name: "Facial recognition in public surveillance",
      profile: { C: 0.95, G: 1.0, T: 0.85, E: 0.9, R: 0.85 },
      framework_basis: "",
    });
    expect(session.scenario.profile).toEqual({ C: 0.95, G: 1.0, T: 0.85, E: 0.9, R: 0.85 });
  });
});
