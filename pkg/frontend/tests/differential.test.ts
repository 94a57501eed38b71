/** Differential acceptance tests against the real scoring service.
 *
 * A live service process is spawned for the module; every value the UI would
 * display (via ScenarioSession) is compared against the raw response body.
 */

import { ChildProcess, spawn } from "node:child_process";
import { afterAll, beforeAll, describe, expect, it } from "vitest";

import { ApiError, CortexApi } from "../src/api.js";
import { formatScore, roundHalfUp3 } from "../src/format.js";
import { ScenarioSession, newScenario } from "../src/session.js";
import type { ModifierLetter, ModifierValues, WeightKey, WeightValues } from "../src/types.js";

const PORT = 8441 + Math.floor(Math.random() * 400);
const BASE = `http://127.0.0.1:${PORT}`;

let serviceProcess: ChildProcess | null = null;
let api: CortexApi;

const TABLE6_PROFILES: Record<string, ModifierValues> = {
  "general-purpose assistant": { C: 0.7, G: 0.75, T: 0.6, E: 0.7, R: 0.6 },
  "diagnostic assistant in healthcare": { C: 0.9, G: 0.95, T: 0.8, E: 0.85, R: 0.8 },
  "automated essay grading tool (education)": { C: 0.8, G: 0.85, T: 0.7, E: 0.8, R: 0.7 },
  "facial recognition in public surveillance": { C: 0.95, G: 1.0, T: 0.85, E: 0.9, R: 0.85 },
  "recruitment algorithm / HR screening": { C: 0.85, G: 0.9, T: 0.75, E: 0.8, R: 0.75 },
  "internal R&D model (sandbox only)": { C: 0.55, G: 0.6, T: 0.5, E: 0.6, R: 0.5 },
};

interface Scripted {
  label: string;
  groupId: string;
  profile?: ModifierValues;
  systemType?: string;
  weights?: WeightValues;
  k?: number;
}

function scriptedScenarios(): Scripted[] {
  const groups = [
    "discriminatory-outcomes",
    "prompt-injection",
    "pii-leakage",
    "feedback-loop-abuse",
    "lack-of-monitoring",
    "surveillance-misuse",
  ];
  const scenarios: Scripted[] = [];
  for (const [systemType, profile] of Object.entries(TABLE6_PROFILES)) {
    scenarios.push({ label: `preset:${systemType}`, groupId: "discriminatory-outcomes", profile });
  }
  for (const groupId of groups) {
    scenarios.push({ label: `group:${groupId}`, groupId });
  }
  scenarios.push(
    { label: "custom-low", groupId: "deployment-drift", profile: { C: 0.1, G: 0.2, T: 0.3, E: 0.4, R: 0.5 } },
    { label: "custom-high", groupId: "toxic-misinformation-outputs", profile: { C: 1, G: 1, T: 1, E: 1, R: 1 } },
    { label: "custom-zero", groupId: "ui-induced-overtrust", profile: { C: 0, G: 0, T: 0, E: 0, R: 0 } },
    { label: "custom-mid", groupId: "model-extraction", profile: { C: 0.5, G: 0.5, T: 0.5, E: 0.5, R: 0.5 } },
    {
      label: "weights-utility-heavy",
      groupId: "training-data-poisoning",
      weights: { alpha: 0.5, gamma: 0.1, delta: 0.1, theta: 0.1, lambda: 0.1, rho: 0.1 },
    },
    {
      label: "weights-flat",
      groupId: "insecure-apis",
      weights: { alpha: 0.2, gamma: 0.2, delta: 0.2, theta: 0.1, lambda: 0.1, rho: 0.2 },
    },
    { label: "k-shallow", groupId: "membership-inference", k: 1.0 },
    { label: "k-steep", groupId: "hallucination-false-outputs", k: 5.0 },
  );
  return scenarios;
}

async function waitForService(timeoutMs: number): Promise<void> {
  const deadline = Date.now() + timeoutMs;
  let lastError: unknown = null;
  while (Date.now() < deadline) {
    try {
      const response = await fetch(`${BASE}/v1/health`);
      if (response.ok) return;
    } catch (err) {
      lastError = err;
    }
    await new Promise((resolve) => setTimeout(resolve, 250));
  }
  throw new Error(`service did not come up on ${BASE}: ${lastError}`);
}

beforeAll(async () => {
  serviceProcess = spawn(
    "python3",
    ["-m", "cortexrisk.cli", "serve", "--port", String(PORT), "--host", "127.0.0.1"],
    { stdio: "ignore" },
  );
  await waitForService(30_000);
  api = new CortexApi(BASE);
}, 45_000);

afterAll(() => {
  serviceProcess?.kill("SIGTERM");
});

describe("scripted scenario differential (acceptance 11)", () => {
  it(
    "every displayed score and tier equals the service response body",
    async () => {
      const scenarios = scriptedScenarios();
      expect(scenarios.length).toBeGreaterThanOrEqual(20);
      for (const scripted of scenarios) {
        const session = new ScenarioSession(api, newScenario(scripted.label, scripted.groupId));
        if (scripted.profile) session.scenario.profile = { ...scripted.profile };
        if (scripted.weights) session.scenario.weights = { ...scripted.weights };
        if (scripted.k !== undefined) session.setCurvature(scripted.k);

        const body = await session.score();
        const display = session.scoreDisplay()!;
        expect(display.compositeRaw, scripted.label).toBe(body.composite);
        expect(display.composite, scripted.label).toBe(formatScore(body.composite));
        expect(display.tier, scripted.label).toBe(body.tier);
        expect(display.utility, scripted.label).toBe(formatScore(body.utility));
        for (const term of display.terms) {
          expect(term.value, `${scripted.label}:${term.name}`).toBe(
            body.weighted_terms[term.name],
          );
        }
      }
    },
    60_000,
  );

  it(
    "preset selection reproduces all six default profiles on the sliders",
    async () => {
      const { profiles } = await api.profiles();
      expect(profiles).toHaveLength(6);
      for (const profile of profiles) {
        const session = new ScenarioSession(api, newScenario("p", "pii-leakage"));
        session.applyPreset(profile);
        expect(session.scenario.profile).toEqual(TABLE6_PROFILES[profile.system_type]);
        expect(session.scenario.profile).toEqual(profile.profile);
      }
    },
    30_000,
  );
});

describe("single-modifier linearity (acceptance 12)", () => {
  const WEIGHT_OF: Record<ModifierLetter, { key: WeightKey; value: number }> = {
    C: { key: "gamma", value: 0.15 },
    G: { key: "delta", value: 0.15 },
    T: { key: "theta", value: 0.1 },
    E: { key: "lambda", value: 0.1 },
    R: { key: "rho", value: 0.15 },
  };

  it(
    "a slider delta of one modifier moves the composite by weight*delta",
    async () => {
      for (const letter of ["C", "G", "T", "E", "R"] as ModifierLetter[]) {
        for (const delta of [0.05, -0.05, 0.2]) {
          const session = new ScenarioSession(api, newScenario("lin", "lack-of-monitoring"));
          session.scenario.profile = { C: 0.6, G: 0.6, T: 0.6, E: 0.6, R: 0.6 };
          const before = await session.score();
          const beforeDisplay = session.scoreDisplay()!.composite;

          session.setModifier(letter, 0.6 + delta);
          const after = await session.score();
          const afterDisplay = session.scoreDisplay()!.composite;

          const expected = WEIGHT_OF[letter].value * delta;
          expect(after.composite - before.composite, `${letter} raw`).toBeCloseTo(expected, 9);
          // displayed movement agrees within display rounding (one unit in
          // the third decimal on each side)
          const shown = Number(afterDisplay) - Number(beforeDisplay);
          expect(Math.abs(shown - expected), `${letter} displayed`).toBeLessThanOrEqual(0.001 + 1e-12);
        }
      }
    },
    120_000,
  );
});

describe("simulation panel fidelity", () => {
  it(
    "renders exactly the arrays and statistics from the response",
    async () => {
      const session = new ScenarioSession(api, newScenario("sim", "discriminatory-outcomes"));
      session.scenario.simulation = { samples: 3000, seed: 42, preset: "demo" };
      const body = await session.simulate();
      const display = session.simulationDisplay()!;
      expect(display.p50Raw).toBe(body.p50);
      expect(display.p90Raw).toBe(body.p90);
      expect(display.p50).toBe(formatScore(body.p50));
      expect(display.p90).toBe(formatScore(body.p90));
      expect(display.tierP50).toBe(body.tiers.p50);
      expect(display.tierP90).toBe(body.tiers.p90);
      expect(body.histogram.counts.reduce((a, b) => a + b, 0)).toBe(3000);
      expect(body.kde.grid).toHaveLength(256);

      const again = await session.simulate();
      expect(again).toEqual(body);
    },
    60_000,
  );

  it(
    "seed changes leave the distribution shape nearly identical",
    async () => {
      const session = new ScenarioSession(api, newScenario("sim", "pii-leakage"));
      session.scenario.simulation = { samples: 20_000, seed: 1, preset: "demo" };
      const first = await session.simulate();
      session.scenario.simulation = { samples: 20_000, seed: 2, preset: "demo" };
      const second = await session.simulate();
      expect(Math.abs(first.p50 - second.p50)).toBeLessThan(0.001);
      expect(Math.abs(first.std - second.std)).toBeLessThan(0.001);
      expect(roundHalfUp3(first.p50)).toBe(roundHalfUp3(second.p50));
    },
    60_000,
  );

  it(
    "surfaces the sample-ceiling message verbatim",
    async () => {
      const session = new ScenarioSession(api, newScenario("sim", "pii-leakage"));
      session.scenario.simulation = { samples: 2_000_000, seed: 1, preset: "demo" };
      try {
        await session.simulate();
        expect.unreachable("ceiling should reject");
      } catch (err) {
        expect(err).toBeInstanceOf(ApiError);
        expect((err as ApiError).status).toBe(422);
        expect(String((err as ApiError).detail)).toContain("exceeds the service ceiling");
      }
    },
    30_000,
  );

  it(
    "invalid weights are rejected server-side with a field-level message",
    async () => {
      const session = new ScenarioSession(api, newScenario("bad", "pii-leakage"));
      session.autoRenormalize = false;
      session.setWeight("alpha", 0.9);
      expect(session.weightsValid()).toBe(false);
      try {
        await session.score();
        expect.unreachable("simplex violation should reject");
      } catch (err) {
        expect((err as ApiError).status).toBe(400);
        expect(String((err as ApiError).detail)).toContain("sum to 1");
      }
    },
    30_000,
  );
});
