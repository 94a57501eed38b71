/** Scenario session: the view-model between controls and the service.
 *
 * Holds the editable scenario, round-trips it through /v1/score and
 * /v1/simulate, and exposes display-ready strings. Every number shown in the
 * UI is a formatted field of the most recent service response; the session
 * never computes a score itself.
 */

import { CortexApi } from "./api.js";
import { formatScore } from "./format.js";
import type { Scenario, SimulationSettings } from "./scenarios.js";
import {
  DEFAULT_WEIGHTS,
  isOnSimplex,
  renormalize,
  simplexViolationMessage,
} from "./weights.js";
import type {
  ModifierLetter,
  ModifierValues,
  ScoreResponse,
  SimulationResponse,
  SystemProfile,
  TierName,
  WeightKey,
} from "./types.js";

export const DEFAULT_PROFILE: ModifierValues = { C: 0.7, G: 0.75, T: 0.6, E: 0.7, R: 0.6 };

export const DEFAULT_SIMULATION: SimulationSettings = {
  samples: 10_000,
  seed: 42,
  preset: "demo",
};

export interface ScoreDisplay {
  composite: string;
  compositeRaw: number;
  tier: TierName;
  utility: string;
  severity: string;
  terms: { name: string; value: number; display: string }[];
}

export interface SimulationDisplay {
  p50: string;
  p90: string;
  std: string;
  mean: string;
  p50Raw: number;
  p90Raw: number;
  tierP50: TierName;
  tierP90: TierName;
}

export function newScenario(name: string, groupId: string): Scenario {
  return {
    name,
    groupId,
    profile: { ...DEFAULT_PROFILE },
    weights: { ...DEFAULT_WEIGHTS },
    k: 3.0,
    simulation: { ...DEFAULT_SIMULATION },
    lastScore: null,
    lastSimulation: null,
  };
}

export class ScenarioSession {
  readonly api: CortexApi;
  scenario: Scenario;
  autoRenormalize = true;

  constructor(api: CortexApi, scenario: Scenario) {
    this.api = api;
    this.scenario = scenario;
  }

  setGroup(groupId: string): void {
    this.scenario.groupId = groupId;
  }

  setModifier(letter: ModifierLetter, value: number): void {
    this.scenario.profile[letter] = value;
  }

  setWeight(key: WeightKey, value: number): void {
    if (this.autoRenormalize) {
      this.scenario.weights = renormalize(this.scenario.weights, key, value);
    } else {
      this.scenario.weights[key] = value;
    }
  }

  setCurvature(k: number): void {
    this.scenario.k = k;
  }

  applyPreset(profile: SystemProfile): void {
    this.scenario.profile = { ...profile.profile };
  }

  weightsValid(): boolean {
    return isOnSimplex(this.scenario.weights);
  }

  weightsProblem(): string | null {
    return simplexViolationMessage(this.scenario.weights);
  }

  /** POST the scenario to /v1/score and keep the raw response. */
  async score(): Promise<ScoreResponse> {
    const response = await this.api.score({
      group_id: this.scenario.groupId,
      profile: { ...this.scenario.profile },
      weights: { ...this.scenario.weights },
      k: this.scenario.k,
    });
    this.scenario.lastScore = response;
    return response;
  }

  /** POST the scenario to /v1/simulate and keep the raw response. */
  async simulate(): Promise<SimulationResponse> {
    const response = await this.api.simulate({
      group_id: this.scenario.groupId,
      profile: { ...this.scenario.profile },
      weights: { ...this.scenario.weights },
      k: this.scenario.k,
      config: {
        n_samples: this.scenario.simulation.samples,
        seed: this.scenario.simulation.seed,
        preset: this.scenario.simulation.preset,
      },
    });
    this.scenario.lastSimulation = response;
    return response;
  }

  /** Display projection of the last score response (no local arithmetic). */
  scoreDisplay(): ScoreDisplay | null {
    const score = this.scenario.lastScore;
    if (!score) return null;
    return {
      composite: formatScore(score.composite),
      compositeRaw: score.composite,
      tier: score.tier,
      utility: formatScore(score.utility),
      severity: formatScore(score.severity),
      terms: Object.entries(score.weighted_terms).map(([name, value]) => ({
        name,
        value,
        display: formatScore(value),
      })),
    };
  }

  simulationDisplay(): SimulationDisplay | null {
    const sim = this.scenario.lastSimulation;
    if (!sim) return null;
    return {
      p50: formatScore(sim.p50),
      p90: formatScore(sim.p90),
      std: sim.std.toFixed(4),
      mean: formatScore(sim.mean),
      p50Raw: sim.p50,
      p90Raw: sim.p90,
      tierP50: sim.tiers.p50,
      tierP90: sim.tiers.p90,
    };
  }
}
