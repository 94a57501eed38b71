/** Scenario model and browser-local persistence.
 *
 * Scenarios live client-side only (localStorage behind a narrow interface so
 * tests can substitute an in-memory shim); the service stays stateless.
 */

import type {
  ModifierValues,
  ScoreResponse,
  SimulationResponse,
  WeightValues,
} from "./types.js";

export interface SimulationSettings {
  samples: number;
  seed: number;
  preset: string;
}

export interface Scenario {
  name: string;
  groupId: string;
  profile: ModifierValues;
  weights: WeightValues;
  k: number;
  simulation: SimulationSettings;
  lastScore: ScoreResponse | null;
  lastSimulation: SimulationResponse | null;
}

export interface KeyValueStorage {
  getItem(key: string): string | null;
  setItem(key: string, value: string): void;
  removeItem(key: string): void;
}

const STORAGE_KEY = "cortex-whatif-scenarios";

export class MemoryStorage implements KeyValueStorage {
  private readonly map = new Map<string, string>();

  getItem(key: string): string | null {
    return this.map.has(key) ? this.map.get(key)! : null;
  }

  setItem(key: string, value: string): void {
    this.map.set(key, value);
  }

  removeItem(key: string): void {
    this.map.delete(key);
  }
}

export class ScenarioStore {
  private readonly storage: KeyValueStorage;

  constructor(storage?: KeyValueStorage) {
    this.storage =
      storage ??
      (typeof localStorage !== "undefined" ? localStorage : new MemoryStorage());
  }

  list(): Scenario[] {
    const raw = this.storage.getItem(STORAGE_KEY);
    if (!raw) return [];
    try {
      const parsed = JSON.parse(raw) as Scenario[];
      return Array.isArray(parsed) ? parsed : [];
    } catch {
      return [];
    }
  }

  save(scenario: Scenario): void {
    const rest = this.list().filter((s) => s.name !== scenario.name);
    this.storage.setItem(STORAGE_KEY, JSON.stringify([...rest, scenario]));
  }

  load(name: string): Scenario | null {
    return this.list().find((s) => s.name === name) ?? null;
  }

  remove(name: string): void {
    const rest = this.list().filter((s) => s.name !== name);
    this.storage.setItem(STORAGE_KEY, JSON.stringify(rest));
  }

  clear(): void {
    this.storage.removeItem(STORAGE_KEY);
  }
}
