/** Weight-simplex helpers for the weight sliders.
 *
 * The composite requires weights summing to 1; the service rejects anything
 * else. Auto-renormalize mode rescales the untouched weights so the sum stays
 * on the simplex while the dragged slider keeps its value; manual mode leaves
 * the violation visible so the user can resolve it.
 */

import type { WeightKey, WeightValues } from "./types.js";

export const WEIGHT_KEYS: WeightKey[] = ["alpha", "gamma", "delta", "theta", "lambda", "rho"];

export const WEIGHT_TOLERANCE = 1e-9;

export const DEFAULT_WEIGHTS: WeightValues = {
  alpha: 0.35,
  gamma: 0.15,
  delta: 0.15,
  theta: 0.1,
  lambda: 0.1,
  rho: 0.15,
};

export function weightSum(weights: WeightValues): number {
  return WEIGHT_KEYS.reduce((acc, key) => acc + weights[key], 0);
}

export function isOnSimplex(weights: WeightValues, tolerance = WEIGHT_TOLERANCE): boolean {
  if (WEIGHT_KEYS.some((key) => weights[key] < 0 || !Number.isFinite(weights[key]))) {
    return false;
  }
  return Math.abs(weightSum(weights) - 1) <= tolerance;
}

export function simplexViolationMessage(weights: WeightValues): string | null {
  if (isOnSimplex(weights)) return null;
  return `weights sum to ${weightSum(weights).toFixed(6)}, must equal 1`;
}

/** Keep `changed` at its new value and scale the remaining weights to fill
 * the rest of the simplex. Falls back to an even split when the others are
 * all zero. */
export function renormalize(
  weights: WeightValues,
  changed: WeightKey,
  newValue: number,
): WeightValues {
  const pinned = Math.min(Math.max(newValue, 0), 1);
  const others = WEIGHT_KEYS.filter((key) => key !== changed);
  const rest = others.reduce((acc, key) => acc + weights[key], 0);
  const remaining = 1 - pinned;
  const out = { ...weights, [changed]: pinned };
  if (rest <= 0) {
    for (const key of others) out[key] = remaining / others.length;
  } else {
    for (const key of others) out[key] = (weights[key] / rest) * remaining;
  }
  // absorb accumulated float error into the largest free weight
  const drift = 1 - weightSum(out);
  if (drift !== 0) {
    const largest = others.reduce((a, b) => (out[a] >= out[b] ? a : b));
    out[largest] = Math.max(0, out[largest] + drift);
  }
  return out;
}
