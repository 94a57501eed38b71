/** Display formatting. Scores render at three decimals with half-up rounding
 * to mirror the engine's presentation rule exactly. */

import type { TierName } from "./types.js";

/** Half-up rounding at three decimals, string-based to avoid float drift. */
export function roundHalfUp3(value: number): number {
  if (!Number.isFinite(value)) return NaN;
  const sign = value < 0 ? -1 : 1;
  const fixed = Math.abs(value).toFixed(12); // exact enough for unit-scale scores
  const [whole, frac = ""] = fixed.split(".");
  const digits = (frac + "000000000000").slice(0, 12);
  let kept = parseInt(whole, 10) * 1000 + parseInt(digits.slice(0, 3), 10);
  if (parseInt(digits.slice(3, 4), 10) >= 5) kept += 1;
  return (sign * kept) / 1000;
}

export function formatScore(value: number): string {
  return roundHalfUp3(value).toFixed(3);
}

export function formatDelta(value: number): string {
  const rounded = roundHalfUp3(value);
  const text = Math.abs(rounded).toFixed(3);
  return `${rounded < 0 ? "-" : "+"}${text}`;
}

export const TIER_COLORS: Record<TierName, string> = {
  Critical: "#c0392b",
  High: "#e67e22",
  Moderate: "#f1c40f",
  Low: "#3498db",
  Minimal: "#2ecc71",
};

export function tierColor(tier: TierName): string {
  return TIER_COLORS[tier];
}
