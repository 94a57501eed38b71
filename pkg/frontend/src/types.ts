/** Wire types for the /v1 scoring service. */

export type ModifierLetter = "C" | "G" | "T" | "E" | "R";
export type WeightKey = "alpha" | "gamma" | "delta" | "theta" | "lambda" | "rho";
export type TierName = "Critical" | "High" | "Moderate" | "Low" | "Minimal";

export type ModifierValues = Record<ModifierLetter, number>;
export type WeightValues = Record<WeightKey, number>;

export interface TaxonomyDomain {
  id: string;
  name: string;
}

export interface TaxonomyGroup {
  id: string;
  name: string;
  domain: string;
  incident_count: number;
  avid: string[];
  atlas: string[];
  oecd: string;
  likelihood: number;
  impact: number;
  aliases: string[];
  distinct: string[];
}

export interface TaxonomyResponse {
  engine_version: string;
  taxonomy_version: string;
  domains: TaxonomyDomain[];
  groups: TaxonomyGroup[];
}

export interface ScoreRequest {
  group_id?: string;
  L?: number;
  I?: number;
  profile?: ModifierValues;
  system_type?: string;
  weights?: WeightValues;
  k?: number;
}

export interface ScoreResponse {
  engine_version: string;
  taxonomy_version: string;
  group_id: string;
  likelihood: number;
  impact: number;
  severity: number;
  utility: number;
  weighted_terms: Record<string, number>;
  composite: number;
  tier: TierName;
}

export interface SimulationConfigBody {
  n_samples: number;
  seed: number;
  preset: string;
  percentiles?: number[];
}

export interface SimulateRequest extends ScoreRequest {
  config: SimulationConfigBody;
}

export interface SimulationResponse {
  engine_version: string;
  taxonomy_version: string;
  group_id: string;
  n_samples: number;
  seed: number;
  mean: number;
  p50: number;
  p90: number;
  std: number;
  histogram: { edges: number[]; counts: number[] };
  box: { min: number; q1: number; med: number; q3: number; max: number; outliers: number[] };
  kde: { grid: number[]; density: number[] };
  tiers: { p50: TierName; p90: TierName };
}

export interface ModifierBand {
  modifier: ModifierLetter;
  framework: string;
  classification: string;
  ranges: [number, number][];
  notes: string;
}

export interface BandsResponse {
  engine_version: string;
  taxonomy_version: string;
  bands: ModifierBand[];
}

export interface SystemProfile {
  system_type: string;
  display_name: string;
  profile: ModifierValues;
  framework_basis: string;
}

export interface ProfilesResponse {
  engine_version: string;
  taxonomy_version: string;
  profiles: SystemProfile[];
}
