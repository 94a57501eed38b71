/** DOM wiring for the what-if explorer.
 *
 * Layout: scenario editor (group picker, preset selector, modifier/weight/k
 * sliders with band hints) on the left; live score card, simulation panel,
 * and saved-scenario comparison on the right. All displayed numbers come
 * from service responses via ScenarioSession.
 */

import { ApiError, CortexApi } from "./api.js";
import {
  boxGeometry,
  densityPath,
  histogramBars,
  linearScale,
  violinPath,
} from "./charts.js";
import { debounce } from "./debounce.js";
import { formatScore, tierColor } from "./format.js";
import { Scenario, ScenarioStore } from "./scenarios.js";
import { DEFAULT_PROFILE, ScenarioSession, newScenario } from "./session.js";
import type {
  ModifierBand,
  ModifierLetter,
  SystemProfile,
  TaxonomyResponse,
  WeightKey,
} from "./types.js";
import { WEIGHT_KEYS, weightSum } from "./weights.js";

const MODIFIERS: { letter: ModifierLetter; label: string }[] = [
  { letter: "C", label: "Contextual sensitivity" },
  { letter: "G", label: "Governance tier" },
  { letter: "T", label: "Technical surface" },
  { letter: "E", label: "Environmental exposure" },
  { letter: "R", label: "Residual risk" },
];

const WEIGHT_LABELS: Record<WeightKey, string> = {
  alpha: "Utility core (α)",
  gamma: "Context (γ)",
  delta: "Governance (δ)",
  theta: "Technical (θ)",
  lambda: "Exposure (λ)",
  rho: "Residual (ρ)",
};

const CHART_WIDTH = 560;
const CHART_HEIGHT = 180;

interface AppContext {
  api: CortexApi;
  session: ScenarioSession;
  store: ScenarioStore;
  taxonomy: TaxonomyResponse;
  profiles: SystemProfile[];
  bands: ModifierBand[];
  compareSelection: Set<string>;
  simulationInFlight: boolean;
}

function el<K extends keyof HTMLElementTagNameMap>(
  tag: K,
  attrs: Record<string, string> = {},
  text?: string,
): HTMLElementTagNameMap[K] {
  const node = document.createElement(tag);
  for (const [key, value] of Object.entries(attrs)) node.setAttribute(key, value);
  if (text !== undefined) node.textContent = text;
  return node;
}

function query<T extends HTMLElement>(selector: string): T {
  const node = document.querySelector(selector);
  if (!node) throw new Error(`missing element ${selector}`);
  return node as T;
}

function setOffline(offline: boolean, message = ""): void {
  const banner = query<HTMLElement>("#offline-banner");
  banner.hidden = !offline;
  if (offline) {
    banner.textContent = message || "Scoring service unreachable. Retrying on next change.";
  }
}

async function guarded<T>(work: () => Promise<T>): Promise<T | null> {
  try {
    const out = await work();
    setOffline(false);
    return out;
  } catch (err) {
    if (err instanceof ApiError) {
      setOffline(false);
      showServiceError(err);
      return null;
    }
    setOffline(true);
    return null;
  }
}

function showServiceError(err: ApiError): void {
  const node = query<HTMLElement>("#service-error");
  node.hidden = false;
  node.textContent =
    typeof err.detail === "string" ? err.detail : JSON.stringify(err.detail);
}

function clearServiceError(): void {
  query<HTMLElement>("#service-error").hidden = true;
}

// --- rendering ---------------------------------------------------------------

function renderScore(ctx: AppContext): void {
  const display = ctx.session.scoreDisplay();
  const composite = query<HTMLElement>("#composite-value");
  const badge = query<HTMLElement>("#tier-badge");
  const bars = query<HTMLElement>("#term-bars");
  bars.textContent = "";
  if (!display) {
    composite.textContent = "—";
    badge.textContent = "";
    return;
  }
  composite.textContent = display.composite;
  badge.textContent = display.tier;
  badge.style.backgroundColor = tierColor(display.tier);
  query<HTMLElement>("#utility-value").textContent = display.utility;
  query<HTMLElement>("#severity-value").textContent = display.severity;
  const maxTerm = Math.max(...display.terms.map((t) => t.value), 1e-9);
  for (const term of display.terms) {
    const row = el("div", { class: "term-row" });
    row.appendChild(el("span", { class: "term-name" }, term.name));
    const track = el("div", { class: "term-track" });
    const fill = el("div", { class: "term-fill" });
    fill.style.width = `${(term.value / maxTerm) * 100}%`;
    track.appendChild(fill);
    row.appendChild(track);
    row.appendChild(el("span", { class: "term-value" }, term.display));
    bars.appendChild(row);
  }
}

function renderSimulation(ctx: AppContext): void {
  const sim = ctx.session.scenario.lastSimulation;
  const display = ctx.session.simulationDisplay();
  const svg = query<SVGSVGElement & HTMLElement>("#sim-chart");
  svg.innerHTML = "";
  const stats = query<HTMLElement>("#sim-stats");
  if (!sim || !display) {
    stats.textContent = "Run a simulation to see the score distribution.";
    return;
  }
  stats.textContent =
    `P50 ${display.p50} (${display.tierP50}) · P90 ${display.p90} (${display.tierP90})` +
    ` · σ ${display.std} · mean ${display.mean} · n=${sim.n_samples} seed=${sim.seed}`;

  const ns = "http://www.w3.org/2000/svg";
  const scale = linearScale(0, 1, CHART_WIDTH);
  for (const bar of histogramBars(sim.histogram.edges, sim.histogram.counts, CHART_WIDTH, CHART_HEIGHT - 30)) {
    const rect = document.createElementNS(ns, "rect");
    rect.setAttribute("x", bar.x.toFixed(2));
    rect.setAttribute("y", bar.y.toFixed(2));
    rect.setAttribute("width", Math.max(bar.width - 0.5, 0.5).toFixed(2));
    rect.setAttribute("height", bar.height.toFixed(2));
    rect.setAttribute("class", "hist-bar");
    svg.appendChild(rect);
  }
  const kde = document.createElementNS(ns, "path");
  kde.setAttribute("d", densityPath(sim.kde.grid, sim.kde.density, CHART_WIDTH, CHART_HEIGHT - 30));
  kde.setAttribute("class", "kde-path");
  svg.appendChild(kde);

  const geo = boxGeometry(sim.box, scale);
  const boxY = CHART_HEIGHT - 22;
  const whisker = document.createElementNS(ns, "line");
  whisker.setAttribute("x1", geo.whiskerLowX.toFixed(2));
  whisker.setAttribute("x2", geo.whiskerHighX.toFixed(2));
  whisker.setAttribute("y1", String(boxY + 7));
  whisker.setAttribute("y2", String(boxY + 7));
  whisker.setAttribute("class", "box-line");
  svg.appendChild(whisker);
  const boxRect = document.createElementNS(ns, "rect");
  boxRect.setAttribute("x", geo.boxX.toFixed(2));
  boxRect.setAttribute("y", String(boxY));
  boxRect.setAttribute("width", Math.max(geo.boxWidth, 1).toFixed(2));
  boxRect.setAttribute("height", "14");
  boxRect.setAttribute("class", "box-rect");
  svg.appendChild(boxRect);
  const median = document.createElementNS(ns, "line");
  median.setAttribute("x1", geo.medianX.toFixed(2));
  median.setAttribute("x2", geo.medianX.toFixed(2));
  median.setAttribute("y1", String(boxY));
  median.setAttribute("y2", String(boxY + 14));
  median.setAttribute("class", "box-median");
  svg.appendChild(median);

  for (const [value, cls, label] of [
    [display.p50Raw, "marker-p50", "P50"],
    [display.p90Raw, "marker-p90", "P90"],
  ] as const) {
    const x = scale(value);
    const line = document.createElementNS(ns, "line");
    line.setAttribute("x1", x.toFixed(2));
    line.setAttribute("x2", x.toFixed(2));
    line.setAttribute("y1", "0");
    line.setAttribute("y2", String(CHART_HEIGHT - 30));
    line.setAttribute("class", cls);
    svg.appendChild(line);
    const text = document.createElementNS(ns, "text");
    text.setAttribute("x", (x + 3).toFixed(2));
    text.setAttribute("y", "12");
    text.setAttribute("class", `${cls}-label`);
    text.textContent = label;
    svg.appendChild(text);
  }
}

function renderComparison(ctx: AppContext): void {
  const svg = query<SVGSVGElement & HTMLElement>("#compare-chart");
  svg.innerHTML = "";
  const chosen = ctx.store
    .list()
    .filter((s) => ctx.compareSelection.has(s.name) && s.lastSimulation);
  const note = query<HTMLElement>("#compare-note");
  note.textContent = chosen.length
    ? ""
    : "Save scenarios with simulation results and tick up to 4 to compare.";
  const ns = "http://www.w3.org/2000/svg";
  const stripHeight = 46;
  svg.setAttribute("height", String(Math.max(chosen.length * stripHeight, 40)));
  chosen.slice(0, 4).forEach((scenario, index) => {
    const sim = scenario.lastSimulation!;
    const centerY = index * stripHeight + stripHeight / 2;
    const path = document.createElementNS(ns, "path");
    path.setAttribute(
      "d",
      violinPath(sim.kde.grid, sim.kde.density, CHART_WIDTH, centerY, stripHeight / 2 - 6),
    );
    path.setAttribute("fill", tierColor(sim.tiers.p50));
    path.setAttribute("class", "violin");
    svg.appendChild(path);
    const label = document.createElementNS(ns, "text");
    label.setAttribute("x", "4");
    label.setAttribute("y", String(centerY - stripHeight / 2 + 14));
    label.setAttribute("class", "violin-label");
    label.textContent = `${scenario.name} · P50 ${formatScore(sim.p50)}`;
    svg.appendChild(label);
  });
}

function renderScenarioList(ctx: AppContext): void {
  const list = query<HTMLElement>("#scenario-list");
  list.textContent = "";
  for (const scenario of ctx.store.list()) {
    const row = el("div", { class: "scenario-row" });
    const check = el("input", { type: "checkbox" }) as HTMLInputElement;
    check.checked = ctx.compareSelection.has(scenario.name);
    check.addEventListener("change", () => {
      if (check.checked) {
        if (ctx.compareSelection.size >= 4) {
          check.checked = false;
          return;
        }
        ctx.compareSelection.add(scenario.name);
      } else {
        ctx.compareSelection.delete(scenario.name);
      }
      renderComparison(ctx);
    });
    row.appendChild(check);
    row.appendChild(el("span", { class: "scenario-name" }, scenario.name));
    const load = el("button", {}, "load");
    load.addEventListener("click", () => {
      ctx.session.scenario = structuredClone(scenario);
      syncControls(ctx);
      renderScore(ctx);
      renderSimulation(ctx);
      void refreshScore(ctx);
    });
    row.appendChild(load);
    const del = el("button", {}, "delete");
    del.addEventListener("click", () => {
      ctx.store.remove(scenario.name);
      ctx.compareSelection.delete(scenario.name);
      renderScenarioList(ctx);
      renderComparison(ctx);
    });
    row.appendChild(del);
    list.appendChild(row);
  }
}

// --- control sync ------------------------------------------------------------

function syncControls(ctx: AppContext): void {
  const scenario = ctx.session.scenario;
  query<HTMLSelectElement>("#group-select").value = scenario.groupId;
  for (const { letter } of MODIFIERS) {
    query<HTMLInputElement>(`#mod-${letter}`).value = String(scenario.profile[letter]);
    query<HTMLElement>(`#mod-${letter}-value`).textContent =
      scenario.profile[letter].toFixed(2);
  }
  for (const key of WEIGHT_KEYS) {
    query<HTMLInputElement>(`#weight-${key}`).value = String(scenario.weights[key]);
    query<HTMLElement>(`#weight-${key}-value`).textContent =
      scenario.weights[key].toFixed(3);
  }
  query<HTMLInputElement>("#k-slider").value = String(scenario.k);
  query<HTMLElement>("#k-value").textContent = scenario.k.toFixed(1);
  query<HTMLInputElement>("#sim-samples").value = String(scenario.simulation.samples);
  query<HTMLInputElement>("#sim-seed").value = String(scenario.simulation.seed);
  query<HTMLSelectElement>("#sim-preset").value = scenario.simulation.preset;
  updateWeightState(ctx);
}

function updateWeightState(ctx: AppContext): void {
  const problem = ctx.session.weightsProblem();
  const sumNode = query<HTMLElement>("#weight-sum");
  sumNode.textContent = `Σ = ${weightSum(ctx.session.scenario.weights).toFixed(3)}`;
  sumNode.classList.toggle("invalid", problem !== null);
  query<HTMLElement>("#weight-problem").textContent = problem ?? "";
  query<HTMLButtonElement>("#run-simulation").disabled =
    problem !== null || ctx.simulationInFlight;
}

async function refreshScore(ctx: AppContext): Promise<void> {
  if (!ctx.session.weightsValid()) return;
  clearServiceError();
  const response = await guarded(() => ctx.session.score());
  if (response) renderScore(ctx);
}

// --- boot --------------------------------------------------------------------

function buildEditor(ctx: AppContext): void {
  const groupSelect = query<HTMLSelectElement>("#group-select");
  for (const domain of ctx.taxonomy.domains) {
    const optgroup = el("optgroup", { label: domain.name });
    for (const group of ctx.taxonomy.groups.filter((g) => g.domain === domain.id)) {
      optgroup.appendChild(el("option", { value: group.id }, group.name));
    }
    groupSelect.appendChild(optgroup);
  }
  groupSelect.addEventListener("change", () => {
    ctx.session.setGroup(groupSelect.value);
    void refreshScore(ctx);
  });

  const presetSelect = query<HTMLSelectElement>("#preset-select");
  presetSelect.appendChild(el("option", { value: "" }, "custom profile"));
  for (const profile of ctx.profiles) {
    presetSelect.appendChild(el("option", { value: profile.system_type }, profile.display_name));
  }
  presetSelect.addEventListener("change", () => {
    const chosen = ctx.profiles.find((p) => p.system_type === presetSelect.value);
    if (chosen) {
      ctx.session.applyPreset(chosen);
      syncControls(ctx);
      void refreshScore(ctx);
    }
  });

  const debouncedScore = debounce(() => void refreshScore(ctx), 150);

  const modifierPanel = query<HTMLElement>("#modifier-sliders");
  for (const { letter, label } of MODIFIERS) {
    const row = el("div", { class: "slider-row" });
    row.appendChild(el("label", { for: `mod-${letter}` }, `${label} (${letter})`));
    const slider = el("input", {
      id: `mod-${letter}`,
      type: "range",
      min: "0",
      max: "1",
      step: "0.01",
    }) as HTMLInputElement;
    slider.addEventListener("input", () => {
      ctx.session.setModifier(letter, Number(slider.value));
      query<HTMLElement>(`#mod-${letter}-value`).textContent =
        Number(slider.value).toFixed(2);
      query<HTMLSelectElement>("#preset-select").value = "";
      debouncedScore();
    });
    row.appendChild(slider);
    row.appendChild(el("span", { id: `mod-${letter}-value`, class: "slider-value" }));
    const hint = el("select", { class: "band-hint", title: "banding catalogue" });
    hint.appendChild(el("option", { value: "" }, "band hints"));
    for (const band of ctx.bands.filter((b) => b.modifier === letter)) {
      const ranges = band.ranges.map(([lo, hi]) => `${lo.toFixed(2)}–${hi.toFixed(2)}`).join(", ");
      const option = el(
        "option",
        { value: String(band.ranges[0][0]) },
        `${band.framework}: ${band.classification} [${ranges}]`,
      );
      option.title = band.notes;
      hint.appendChild(option);
    }
    hint.addEventListener("change", () => {
      if (hint.value === "") return;
      const band = ctx.bands.filter((b) => b.modifier === letter)[hint.selectedIndex - 1];
      const [lo, hi] = band.ranges[band.ranges.length - 1];
      const midpoint = lo + 0.5 * (hi - lo);
      ctx.session.setModifier(letter, Number(midpoint.toFixed(3)));
      syncControls(ctx);
      debouncedScore();
      hint.value = "";
    });
    row.appendChild(hint);
    modifierPanel.appendChild(row);
  }

  const weightPanel = query<HTMLElement>("#weight-sliders");
  for (const key of WEIGHT_KEYS) {
    const row = el("div", { class: "slider-row" });
    row.appendChild(el("label", { for: `weight-${key}` }, WEIGHT_LABELS[key]));
    const slider = el("input", {
      id: `weight-${key}`,
      type: "range",
      min: "0",
      max: "1",
      step: "0.005",
    }) as HTMLInputElement;
    slider.addEventListener("input", () => {
      ctx.session.setWeight(key, Number(slider.value));
      syncControls(ctx);
      debouncedScore();
    });
    row.appendChild(slider);
    row.appendChild(el("span", { id: `weight-${key}-value`, class: "slider-value" }));
    weightPanel.appendChild(row);
  }
  const renorm = query<HTMLInputElement>("#auto-renormalize");
  renorm.checked = ctx.session.autoRenormalize;
  renorm.addEventListener("change", () => {
    ctx.session.autoRenormalize = renorm.checked;
    updateWeightState(ctx);
  });

  const kSlider = query<HTMLInputElement>("#k-slider");
  kSlider.addEventListener("input", () => {
    ctx.session.setCurvature(Number(kSlider.value));
    query<HTMLElement>("#k-value").textContent = Number(kSlider.value).toFixed(1);
    debouncedScore();
  });

  for (const [id, apply] of [
    ["#sim-samples", (v: string) => (ctx.session.scenario.simulation.samples = Number(v))],
    ["#sim-seed", (v: string) => (ctx.session.scenario.simulation.seed = Number(v))],
    ["#sim-preset", (v: string) => (ctx.session.scenario.simulation.preset = v)],
  ] as const) {
    const input = query<HTMLInputElement>(id);
    input.addEventListener("change", () => apply(input.value));
  }

  query<HTMLButtonElement>("#run-simulation").addEventListener("click", async () => {
    if (ctx.simulationInFlight || !ctx.session.weightsValid()) return;
    ctx.simulationInFlight = true;
    updateWeightState(ctx);
    clearServiceError();
    const response = await guarded(() => ctx.session.simulate());
    ctx.simulationInFlight = false;
    updateWeightState(ctx);
    if (response) renderSimulation(ctx);
  });

  query<HTMLButtonElement>("#save-scenario").addEventListener("click", () => {
    const nameInput = query<HTMLInputElement>("#scenario-name");
    const name = nameInput.value.trim();
    if (!name) return;
    const snapshot: Scenario = structuredClone(ctx.session.scenario);
    snapshot.name = name;
    ctx.store.save(snapshot);
    nameInput.value = "";
    renderScenarioList(ctx);
  });
}

export async function boot(baseUrl?: string): Promise<void> {
  const api = new CortexApi(baseUrl ?? "");
  const store = new ScenarioStore();
  let taxonomy: TaxonomyResponse;
  let profiles: SystemProfile[];
  let bands: ModifierBand[];
  try {
    [taxonomy, profiles, bands] = await Promise.all([
      api.taxonomy(),
      api.profiles().then((r) => r.profiles),
      api.bands().then((r) => r.bands),
    ]);
  } catch {
    setOffline(true, "Scoring service unreachable. Start it with: cortex serve");
    return;
  }

  const firstGroup = taxonomy.groups[0]?.id ?? "";
  const ctx: AppContext = {
    api,
    session: new ScenarioSession(api, newScenario("current", firstGroup)),
    store,
    taxonomy,
    profiles,
    bands,
    compareSelection: new Set(),
    simulationInFlight: false,
  };
  ctx.session.scenario.profile = { ...DEFAULT_PROFILE };

  buildEditor(ctx);
  syncControls(ctx);
  renderScenarioList(ctx);
  renderComparison(ctx);
  await refreshScore(ctx);
}

if (typeof document !== "undefined" && document.getElementById("app")) {
  void boot();
}
