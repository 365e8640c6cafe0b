/**
 * App shell: three tabs (scenarios, run console, what-if probe) wired to the
 * HTTP API.  All budget and fitness numbers on screen come from API
 * responses; the client only formats them.
 */

import { ApiClient, ApiError } from "./api.js";
import type { ResultEntry, ScenarioDocument, TraceEntry } from "./api.js";
import { lineChart } from "./charts.js";
import { isNormalized, normalizePattern, patternSum } from "./pattern.js";
import { comparePanel, resultsTable, scenarioForm, simulationTable } from "./render.js";
import { scenarioFromForm, validateScenario } from "./scenario.js";

const api = new ApiClient("");

function el<T extends HTMLElement>(id: string): T {
  const node = document.getElementById(id);
  if (node === null) {
    throw new Error(`missing element #${id}`);
  }
  return node as T;
}

function toast(message: string, kind: "error" | "info" = "error"): void {
  const box = el<HTMLDivElement>("toast");
  box.textContent = message;
  box.className = `toast show ${kind}`;
  setTimeout(() => (box.className = "toast"), 5000);
}

// ---------------------------------------------------------------- scenarios

let editorTemplate: ScenarioDocument | null = null;

async function refreshScenarioList(): Promise<void> {
  const scenarios = await api.listScenarios();
  const list = el<HTMLUListElement>("scenario-list");
  list.innerHTML = scenarios
    .map(
      (s) =>
        `<li><button class="link scenario-pick" data-id="${s.scenario_id}">${s.name}</button>
         <span class="meta">${s.years}y · ${s.tax_mode}</span></li>`,
    )
    .join("");
  for (const button of list.querySelectorAll<HTMLButtonElement>(".scenario-pick")) {
    button.onclick = () => openScenario(button.dataset.id ?? "");
  }
  const pickers = [
    el<HTMLSelectElement>("run-scenario"),
    el<HTMLSelectElement>("whatif-scenario"),
  ];
  for (const select of pickers) {
    const previous = select.value;
    select.innerHTML = scenarios
      .map((s) => `<option value="${s.scenario_id}">${s.name}</option>`)
      .join("");
    if (previous && scenarios.some((s) => s.scenario_id === previous)) {
      select.value = previous;
    }
  }
}

async function openScenario(id: string): Promise<void> {
  const record = await api.getScenario(id);
  editorTemplate = record.scenario;
  el<HTMLDivElement>("scenario-editor").innerHTML = scenarioForm(record.scenario);
  bindScenarioForm();
}

function bindScenarioForm(): void {
  const form = document.getElementById("scenario-form") as HTMLFormElement | null;
  if (form === null || editorTemplate === null) {
    return;
  }
  form.onsubmit = async (event) => {
    event.preventDefault();
    const doc = scenarioFromForm(new FormData(form), editorTemplate!);
    const errors = validateScenario(doc);
    const errorBox = el<HTMLDivElement>("scenario-errors");
    if (errors.length > 0) {
      errorBox.innerHTML = errors.map((e) => `<p>${e}</p>`).join("");
      return;
    }
    errorBox.innerHTML = "";
    try {
      await api.createScenario(doc.name ?? "", doc);
      toast("scenario saved", "info");
      await refreshScenarioList();
    } catch (error) {
      if (error instanceof ApiError) {
        errorBox.innerHTML = `<p>${error.code}: ${error.message}</p>`;
      } else {
        toast(String(error));
      }
    }
  };
}

// -------------------------------------------------------------- run console

let currentRunId: string | null = null;
let bestSeries: number[] = [];
let meanSeries: number[] = [];
let lastResults: ResultEntry[] = [];
let prudentialLimit = 15;
const compareSelection = new Set<number>();

function redrawChart(): void {
  el<HTMLDivElement>("run-chart").innerHTML = lineChart([
    { label: "best", values: bestSeries },
    { label: "mean", values: meanSeries },
  ]);
}

function redrawResults(): void {
  el<HTMLDivElement>("run-results").innerHTML =
    lastResults.length === 0
      ? "<p class='meta'>no results yet</p>"
      : resultsTable(lastResults, prudentialLimit, compareSelection);
  for (const box of document.querySelectorAll<HTMLInputElement>("input.compare")) {
    box.onchange = () => {
      const rank = Number(box.dataset.rank);
      if (box.checked) {
        compareSelection.add(rank);
      } else {
        compareSelection.delete(rank);
      }
      while (compareSelection.size > 2) {
        const oldest = compareSelection.values().next().value as number;
        compareSelection.delete(oldest);
      }
      redrawResults();
    };
  }
  const panel = el<HTMLDivElement>("run-compare");
  if (compareSelection.size === 2) {
    const [ra, rb] = [...compareSelection].sort((a, b) => a - b);
    const a = lastResults.find((e) => e.rank === ra);
    const b = lastResults.find((e) => e.rank === rb);
    panel.innerHTML = a && b ? comparePanel(a, b, prudentialLimit) : "";
  } else {
    panel.innerHTML = "";
  }
}

function readPattern(): number[] {
  const raw = el<HTMLInputElement>("run-pattern").value;
  return raw
    .split(/[,;\s]+/)
    .filter((t) => t.length > 0)
    .map(Number);
}

function updatePatternPreview(): void {
  const preview = el<HTMLSpanElement>("pattern-preview");
  try {
    const normalized = normalizePattern(readPattern());
    preview.textContent = `normalized: ${normalized.map((w) => w.toFixed(3)).join(", ")} (sum ${patternSum(
      normalized,
    ).toFixed(9)})`;
  } catch (error) {
    preview.textContent = String(error instanceof Error ? error.message : error);
  }
}

function runConfigFromForm(): Record<string, unknown> {
  const scenarioId = el<HTMLSelectElement>("run-scenario").value;
  const mode = el<HTMLSelectElement>("run-mode").value;
  const ga = {
    population_size: Number(el<HTMLInputElement>("run-population").value),
    generations: Number(el<HTMLInputElement>("run-generations").value),
    crossover_rate: Number(el<HTMLInputElement>("run-crossover").value),
    mutation_rate: Number(el<HTMLInputElement>("run-mutation").value),
    seed: Number(el<HTMLInputElement>("run-seed").value),
  };
  if (mode === "operational") {
    return { version: 1, mode, scenario_id: scenarioId, ga };
  }
  const pattern = normalizePattern(readPattern());
  if (!isNormalized(pattern)) {
    throw new Error("pattern failed to normalize");
  }
  const parse = (id: string) =>
    el<HTMLInputElement>(id)
      .value.split(/[,;\s]+/)
      .filter((t) => t.length > 0)
      .map(Number);
  return {
    version: 1,
    mode,
    scenario_id: scenarioId,
    anchors: {
      goal_i: { investments: parse("anchor-i-inv"), taxes: parse("anchor-i-tax") },
      goal_c: { investments: parse("anchor-c-inv"), taxes: parse("anchor-c-tax") },
    },
    fitness: {
      target_investments: parse("target-inv"),
      target_capacities: parse("target-cap"),
      pattern,
      gamma_tax: Number(el<HTMLInputElement>("gamma-tax").value),
      gamma_investment: Number(el<HTMLInputElement>("gamma-inv").value),
      gamma_capacity: Number(el<HTMLInputElement>("gamma-cap").value),
    },
    constraints: { c_max_years: 15.0, rho_max: 0.07 },
    ga,
  };
}

async function startRun(): Promise<void> {
  let config: Record<string, unknown>;
  try {
    config = runConfigFromForm();
  } catch (error) {
    toast(String(error instanceof Error ? error.message : error));
    return;
  }
  bestSeries = [];
  meanSeries = [];
  lastResults = [];
  compareSelection.clear();
  redrawChart();
  redrawResults();
  try {
    const { run_id } = await api.startRun(config);
    currentRunId = run_id;
    el<HTMLSpanElement>("run-status").textContent = `run ${run_id.slice(0, 8)}… running`;
    const status = await api.followRun(run_id, (entry: TraceEntry) => {
      bestSeries.push(entry.best);
      meanSeries.push(entry.mean);
      redrawChart();
      el<HTMLSpanElement>("run-status").textContent =
        `generation ${entry.generation} · best ${entry.best.toFixed(4)} · feasible ${entry.feasible_count}`;
    });
    el<HTMLSpanElement>("run-status").textContent = `run finished: ${status}`;
    if (status === "done" || status === "cancelled") {
      const body = await api.getResults(run_id);
      lastResults = body.results;
      redrawResults();
    }
  } catch (error) {
    if (error instanceof ApiError) {
      toast(`${error.code}: ${error.message}`);
    } else {
      toast(String(error));
    }
    el<HTMLSpanElement>("run-status").textContent = "run failed to start";
  }
}

async function cancelRun(): Promise<void> {
  if (currentRunId === null) {
    return;
  }
  try {
    await api.cancelRun(currentRunId);
  } catch (error) {
    if (error instanceof ApiError) {
      toast(`${error.code}: ${error.message}`);
    }
  }
}

// ------------------------------------------------------------- what-if probe

let whatifScenario: ScenarioDocument | null = null;

async function loadWhatifControls(): Promise<void> {
  const id = el<HTMLSelectElement>("whatif-scenario").value;
  if (!id) {
    return;
  }
  const record = await api.getScenario(id);
  whatifScenario = record.scenario;
  const optional = record.scenario.projects.filter((p) => !p.always_on);
  el<HTMLDivElement>("whatif-projects").innerHTML = optional
    .map(
      (p, i) =>
        `<label class="toggle"><input type="checkbox" class="whatif-flag" data-index="${i}"> ${p.name}</label>`,
    )
    .join("");
  const years = record.scenario.years;
  el<HTMLDivElement>("whatif-taxes").innerHTML = Array.from({ length: years })
    .map(
      (_, i) => `
      <label class="slider">year ${i + 1}
        <input type="range" class="whatif-rate" data-year="${i}" min="0" max="7" step="0.25" value="0">
        <span class="rate-value" id="rate-value-${i}">0.00%</span>
      </label>`,
    )
    .join("");
  for (const slider of document.querySelectorAll<HTMLInputElement>(".whatif-rate")) {
    slider.oninput = () => {
      el<HTMLSpanElement>(`rate-value-${slider.dataset.year}`).textContent =
        `${Number(slider.value).toFixed(2)}%`;
    };
  }
}

async function runWhatif(): Promise<void> {
  if (whatifScenario === null) {
    await loadWhatifControls();
  }
  const id = el<HTMLSelectElement>("whatif-scenario").value;
  const flags = [...document.querySelectorAll<HTMLInputElement>(".whatif-flag")].map(
    (box) => box.checked,
  );
  const rates = [...document.querySelectorAll<HTMLInputElement>(".whatif-rate")].map(
    (slider) => Number(slider.value) / 100,
  );
  try {
    const sim = await api.simulate({
      scenario_id: id,
      project_flags: flags,
      tax_rates: rates,
    });
    el<HTMLDivElement>("whatif-result").innerHTML = simulationTable(sim);
  } catch (error) {
    if (error instanceof ApiError) {
      toast(`${error.code}: ${error.message}`);
    } else {
      toast(String(error));
    }
  }
}

// -------------------------------------------------------------------- shell

function showTab(name: string): void {
  for (const section of document.querySelectorAll<HTMLElement>("main > section")) {
    section.hidden = section.id !== `tab-${name}`;
  }
  for (const button of document.querySelectorAll<HTMLButtonElement>("nav button")) {
    button.classList.toggle("active", button.dataset.tab === name);
  }
}

async function boot(): Promise<void> {
  for (const button of document.querySelectorAll<HTMLButtonElement>("nav button")) {
    button.onclick = () => showTab(button.dataset.tab ?? "run");
  }
  el<HTMLButtonElement>("run-start").onclick = () => void startRun();
  el<HTMLButtonElement>("run-cancel").onclick = () => void cancelRun();
  el<HTMLButtonElement>("whatif-load").onclick = () => void loadWhatifControls();
  el<HTMLButtonElement>("whatif-simulate").onclick = () => void runWhatif();
  el<HTMLInputElement>("run-pattern").oninput = updatePatternPreview;
  el<HTMLSelectElement>("run-mode").onchange = () => {
    el<HTMLDivElement>("standard-fields").hidden =
      el<HTMLSelectElement>("run-mode").value !== "standard";
  };
  showTab("run");
  updatePatternPreview();
  try {
    await refreshScenarioList();
  } catch (error) {
    toast(`cannot reach the API: ${String(error)}`);
  }
}

document.addEventListener("DOMContentLoaded", () => void boot());
