/**
 * Pure HTML renderers.  Input is always an API payload (or a piece of one);
 * output is markup.  Numbers pass straight through formatting helpers; the
 * client never derives budget or fitness values itself.
 */

import { capacityBars, sparkline } from "./charts.js";
import type { ResultEntry, ScenarioDocument, SimulationResult } from "./api.js";

export function escapeHtml(text: string): string {
  return text
    .replace(/&/g, "&amp;")
    .replace(/</g, "&lt;")
    .replace(/>/g, "&gt;")
    .replace(/"/g, "&quot;");
}

export function fmt(value: number | null | undefined, digits = 2): string {
  if (value === null || value === undefined) {
    return "inf";
  }
  return value.toFixed(digits);
}

export function projectChips(flags: boolean[]): string {
  return flags
    .map(
      (on, i) =>
        `<span class="chip ${on ? "on" : "off"}">P${i + 1} ${on ? "ON" : "OFF"}</span>`,
    )
    .join("");
}

/** One row of the sortable result list. */
export function resultRow(entry: ResultEntry, limit: number, selected: boolean): string {
  const flags = entry.project_flags ? projectChips(entry.project_flags) : "";
  const taxes = entry.tax_rates
    ? entry.tax_rates.map((r) => `${(100 * r).toFixed(2)}%`).join(", ")
    : entry.taxes.map((t) => fmt(t)).join(", ");
  return (
    `<tr class="result ${selected ? "selected" : ""}" data-rank="${entry.rank}">` +
    `<td>${entry.rank + 1}</td>` +
    `<td class="score">${entry.score.toFixed(4)}</td>` +
    `<td>${entry.feasible ? "✓" : "✗"}</td>` +
    `<td>${flags}<div class="taxes">${escapeHtml(taxes)}</div>${sparkline(entry.taxes)}</td>` +
    `<td>${capacityBars(entry.capacities, limit)}</td>` +
    `<td><input type="checkbox" class="compare" data-rank="${entry.rank}"${selected ? " checked" : ""}></td>` +
    `</tr>`
  );
}

export function resultsTable(entries: ResultEntry[], limit: number, selected: Set<number>): string {
  const rows = entries.map((e) => resultRow(e, limit, selected.has(e.rank))).join("");
  return (
    `<table class="results"><thead><tr>` +
    `<th>#</th><th>fitness</th><th>ok</th><th>plan</th><th>capacity to be free of debt</th><th>compare</th>` +
    `</tr></thead><tbody>${rows}</tbody></table>`
  );
}

/** Side-by-side diff of two selected results. */
export function comparePanel(a: ResultEntry, b: ResultEntry, limit: number): string {
  const years = a.taxes.map((_, i) => i + 1);
  const row = (label: string, va: string[], vb: string[]) =>
    `<tr><th>${label}</th>` +
    years.map((_, i) => `<td>${va[i] ?? ""}</td>`).join("") +
    `<td class="gap"></td>` +
    years.map((_, i) => `<td>${vb[i] ?? ""}</td>`).join("") +
    `</tr>`;
  const taxesA = a.taxes.map((t) => fmt(t));
  const taxesB = b.taxes.map((t) => fmt(t));
  const invA = a.investments.map((v) => fmt(v));
  const invB = b.investments.map((v) => fmt(v));
  const capsA = a.capacities.map((c) => fmt(c, 1));
  const capsB = b.capacities.map((c) => fmt(c, 1));
  const flags = (e: ResultEntry) =>
    e.project_flags ? projectChips(e.project_flags) : "<em>n/a</em>";
  return (
    `<div class="compare-panel">` +
    `<h3>side by side: #${a.rank + 1} (fitness ${a.score.toFixed(4)}) vs #${b.rank + 1} (fitness ${b.score.toFixed(4)})</h3>` +
    `<div class="chips-row">${flags(a)}<span class="vs">vs</span>${flags(b)}</div>` +
    `<table class="diff"><thead><tr><th></th>` +
    years.map((y) => `<th>Y${y}</th>`).join("") +
    `<th class="gap"></th>` +
    years.map((y) => `<th>Y${y}</th>`).join("") +
    `</tr></thead><tbody>` +
    row("taxes", taxesA, taxesB) +
    row("investment", invA, invB) +
    row("CDD (years)", capsA, capsB) +
    `</tbody></table>` +
    `<div class="bars-row">${capacityBars(a.capacities, limit)}${capacityBars(b.capacities, limit)}</div>` +
    `</div>`
  );
}

/** Per-year table of a one-shot simulation, reference-layout style. */
export function simulationTable(sim: SimulationResult): string {
  const years = sim.lines.map((l) => l.year + 1);
  const row = (label: string, values: string[], cls = "") =>
    `<tr class="${cls}"><th>${label}</th>` +
    values.map((v) => `<td>${v}</td>`).join("") +
    `</tr>`;
  return (
    `<table class="simulation"><thead><tr><th></th>` +
    years.map((y) => `<th>Year ${y}</th>`).join("") +
    `</tr></thead><tbody>` +
    row("Operating recipes", sim.lines.map((l) => fmt(l.operating_recipes))) +
    row("Operating expenditures", sim.lines.map((l) => fmt(l.operating_expenditures))) +
    row("Debt interest", sim.lines.map((l) => fmt(l.interest))) +
    row("Gross self-financing", sim.lines.map((l) => fmt(l.gross_sfc)), "strong") +
    row("Capital repayment", sim.lines.map((l) => fmt(l.capital_repayment))) +
    row("Net self-financing", sim.lines.map((l) => fmt(l.net_sfc)), "strong") +
    row("Taxes", sim.taxes.map((t) => fmt(t))) +
    row("Investment", sim.investments.map((v) => fmt(v))) +
    row("New loan", sim.lines.map((l) => fmt(l.new_loan))) +
    row("Debt at closing", sim.lines.map((l) => fmt(l.debt_end))) +
    row(
      "Capacity to be free of debt",
      sim.capacities.map((c) => fmt(c, 1)),
      "strong",
    ) +
    `</tbody></table>` +
    `<div class="bars-row">${capacityBars(sim.capacities, sim.prudential_limit_years)}</div>`
  );
}

/** Editable scenario form prefilled from a scenario document. */
export function scenarioForm(doc: ScenarioDocument): string {
  const series = (label: string, name: string, values: number[]) =>
    `<label class="field">${label}
      <input name="${name}" value="${values.join(", ")}">
    </label>`;
  const projects = doc.projects
    .map(
      (p, i) => `
    <fieldset class="project" data-index="${i}">
      <label class="field">name <input name="project-name-${i}" value="${escapeHtml(p.name)}"></label>
      <label class="field">costs <input name="project-costs-${i}" value="${p.cost_by_year.join(", ")}"></label>
      <label class="field">priority <input name="project-priority-${i}" type="number" min="1" max="4" value="${p.priority}"></label>
      <label class="field">always on <input name="project-always-${i}" type="checkbox"${p.always_on ? " checked" : ""}></label>
    </fieldset>`,
    )
    .join("");
  return `
  <form id="scenario-form">
    <label class="field">name <input name="name" value="${escapeHtml(doc.name ?? "")}"></label>
    <label class="field">years <input name="years" type="number" min="1" value="${doc.years}"></label>
    <label class="field">tax mode
      <select name="tax_mode">
        <option value="levels"${doc.tax_mode !== "rates" ? " selected" : ""}>levels</option>
        <option value="rates"${doc.tax_mode === "rates" ? " selected" : ""}>rates</option>
      </select>
    </label>
    <label class="field">base tax <input name="base_tax" type="number" step="any" value="${doc.base_tax ?? 0}"></label>
    ${series("state allocations", "state_allocations", doc.exogenous.state_allocations)}
    ${series("other operating recipes", "other_operating_recipes", doc.exogenous.other_operating_recipes)}
    ${series("operating expenditures", "operating_expenditures", doc.exogenous.operating_expenditures)}
    ${series("subventions", "subventions", doc.exogenous.subventions)}
    <label class="field">loan interest rate <input name="loan_interest_rate" type="number" step="any" value="${doc.exogenous.loan_interest_rate}"></label>
    <label class="field">loan maturity (years) <input name="loan_maturity_years" type="number" min="1" value="${doc.exogenous.loan_maturity_years}"></label>
    <label class="field">debt remaining capital <input name="remaining_capital" type="number" step="any" value="${doc.debt.remaining_capital}"></label>
    <label class="field">debt schedule (year:capital:interest; …)
      <input name="annuity_schedule" value="${doc.debt.annuity_schedule.map((r) => r.join(":")).join("; ")}">
    </label>
    <h3>projects</h3>
    ${projects}
    <div class="form-errors" id="scenario-errors"></div>
    <button type="submit">save scenario</button>
  </form>`;
}
