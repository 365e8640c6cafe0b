/**
 * Scenario form parsing and client-side validation, mirroring the server's
 * schema (version 1) so obvious mistakes surface before the round-trip.
 */

import type { ScenarioDocument } from "./api.js";

export function parseSeries(text: string): number[] {
  return text
    .split(/[,;\s]+/)
    .filter((token) => token.length > 0)
    .map((token) => Number(token));
}

export function parseSchedule(text: string): [number, number, number][] {
  return text
    .split(";")
    .map((chunk) => chunk.trim())
    .filter((chunk) => chunk.length > 0)
    .map((chunk) => {
      const parts = chunk.split(":").map((p) => Number(p.trim()));
      return [parts[0] ?? NaN, parts[1] ?? NaN, parts[2] ?? NaN];
    });
}

export function validateScenario(doc: ScenarioDocument): string[] {
  const errors: string[] = [];
  const n = doc.years;
  if (!Number.isInteger(n) || n < 1) {
    errors.push("years must be a positive integer");
    return errors;
  }
  const seriesFields: [string, number[]][] = [
    ["state allocations", doc.exogenous.state_allocations],
    ["other operating recipes", doc.exogenous.other_operating_recipes],
    ["operating expenditures", doc.exogenous.operating_expenditures],
    ["subventions", doc.exogenous.subventions],
  ];
  for (const [label, values] of seriesFields) {
    if (values.length !== n) {
      errors.push(`${label}: expected ${n} values, got ${values.length}`);
    }
    if (values.some((v) => !Number.isFinite(v) || v < 0)) {
      errors.push(`${label}: values must be non-negative numbers`);
    }
  }
  const rate = doc.exogenous.loan_interest_rate;
  if (!(rate >= 0 && rate < 1)) {
    errors.push("loan interest rate must lie in [0, 1)");
  }
  if (!Number.isInteger(doc.exogenous.loan_maturity_years) || doc.exogenous.loan_maturity_years < 1) {
    errors.push("loan maturity must be a positive integer");
  }
  if (!(doc.debt.remaining_capital >= 0)) {
    errors.push("debt remaining capital must be non-negative");
  }
  let scheduled = 0;
  for (const [year, capital, interest] of doc.debt.annuity_schedule) {
    if (!Number.isInteger(year) || year < 0 || !(capital >= 0) || !(interest >= 0)) {
      errors.push("debt schedule entries must be year:capital:interest with non-negative values");
      break;
    }
    scheduled += capital;
  }
  if (Math.abs(scheduled - doc.debt.remaining_capital) > 1e-6 * Math.max(1, scheduled)) {
    errors.push("debt remaining capital must equal the scheduled capital total");
  }
  if (doc.projects.length < 1) {
    errors.push("at least one project is required");
  }
  doc.projects.forEach((p, i) => {
    if (p.cost_by_year.length !== n) {
      errors.push(`project ${i + 1} (${p.name}): expected ${n} yearly costs`);
    }
    if (p.cost_by_year.some((c) => !Number.isFinite(c) || c < 0)) {
      errors.push(`project ${i + 1} (${p.name}): costs must be non-negative`);
    }
    if (!Number.isInteger(p.priority) || p.priority < 1 || p.priority > 4) {
      errors.push(`project ${i + 1} (${p.name}): priority must lie in 1..4`);
    }
  });
  if ((doc.base_tax ?? 0) < 0) {
    errors.push("base tax must be non-negative");
  }
  return errors;
}

export function scenarioFromForm(form: FormData, template: ScenarioDocument): ScenarioDocument {
  const get = (name: string) => String(form.get(name) ?? "");
  const doc: ScenarioDocument = {
    version: 1,
    name: get("name"),
    years: Number(get("years")),
    tax_mode: get("tax_mode") === "rates" ? "rates" : "levels",
    base_tax: Number(get("base_tax")),
    exogenous: {
      state_allocations: parseSeries(get("state_allocations")),
      other_operating_recipes: parseSeries(get("other_operating_recipes")),
      operating_expenditures: parseSeries(get("operating_expenditures")),
      subventions: parseSeries(get("subventions")),
      loan_interest_rate: Number(get("loan_interest_rate")),
      loan_maturity_years: Number(get("loan_maturity_years")),
    },
    debt: {
      remaining_capital: Number(get("remaining_capital")),
      annuity_schedule: parseSchedule(get("annuity_schedule")),
    },
    projects: template.projects.map((_, i) => ({
      name: get(`project-name-${i}`),
      cost_by_year: parseSeries(get(`project-costs-${i}`)),
      priority: Number(get(`project-priority-${i}`)),
      always_on: form.get(`project-always-${i}`) !== null,
    })),
  };
  return doc;
}
