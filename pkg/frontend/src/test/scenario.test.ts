import { describe, expect, it } from "vitest";

import type { ScenarioDocument } from "../api.js";
import { parseSchedule, parseSeries, validateScenario } from "../scenario.js";

function validDoc(): ScenarioDocument {
  return {
    version: 1,
    name: "test",
    years: 2,
    tax_mode: "levels",
    base_tax: 10,
    exogenous: {
      state_allocations: [12, 12],
      other_operating_recipes: [3, 3],
      operating_expenditures: [21, 21],
      subventions: [0.8, 0.8],
      loan_interest_rate: 0.04,
      loan_maturity_years: 12,
    },
    debt: {
      remaining_capital: 2,
      annuity_schedule: [
        [0, 1, 0.08],
        [1, 1, 0.04],
      ],
    },
    projects: [{ name: "core", cost_by_year: [1, 1], priority: 1, always_on: true }],
  };
}

describe("parseSeries", () => {
  it("splits on commas and whitespace", () => {
    expect(parseSeries("1, 2.5,3  4")).toEqual([1, 2.5, 3, 4]);
  });

  it("keeps NaN for junk so validation can flag it", () => {
    expect(parseSeries("1, x")[1]).toBeNaN();
  });
});

describe("parseSchedule", () => {
  it("parses year:capital:interest triples", () => {
    expect(parseSchedule("0:1:0.08; 1:1:0.04")).toEqual([
      [0, 1, 0.08],
      [1, 1, 0.04],
    ]);
  });
});

describe("validateScenario", () => {
  it("accepts a consistent document", () => {
    expect(validateScenario(validDoc())).toEqual([]);
  });

  it("rejects negative costs before submit", () => {
    const doc = validDoc();
    doc.projects[0].cost_by_year = [-1, 1];
    expect(validateScenario(doc).some((e) => e.includes("non-negative"))).toBe(true);
  });

  it("rejects series of the wrong length", () => {
    const doc = validDoc();
    doc.exogenous.subventions = [0.8];
    expect(validateScenario(doc).some((e) => e.includes("expected 2"))).toBe(true);
  });

  it("rejects a debt total that disagrees with the schedule", () => {
    const doc = validDoc();
    doc.debt.remaining_capital = 5;
    expect(validateScenario(doc).some((e) => e.includes("scheduled capital"))).toBe(true);
  });

  it("rejects out-of-range priorities and rates", () => {
    const doc = validDoc();
    doc.projects[0].priority = 9;
    doc.exogenous.loan_interest_rate = 1.2;
    const errors = validateScenario(doc);
    expect(errors.some((e) => e.includes("priority"))).toBe(true);
    expect(errors.some((e) => e.includes("interest rate"))).toBe(true);
  });
});
