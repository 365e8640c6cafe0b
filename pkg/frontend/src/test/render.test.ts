import { describe, expect, it } from "vitest";

import type { ResultEntry, SimulationResult } from "../api.js";
import { comparePanel, escapeHtml, projectChips, resultsTable, simulationTable } from "../render.js";

const entry = (rank: number, score: number): ResultEntry => ({
  rank,
  score,
  feasible: true,
  investments: [6.9, 8.4, 8.05, 5.55, 4.2],
  taxes: [10.2, 10.4, 10.6, 10.6, 10.6],
  capacities: [2.67, 3.19, 3.48, 3.8, 3.78],
  project_flags: [false, false, true, false, true],
  tax_rates: [0.0125, 0.0153, 0.0273, 0.0688, 0.0104],
});

describe("resultsTable", () => {
  it("shows exactly the payload numbers, not recomputed ones", () => {
    const html = resultsTable([entry(0, 0.6171234)], 15, new Set());
    // score printed verbatim to four decimals
    expect(html).toContain("0.6171");
    // decoded tax path printed as percentages straight from the payload
    expect(html).toContain("1.25%");
    expect(html).toContain("6.88%");
    // capacity bars carry the payload capacities
    expect(html).toContain(">2.7</text>");
    expect(html).toContain(">3.8</text>");
  });

  it("renders one row per entry with rank and chips", () => {
    const html = resultsTable([entry(0, 0.62), entry(1, 0.61)], 15, new Set([1]));
    expect(html.match(/<tr class="result/g)?.length).toBe(2);
    expect(html).toContain('data-rank="0"');
    expect(html).toContain('class="result selected"');
    expect(html).toContain("P3 ON");
    expect(html).toContain("P1 OFF");
  });
});

describe("comparePanel", () => {
  it("places both results side by side", () => {
    const a = entry(0, 0.62);
    const b = entry(3, 0.58);
    const html = comparePanel(a, b, 15);
    expect(html).toContain("#1");
    expect(html).toContain("#4");
    expect(html).toContain("0.6200");
    expect(html).toContain("0.5800");
    expect(html.match(/<svg class="bars"/g)?.length).toBe(2);
    expect(html).toContain("CDD (years)");
  });
});

describe("simulationTable", () => {
  const sim: SimulationResult = {
    investments: [6.9, 6.9],
    taxes: [10.2, 10.4],
    capacities: [2.67, null],
    prudential_limit_years: 15,
    lines: [
      {
        year: 0, tax: 10.2, investment: 6.9, operating_recipes: 25.2,
        operating_expenditures: 21.0, interest: 0.36, gross_sfc: 3.84,
        capital_repayment: 1.0, net_sfc: 2.84, subventions: 0.8,
        new_loan: 3.26, reserve_in: 0, reserve_out: 0, debt_start: 8.0, debt_end: 10.26,
      },
      {
        year: 1, tax: 10.4, investment: 6.9, operating_recipes: 25.4,
        operating_expenditures: 21.05, interest: 0.45, gross_sfc: 3.9,
        capital_repayment: 1.27, net_sfc: 2.63, subventions: 0.8,
        new_loan: 3.47, reserve_in: 0, reserve_out: 0, debt_start: 10.26, debt_end: 12.46,
      },
    ],
  };

  it("prints every line straight from the payload", () => {
    const html = simulationTable(sim);
    expect(html).toContain("Year 1");
    expect(html).toContain("Year 2");
    expect(html).toContain("25.20");
    expect(html).toContain("3.84");
    expect(html).toContain("Gross self-financing");
    expect(html).toContain("Capacity to be free of debt");
    expect(html).toContain(">inf<"); // the null capacity
  });

  it("draws the capacity bars with the prudential marker", () => {
    const html = simulationTable(sim);
    expect(html).toContain('class="limit"');
    expect(html).toContain("15y");
  });
});

describe("helpers", () => {
  it("escapes markup in user text", () => {
    expect(escapeHtml('<b>"x"&</b>')).toBe("&lt;b&gt;&quot;x&quot;&amp;&lt;/b&gt;");
  });

  it("chips reflect the flag order", () => {
    const html = projectChips([true, false]);
    expect(html).toContain("P1 ON");
    expect(html).toContain("P2 OFF");
  });
});
