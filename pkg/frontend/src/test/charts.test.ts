import { describe, expect, it } from "vitest";

import { capacityBars, lineChart, sparkline } from "../charts.js";

function polylineYs(svg: string): number[] {
  const match = svg.match(/points="([^"]+)"/);
  if (!match) {
    return [];
  }
  return match[1].split(" ").map((pair) => Number(pair.split(",")[1]));
}

describe("lineChart", () => {
  it("renders one polyline per series", () => {
    const svg = lineChart([
      { label: "best", values: [0.1, 0.2, 0.3] },
      { label: "mean", values: [0.05, 0.1, 0.2] },
    ]);
    expect(svg.match(/<polyline/g)?.length).toBe(2);
    expect(svg).toContain(">best</text>");
    expect(svg).toContain(">mean</text>");
  });

  it("maps a non-decreasing series to non-increasing y pixels", () => {
    const svg = lineChart([{ label: "best", values: [0.1, 0.4, 0.4, 0.9] }]);
    const ys = polylineYs(svg);
    for (let i = 1; i < ys.length; i++) {
      expect(ys[i]).toBeLessThanOrEqual(ys[i - 1] + 1e-9);
    }
  });

  it("shows a placeholder with no data", () => {
    expect(lineChart([{ label: "best", values: [] }])).toContain("waiting");
  });
});

describe("capacityBars", () => {
  it("marks bars under the limit and draws the marker", () => {
    const svg = capacityBars([6.5, 8.6, 11.1], 15);
    expect(svg.match(/class="bar under"/g)?.length).toBe(3);
    expect(svg).not.toContain('class="bar over"');
    expect(svg).toContain('class="limit"');
    expect(svg).toContain("15y");
  });

  it("flags breaches and infinite capacities as over", () => {
    const svg = capacityBars([14.0, 16.2, null], 15);
    expect(svg.match(/class="bar over"/g)?.length).toBe(2);
    expect(svg.match(/class="bar under"/g)?.length).toBe(1);
    expect(svg).toContain(">inf</text>");
  });

  it("prints the payload values on the bars", () => {
    const svg = capacityBars([6.48, 7.65], 15);
    expect(svg).toContain(">6.5</text>");
    expect(svg).toContain(">7.7</text>");
  });
});

describe("sparkline", () => {
  it("renders a polyline through all points", () => {
    const svg = sparkline([10.2, 10.4, 10.6]);
    expect(svg).toContain("<polyline");
    expect(svg.match(/points="([^"]+)"/)?.[1].split(" ").length).toBe(3);
  });

  it("is empty with no values", () => {
    expect(sparkline([])).toBe("");
  });
});
