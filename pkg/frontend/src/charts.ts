/**
 * Dependency-free SVG builders for the two charts the console needs: the
 * best/mean convergence lines and per-year capacity bars against the
 * prudential limit.  Pure string output, so the rendering contract is
 * testable without a browser.
 */

export interface Series {
  label: string;
  values: number[];
}

const WIDTH = 560;
const HEIGHT = 220;
const PAD = 36;

function scale(
  value: number,
  lo: number,
  hi: number,
  outLo: number,
  outHi: number,
): number {
  if (hi === lo) {
    return (outLo + outHi) / 2;
  }
  return outLo + ((value - lo) / (hi - lo)) * (outHi - outLo);
}

function polyline(values: number[], lo: number, hi: number, color: string): string {
  const n = values.length;
  const points = values
    .map((v, i) => {
      const x = scale(i, 0, Math.max(n - 1, 1), PAD, WIDTH - PAD);
      const y = scale(v, lo, hi, HEIGHT - PAD, PAD);
      return `${x.toFixed(1)},${y.toFixed(1)}`;
    })
    .join(" ");
  return `<polyline fill="none" stroke="${color}" stroke-width="2" points="${points}"/>`;
}

/** Convergence chart: one line per series over generations. */
export function lineChart(series: Series[], colors = ["#38bdf8", "#94a3b8"]): string {
  const all = series.flatMap((s) => s.values).filter((v) => Number.isFinite(v));
  if (all.length === 0) {
    return `<svg class="chart" viewBox="0 0 ${WIDTH} ${HEIGHT}"><text x="${WIDTH / 2}" y="${
      HEIGHT / 2
    }" text-anchor="middle" fill="#64748b">waiting for events…</text></svg>`;
  }
  const lo = Math.min(...all);
  const hi = Math.max(...all);
  const lines = series
    .filter((s) => s.values.length > 0)
    .map((s, k) => polyline(s.values, lo, hi, colors[k % colors.length]))
    .join("");
  const legend = series
    .map(
      (s, k) =>
        `<text x="${PAD + 90 * k}" y="16" fill="${colors[k % colors.length]}" font-size="12">${s.label}</text>`,
    )
    .join("");
  const axis =
    `<line x1="${PAD}" y1="${HEIGHT - PAD}" x2="${WIDTH - PAD}" y2="${HEIGHT - PAD}" stroke="#334155"/>` +
    `<text x="${PAD}" y="${HEIGHT - PAD + 16}" fill="#64748b" font-size="11">0</text>` +
    `<text x="${WIDTH - PAD}" y="${HEIGHT - PAD + 16}" fill="#64748b" font-size="11" text-anchor="end">gen</text>` +
    `<text x="4" y="${PAD}" fill="#64748b" font-size="11">${hi.toFixed(3)}</text>` +
    `<text x="4" y="${HEIGHT - PAD}" fill="#64748b" font-size="11">${lo.toFixed(3)}</text>`;
  return `<svg class="chart" viewBox="0 0 ${WIDTH} ${HEIGHT}">${axis}${lines}${legend}</svg>`;
}

/**
 * Per-year capacity bars with the limit drawn as a horizontal marker line.
 * Null capacities (infinite) render as full-height "over" bars.
 */
export function capacityBars(
  capacities: (number | null)[],
  limit: number,
  width = 240,
  height = 120,
): string {
  const n = capacities.length;
  const top = Math.max(limit * 1.25, ...capacities.map((c) => (c === null ? limit * 1.5 : c)));
  const barWidth = (width - 10) / Math.max(n, 1);
  const bars = capacities
    .map((c, i) => {
      const value = c === null ? top : c;
      const h = (value / top) * (height - 24);
      const x = 5 + i * barWidth;
      const y = height - 12 - h;
      const over = c === null || c >= limit;
      const cls = over ? "bar over" : "bar under";
      const label = c === null ? "inf" : c.toFixed(1);
      return (
        `<rect class="${cls}" x="${x.toFixed(1)}" y="${y.toFixed(1)}" width="${(barWidth - 4).toFixed(1)}" height="${h.toFixed(1)}"/>` +
        `<text x="${(x + barWidth / 2 - 2).toFixed(1)}" y="${height - 2}" font-size="9" text-anchor="middle" fill="#94a3b8">${label}</text>`
      );
    })
    .join("");
  const markerY = height - 12 - (limit / top) * (height - 24);
  const marker =
    `<line class="limit" x1="0" x2="${width}" y1="${markerY.toFixed(1)}" y2="${markerY.toFixed(1)}" ` +
    `stroke="#f59e0b" stroke-dasharray="4 3"/>` +
    `<text x="${width - 2}" y="${(markerY - 3).toFixed(1)}" font-size="9" text-anchor="end" fill="#f59e0b">${limit}y</text>`;
  return `<svg class="bars" viewBox="0 0 ${width} ${height}">${bars}${marker}</svg>`;
}

/** Tiny inline sparkline for a tax path. */
export function sparkline(values: number[], width = 110, height = 26): string {
  if (values.length === 0) {
    return "";
  }
  const lo = Math.min(...values);
  const hi = Math.max(...values);
  const points = values
    .map((v, i) => {
      const x = scale(i, 0, Math.max(values.length - 1, 1), 2, width - 2);
      const y = scale(v, lo, hi, height - 3, 3);
      return `${x.toFixed(1)},${y.toFixed(1)}`;
    })
    .join(" ");
  return `<svg class="spark" viewBox="0 0 ${width} ${height}"><polyline fill="none" stroke="#38bdf8" stroke-width="1.5" points="${points}"/></svg>`;
}
