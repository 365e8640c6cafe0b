/**
 * Tax evolution pattern editing: non-negative yearly weights that must reach
 * the server summing to one (within 1e-9).
 */

export function normalizePattern(raw: number[]): number[] {
  if (raw.length === 0) {
    throw new Error("pattern needs at least one year");
  }
  if (raw.some((w) => !Number.isFinite(w) || w < 0)) {
    throw new Error("pattern weights must be non-negative numbers");
  }
  const total = raw.reduce((a, b) => a + b, 0);
  if (total <= 0) {
    throw new Error("pattern weights must not all be zero");
  }
  const scaled = raw.map((w) => w / total);
  // one more pass squeezes the float residue under 1e-9
  const second = scaled.reduce((a, b) => a + b, 0);
  return scaled.map((w) => w / second);
}

export function patternSum(weights: number[]): number {
  return weights.reduce((a, b) => a + b, 0);
}

export function isNormalized(weights: number[], tolerance = 1e-9): boolean {
  return Math.abs(patternSum(weights) - 1) <= tolerance;
}
