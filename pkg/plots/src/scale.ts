/** Deterministic axis scales and tick generation. */

export type ScaleKind = "linear" | "log";

export interface Scale {
  kind: ScaleKind;
  domain: [number, number];
  /** Map a data value to a pixel coordinate. */
  map(value: number): number;
  /** Tick positions in data units, inside the domain. */
  ticks(): number[];
}

/** Exact power of ten; Math.pow(10, e) can land one ulp off the literal. */
function pow10(e: number): number {
  return Number(`1e${e}`);
}

/** Round a positive step to the nearest "nice" value 1/2/5 x 10^k, rounding up. */
function niceStep(raw: number): number {
  const mag = Math.pow(10, Math.floor(Math.log10(raw)));
  const frac = raw / mag;
  if (frac <= 1) return mag;
  if (frac <= 2) return 2 * mag;
  if (frac <= 5) return 5 * mag;
  return 10 * mag;
}

/** Evenly spaced ticks at nice values covering [lo, hi]. */
export function linearTicks(lo: number, hi: number, count = 6): number[] {
  if (!(hi > lo)) return [lo];
  const step = niceStep((hi - lo) / count);
  const start = Math.ceil(lo / step) * step;
  const out: number[] = [];
  // Guard against float drift at the upper boundary
  for (let v = start; v <= hi + step * 1e-9; v += step) {
    out.push(Math.abs(v) < step * 1e-9 ? 0 : v);
  }
  return out;
}

/** Integer ticks with a nice integer step; used for iteration axes. */
export function integerTicks(lo: number, hi: number, maxCount = 8): number[] {
  const start = Math.ceil(lo);
  const stop = Math.floor(hi);
  if (stop < start) return [];
  const span = stop - start;
  if (span === 0) return [start];
  const step = Math.max(1, niceStep(span / maxCount));
  const out: number[] = [];
  for (let v = Math.ceil(start / step) * step; v <= stop; v += step) out.push(v);
  if (out.length === 0) out.push(start);
  return out;
}

export function linearScale(d0: number, d1: number, r0: number, r1: number): Scale {
  const span = d1 - d0;
  const map = (value: number): number =>
    span === 0 ? (r0 + r1) / 2 : r0 + ((value - d0) / span) * (r1 - r0);
  return { kind: "linear", domain: [d0, d1], map, ticks: () => linearTicks(d0, d1) };
}

/**
 * Base-10 logarithmic scale. The domain must be strictly positive; ticks sit
 * at powers of ten, thinned to at most ~10 when the domain spans many decades.
 */
export function logScale(d0: number, d1: number, r0: number, r1: number): Scale {
  if (!(d0 > 0) || !(d1 > 0)) {
    throw new Error(`log scale requires a positive domain, got [${d0}, ${d1}]`);
  }
  const l0 = Math.log10(d0);
  const l1 = Math.log10(d1);
  const span = l1 - l0;
  const map = (value: number): number =>
    span === 0 ? (r0 + r1) / 2 : r0 + ((Math.log10(value) - l0) / span) * (r1 - r0);
  const ticks = (): number[] => {
    const lo = Math.ceil(l0 - 1e-9);
    const hi = Math.floor(l1 + 1e-9);
    if (hi < lo) return [];
    const step = Math.max(1, Math.ceil((hi - lo) / 10));
    const out: number[] = [];
    for (let e = lo; e <= hi; e += step) out.push(pow10(e));
    return out;
  };
  return { kind: "log", domain: [d0, d1], map, ticks };
}

/**
 * Expand [lo, hi] to whole decades for a log axis so curves sit inside the
 * frame. Degenerate ranges (all values in one decade) get a full decade.
 */
export function decadeDomain(lo: number, hi: number): [number, number] {
  let e0 = Math.floor(Math.log10(lo) + 1e-12);
  let e1 = Math.ceil(Math.log10(hi) - 1e-12);
  if (e1 <= e0) e1 = e0 + 1;
  return [pow10(e0), pow10(e1)];
}

/** Compact deterministic label for a linear-axis tick value. */
export function tickLabel(value: number): string {
  if (value === 0) return "0";
  if (Math.abs(value) >= 1e5 || Math.abs(value) < 1e-4) {
    return value.toExponential(1).replace(/\.0e/, "e");
  }
  // Trim float drift like 0.30000000000000004
  return String(Number(value.toPrecision(10)));
}

/** Label for a log-axis tick, which is always an exact power of ten. */
export function logTickLabel(value: number): string {
  return `1e${Math.round(Math.log10(value))}`;
}
