/**
 * Empirical-CDF figure for final leakage across a Monte-Carlo batch: one
 * right-continuous step curve per algorithm, leakage on a log axis by
 * default. A curve sitting further left means that algorithm ends runs with
 * less residual interference.
 */

import { CsvError, algorithmOrder, type FinalLeakageRow } from "./csv.js";
import {
  decadeDomain,
  linearScale,
  linearTicks,
  logScale,
  logTickLabel,
  tickLabel,
  type Scale,
  type ScaleKind,
} from "./scale.js";
import {
  PALETTE,
  PLOT,
  escapeText,
  px,
  renderChart,
  type AxisTick,
  type RenderOptions,
} from "./svg.js";

/** Jump points of the empirical CDF: sorted values with p = rank/n. */
export function empiricalCdf(values: number[]): { x: number; p: number }[] {
  const sorted = [...values].sort((a, b) => a - b);
  const n = sorted.length;
  return sorted.map((x, k) => ({ x, p: (k + 1) / n }));
}

/** Smallest value whose empirical CDF reaches p; p in (0, 1]. */
export function quantile(values: number[], p: number): number {
  const sorted = [...values].sort((a, b) => a - b);
  const index = Math.min(sorted.length - 1, Math.max(0, Math.ceil(p * sorted.length) - 1));
  return sorted[index];
}

function stepPath(
  points: { x: number; p: number }[],
  xScale: Scale,
  yScale: Scale,
): string {
  const parts = [`M${px(xScale.map(points[0].x))},${px(yScale.map(0))}`];
  for (let k = 0; k < points.length; k++) {
    parts.push(`V${px(yScale.map(points[k].p))}`);
    if (k + 1 < points.length) {
      parts.push(`H${px(xScale.map(points[k + 1].x))}`);
    }
  }
  return parts.join(" ");
}

/** Render the final-leakage ECDF figure as a complete SVG document. */
export function renderEcdf(
  rows: FinalLeakageRow[],
  options: RenderOptions = {},
): string {
  if (rows.length === 0) {
    throw new CsvError(2, "no data rows after the header");
  }
  const xKind: ScaleKind = options.xScale ?? "log";

  if (xKind === "log") {
    for (const row of rows) {
      if (!(row.finalLeakage > 0)) {
        throw new CsvError(
          row.line,
          `final_leakage ${row.finalLeakage} is not positive, so a log axis cannot show it`,
        );
      }
    }
  }

  const series = algorithmOrder(rows).map((name, k) => {
    const values = rows.filter((r) => r.algorithm === name).map((r) => r.finalLeakage);
    return { name, points: empiricalCdf(values), color: PALETTE[k % PALETTE.length] };
  });

  let lo = rows[0].finalLeakage;
  let hi = lo;
  for (const row of rows) {
    if (row.finalLeakage < lo) lo = row.finalLeakage;
    if (row.finalLeakage > hi) hi = row.finalLeakage;
  }
  const xScale =
    xKind === "log"
      ? logScale(...decadeDomain(lo, hi), PLOT.x0, PLOT.x1)
      : linearScale(lo > 0 ? 0 : lo, hi, PLOT.x0, PLOT.x1);
  const yScale = linearScale(0, 1, PLOT.y1, PLOT.y0);

  const xLabelFn = xKind === "log" ? logTickLabel : tickLabel;
  const xTicks: AxisTick[] = xScale
    .ticks()
    .map((v) => ({ at: xScale.map(v), label: xLabelFn(v) }));
  const yTicks: AxisTick[] = linearTicks(0, 1).map((v) => ({
    at: yScale.map(v),
    label: tickLabel(v),
  }));

  const body = series.map(({ name, points, color }) => {
    const d = stepPath(points, xScale, yScale);
    const alg = escapeText(name);
    return `<path d="${d}" fill="none" stroke="${color}" stroke-width="1.8" data-algorithm="${alg}" data-points="${points.length}"/>`;
  });

  return renderChart({
    title: options.title ?? "Final leakage distribution",
    xLabel: options.xLabel ?? "final interference leakage",
    yLabel: options.yLabel ?? "empirical CDF",
    xTicks,
    yTicks,
    legend: series.map(({ name, color }) => ({ label: name, color })),
    body,
  });
}
