/**
 * Leakage-versus-iteration figure: one curve per algorithm from a single
 * simulated channel, leakage on a log axis by default so the descent toward
 * alignment stays visible over many orders of magnitude.
 */

import { CsvError, algorithmOrder, type TrajectoryRow } from "./csv.js";
import {
  integerTicks,
  linearScale,
  logScale,
  logTickLabel,
  decadeDomain,
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

function extent(values: number[]): [number, number] {
  let lo = values[0];
  let hi = values[0];
  for (const v of values) {
    if (v < lo) lo = v;
    if (v > hi) hi = v;
  }
  return [lo, hi];
}

function makeAxis(
  kind: ScaleKind,
  lo: number,
  hi: number,
  r0: number,
  r1: number,
  zeroBase: boolean,
): Scale {
  if (kind === "log") {
    const [d0, d1] = decadeDomain(lo, hi);
    return logScale(d0, d1, r0, r1);
  }
  return linearScale(zeroBase && lo > 0 ? 0 : lo, hi, r0, r1);
}

function axisTicks(scale: Scale, integer: boolean): AxisTick[] {
  const label = scale.kind === "log" ? logTickLabel : tickLabel;
  const values = integer && scale.kind === "linear"
    ? integerTicks(scale.domain[0], scale.domain[1])
    : scale.ticks();
  return values.map((v) => ({ at: scale.map(v), label: label(v) }));
}

/** Render the trajectory figure as a complete SVG document. */
export function renderTrajectory(
  rows: TrajectoryRow[],
  options: RenderOptions = {},
): string {
  if (rows.length === 0) {
    throw new CsvError(2, "no data rows after the header");
  }
  const xKind = options.xScale ?? "linear";
  const yKind = options.yScale ?? "log";

  const firstId = rows[0].realizationId;
  for (const row of rows) {
    if (row.realizationId !== firstId) {
      throw new CsvError(
        row.line,
        `trajectory plots take a single realization, got ids ${firstId} and ${row.realizationId}`,
      );
    }
    if (yKind === "log" && !(row.totalLeakage > 0)) {
      throw new CsvError(
        row.line,
        `total_leakage ${row.totalLeakage} is not positive, so a log axis cannot show it`,
      );
    }
    if (xKind === "log" && !(row.iteration > 0)) {
      throw new CsvError(row.line, "iteration 0 cannot sit on a log axis");
    }
  }

  const series = algorithmOrder(rows).map((name, k) => {
    const points = rows
      .filter((r) => r.algorithm === name)
      .sort((a, b) => a.iteration - b.iteration);
    for (let i = 1; i < points.length; i++) {
      if (points[i].iteration === points[i - 1].iteration) {
        throw new CsvError(
          points[i].line,
          `duplicate iteration ${points[i].iteration} for algorithm "${name}"`,
        );
      }
    }
    return { name, points, color: PALETTE[k % PALETTE.length] };
  });

  const [itLo, itHi] = extent(rows.map((r) => r.iteration));
  const [lkLo, lkHi] = extent(rows.map((r) => r.totalLeakage));
  const xScale = makeAxis(xKind, itLo, itHi, PLOT.x0, PLOT.x1, false);
  const yScale = makeAxis(yKind, lkLo, lkHi, PLOT.y1, PLOT.y0, true);

  const body = series.map(({ name, points, color }) => {
    const alg = escapeText(name);
    if (points.length === 1) {
      const cx = px(xScale.map(points[0].iteration));
      const cy = px(yScale.map(points[0].totalLeakage));
      return `<circle cx="${cx}" cy="${cy}" r="3" fill="${color}" data-algorithm="${alg}" data-points="1"/>`;
    }
    const d = points
      .map((p, i) => {
        const cmd = i === 0 ? "M" : "L";
        return `${cmd}${px(xScale.map(p.iteration))},${px(yScale.map(p.totalLeakage))}`;
      })
      .join(" ");
    return `<path d="${d}" fill="none" stroke="${color}" stroke-width="1.8" data-algorithm="${alg}" data-points="${points.length}"/>`;
  });

  return renderChart({
    title: options.title ?? "Interference leakage trajectory",
    xLabel: options.xLabel ?? "iteration",
    yLabel: options.yLabel ?? "total interference leakage",
    xTicks: axisTicks(xScale, true),
    yTicks: axisTicks(yScale, false),
    legend: series.map(({ name, color }) => ({ label: name, color })),
    body,
  });
}
