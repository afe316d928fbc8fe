/**
 * String-based SVG construction. No DOM, no randomness, no timestamps: the
 * same inputs always produce byte-identical markup.
 */

import type { ScaleKind } from "./scale.js";

export const WIDTH = 760;
export const HEIGHT = 480;

/** Pixel bounds of the plotting area inside the figure. */
export const PLOT = { x0: 86, y0: 48, x1: WIDTH - 28, y1: HEIGHT - 62 } as const;

/** Curve colors, assigned by order of first appearance in the input file. */
export const PALETTE = [
  "#1f77b4",
  "#d62728",
  "#2ca02c",
  "#9467bd",
  "#ff7f0e",
  "#8c564b",
] as const;

const FONT = "DejaVu Sans, Helvetica, Arial, sans-serif";

/** Fixed-precision pixel coordinate; keeps output stable across platforms. */
export function px(value: number): string {
  const s = value.toFixed(2);
  return s === "-0.00" ? "0.00" : s;
}

export function escapeText(s: string): string {
  return s
    .replace(/&/g, "&amp;")
    .replace(/</g, "&lt;")
    .replace(/>/g, "&gt;")
    .replace(/"/g, "&quot;");
}

function tag(
  name: string,
  attrs: Record<string, string | number>,
  body?: string,
): string {
  const parts = Object.entries(attrs)
    .map(([k, v]) => ` ${k}="${v}"`)
    .join("");
  return body === undefined
    ? `<${name}${parts}/>`
    : `<${name}${parts}>${body}</${name}>`;
}

function text(
  x: number,
  y: number,
  content: string,
  opts: { anchor?: string; size?: number; rotate?: boolean; bold?: boolean } = {},
): string {
  const attrs: Record<string, string | number> = {
    x: px(x),
    y: px(y),
    "font-family": FONT,
    "font-size": opts.size ?? 12,
    fill: "#222222",
    "text-anchor": opts.anchor ?? "middle",
  };
  if (opts.bold) attrs["font-weight"] = "bold";
  if (opts.rotate) attrs.transform = `rotate(-90 ${px(x)} ${px(y)})`;
  return tag("text", attrs, escapeText(content));
}

/** Figure-level knobs shared by both renderers. */
export interface RenderOptions {
  title?: string;
  xLabel?: string;
  yLabel?: string;
  xScale?: ScaleKind;
  yScale?: ScaleKind;
}

export interface AxisTick {
  /** Pixel position along the axis. */
  at: number;
  label: string;
}

export interface ChartLayout {
  title: string;
  xLabel: string;
  yLabel: string;
  xTicks: AxisTick[];
  yTicks: AxisTick[];
  legend: { label: string; color: string }[];
  /** Pre-rendered curve markup, drawn above the grid and below the legend. */
  body: string[];
}

/** Assemble a complete SVG document around rendered curves. */
export function renderChart(layout: ChartLayout): string {
  const parts: string[] = [];
  parts.push(
    `<svg xmlns="http://www.w3.org/2000/svg" width="${WIDTH}" height="${HEIGHT}" viewBox="0 0 ${WIDTH} ${HEIGHT}">`,
  );
  parts.push(tag("rect", { x: 0, y: 0, width: WIDTH, height: HEIGHT, fill: "#ffffff" }));

  // Grid lines under everything else
  for (const t of layout.xTicks) {
    parts.push(
      tag("line", {
        x1: px(t.at), y1: px(PLOT.y0), x2: px(t.at), y2: px(PLOT.y1),
        stroke: "#dddddd", "stroke-width": 1,
      }),
    );
  }
  for (const t of layout.yTicks) {
    parts.push(
      tag("line", {
        x1: px(PLOT.x0), y1: px(t.at), x2: px(PLOT.x1), y2: px(t.at),
        stroke: "#dddddd", "stroke-width": 1,
      }),
    );
  }

  parts.push(...layout.body);

  // Frame above the curves so they never overpaint the border
  parts.push(
    tag("rect", {
      x: px(PLOT.x0), y: px(PLOT.y0),
      width: px(PLOT.x1 - PLOT.x0), height: px(PLOT.y1 - PLOT.y0),
      fill: "none", stroke: "#555555", "stroke-width": 1,
    }),
  );

  for (const t of layout.xTicks) {
    parts.push(
      tag("line", {
        x1: px(t.at), y1: px(PLOT.y1), x2: px(t.at), y2: px(PLOT.y1 + 5),
        stroke: "#555555", "stroke-width": 1,
      }),
    );
    parts.push(text(t.at, PLOT.y1 + 19, t.label, { size: 11 }));
  }
  for (const t of layout.yTicks) {
    parts.push(
      tag("line", {
        x1: px(PLOT.x0 - 5), y1: px(t.at), x2: px(PLOT.x0), y2: px(t.at),
        stroke: "#555555", "stroke-width": 1,
      }),
    );
    parts.push(text(PLOT.x0 - 9, t.at + 4, t.label, { anchor: "end", size: 11 }));
  }

  parts.push(text((PLOT.x0 + PLOT.x1) / 2, 26, layout.title, { size: 15, bold: true }));
  parts.push(text((PLOT.x0 + PLOT.x1) / 2, HEIGHT - 18, layout.xLabel, { size: 13 }));
  parts.push(text(24, (PLOT.y0 + PLOT.y1) / 2, layout.yLabel, { size: 13, rotate: true }));

  if (layout.legend.length > 0) {
    const rowH = 18;
    const charW = 7.3;
    const widest = Math.max(...layout.legend.map((e) => e.label.length));
    const boxW = 40 + widest * charW;
    const boxH = 10 + rowH * layout.legend.length;
    const bx = PLOT.x1 - boxW - 12;
    const by = PLOT.y0 + 12;
    parts.push(
      tag("rect", {
        x: px(bx), y: px(by), width: px(boxW), height: px(boxH),
        fill: "#ffffff", stroke: "#999999", "stroke-width": 1,
      }),
    );
    layout.legend.forEach((entry, k) => {
      const cy = by + 14 + k * rowH;
      parts.push(
        tag("line", {
          x1: px(bx + 8), y1: px(cy), x2: px(bx + 30), y2: px(cy),
          stroke: entry.color, "stroke-width": 2.5,
        }),
      );
      parts.push(text(bx + 36, cy + 4, entry.label, { anchor: "start", size: 12 }));
    });
  }

  parts.push("</svg>");
  return parts.join("\n") + "\n";
}
