#!/usr/bin/env node
/**
 * Command-line figure generation from harness CSV files.
 *
 * Exit codes: 0 on success, 1 on input or rendering errors (missing file,
 * malformed CSV, nonpositive data on a log axis), 2 on usage errors. The
 * output file is only written after the input parsed and rendered cleanly.
 */

import { mkdirSync, readFileSync, realpathSync, writeFileSync } from "node:fs";
import { dirname, resolve } from "node:path";
import { pathToFileURL } from "node:url";
import { parseArgs } from "node:util";
import { CsvError, readFinalLeakageCsv, readTrajectoryCsv } from "./csv.js";
import { renderEcdf } from "./ecdf.js";
import { renderTrajectory } from "./trajectory.js";
import type { RenderOptions } from "./svg.js";
import type { ScaleKind } from "./scale.js";

const USAGE = `usage: leakage-plots <trajectory|ecdf> --input FILE.csv --output FILE.svg
                     [--title TEXT] [--x-label TEXT] [--y-label TEXT]
                     [--x-scale log|linear] [--y-scale log|linear]

subcommands:
  trajectory   leakage vs. iteration curves from a run-single trajectory CSV
               (columns realization_id,algorithm,iteration,total_leakage; log y by default)
  ecdf         final-leakage ECDF curves from a run-montecarlo CSV
               (columns realization_id,algorithm,final_leakage,iterations_run,converged; log x by default)
`;

/** Writers for normal and error output; injectable so tests can capture both. */
export interface Io {
  out(message: string): void;
  err(message: string): void;
}

const processIo: Io = {
  out: (message) => process.stdout.write(message),
  err: (message) => process.stderr.write(message),
};

function parseScale(raw: string | undefined, flag: string, io: Io): ScaleKind | null | undefined {
  if (raw === undefined) return undefined;
  if (raw === "log" || raw === "linear") return raw;
  io.err(`error: ${flag} must be "log" or "linear", got "${raw}"\n${USAGE}`);
  return null;
}

/** Run the CLI; returns the process exit code. */
export function main(argv: string[], io: Io = processIo): number {
  let parsed;
  try {
    parsed = parseArgs({
      args: argv,
      allowPositionals: true,
      options: {
        input: { type: "string", short: "i" },
        output: { type: "string", short: "o" },
        title: { type: "string" },
        "x-label": { type: "string" },
        "y-label": { type: "string" },
        "x-scale": { type: "string" },
        "y-scale": { type: "string" },
        help: { type: "boolean", short: "h" },
      },
    });
  } catch (err) {
    io.err(`error: ${err instanceof Error ? err.message : String(err)}\n${USAGE}`);
    return 2;
  }
  const { values, positionals } = parsed;

  if (values.help) {
    io.out(USAGE);
    return 0;
  }
  if (positionals.length !== 1 || (positionals[0] !== "trajectory" && positionals[0] !== "ecdf")) {
    io.err(`error: expected exactly one subcommand, trajectory or ecdf\n${USAGE}`);
    return 2;
  }
  const kind = positionals[0];
  if (!values.input || !values.output) {
    io.err(`error: --input and --output are required\n${USAGE}`);
    return 2;
  }
  const xScale = parseScale(values["x-scale"], "--x-scale", io);
  if (xScale === null) return 2;
  const yScale = parseScale(values["y-scale"], "--y-scale", io);
  if (yScale === null) return 2;

  const options: RenderOptions = {
    title: values.title,
    xLabel: values["x-label"],
    yLabel: values["y-label"],
    xScale,
    yScale,
  };

  try {
    const text = readFileSync(values.input, "utf8");
    const svg =
      kind === "trajectory"
        ? renderTrajectory(readTrajectoryCsv(text), options)
        : renderEcdf(readFinalLeakageCsv(text), options);
    mkdirSync(dirname(resolve(values.output)), { recursive: true });
    writeFileSync(values.output, svg, "utf8");
    io.out(`wrote ${kind} figure: ${values.output}\n`);
    return 0;
  } catch (err) {
    if (err instanceof CsvError) {
      io.err(`error: ${values.input}: ${err.message}\n`);
      return 1;
    }
    if (err instanceof Error) {
      io.err(`error: ${err.message}\n`);
      return 1;
    }
    throw err;
  }
}

let invokedDirectly = false;
if (process.argv[1]) {
  try {
    invokedDirectly = pathToFileURL(realpathSync(process.argv[1])).href === import.meta.url;
  } catch {
    invokedDirectly = false;
  }
}
if (invokedDirectly) {
  process.exit(main(process.argv.slice(2)));
}
