/**
 * Strict readers for the two harness CSV formats.
 *
 * Both readers validate the header row and every field, and report failures
 * with the 1-based line number of the offending input line so a bad file can
 * be fixed by hand. Rows keep their line number so downstream rendering
 * checks (for example, positivity on a log axis) can point back at the file.
 */

import Papa from "papaparse";

export class CsvError extends Error {
  /** 1-based line number in the input file; the header is line 1. */
  readonly line: number;

  constructor(line: number, message: string) {
    super(`line ${line}: ${message}`);
    this.name = "CsvError";
    this.line = line;
  }
}

/** One row of a trajectory CSV (run-single output). */
export interface TrajectoryRow {
  line: number;
  realizationId: number;
  algorithm: string;
  iteration: number;
  totalLeakage: number;
}

/** One row of a final-leakage CSV (run-montecarlo output). */
export interface FinalLeakageRow {
  line: number;
  realizationId: number;
  algorithm: string;
  finalLeakage: number;
  iterationsRun: number;
  converged: boolean;
}

export const TRAJECTORY_COLUMNS = [
  "realization_id",
  "algorithm",
  "iteration",
  "total_leakage",
] as const;

export const FINAL_LEAKAGE_COLUMNS = [
  "realization_id",
  "algorithm",
  "final_leakage",
  "iterations_run",
  "converged",
] as const;

/** Tokenize CSV text into rows of raw string fields, preserving line order. */
function tokenize(text: string): string[][] {
  const parsed = Papa.parse<string[]>(text, { delimiter: "," });
  if (parsed.errors.length > 0) {
    const first = parsed.errors[0];
    const line = typeof first.row === "number" ? first.row + 1 : 1;
    throw new CsvError(line, first.message);
  }
  const rows = parsed.data;
  // A trailing newline yields one final empty record; drop that one only.
  if (rows.length > 0) {
    const last = rows[rows.length - 1];
    if (last.length === 1 && last[0] === "") rows.pop();
  }
  return rows;
}

function checkHeader(rows: string[][], expected: readonly string[]): void {
  if (rows.length === 0) {
    throw new CsvError(1, `empty file, expected header "${expected.join(",")}"`);
  }
  const header = rows[0];
  const matches =
    header.length === expected.length && expected.every((name, k) => header[k] === name);
  if (!matches) {
    throw new CsvError(
      1,
      `expected header "${expected.join(",")}", got "${header.join(",")}"`,
    );
  }
  if (rows.length === 1) {
    throw new CsvError(2, "no data rows after the header");
  }
}

function checkWidth(row: string[], line: number, expected: number): void {
  if (row.length === 1 && row[0].trim() === "") {
    throw new CsvError(line, "blank line");
  }
  if (row.length !== expected) {
    throw new CsvError(line, `expected ${expected} fields, got ${row.length}`);
  }
}

function parseNumber(raw: string, line: number, column: string): number {
  if (raw.trim() === "") {
    throw new CsvError(line, `empty value in column "${column}"`);
  }
  const value = Number(raw);
  if (!Number.isFinite(value)) {
    throw new CsvError(line, `column "${column}": "${raw}" is not a finite number`);
  }
  return value;
}

function parseCount(raw: string, line: number, column: string): number {
  const value = parseNumber(raw, line, column);
  if (!Number.isInteger(value) || value < 0) {
    throw new CsvError(
      line,
      `column "${column}": "${raw}" is not a nonnegative integer`,
    );
  }
  return value;
}

function parseName(raw: string, line: number, column: string): string {
  if (raw.trim() === "") {
    throw new CsvError(line, `empty value in column "${column}"`);
  }
  return raw;
}

function parseFlag(raw: string, line: number, column: string): boolean {
  if (raw === "true") return true;
  if (raw === "false") return false;
  throw new CsvError(line, `column "${column}": "${raw}" is not "true" or "false"`);
}

/** Parse run-single trajectory output. Throws CsvError on any malformed content. */
export function readTrajectoryCsv(text: string): TrajectoryRow[] {
  const rows = tokenize(text);
  checkHeader(rows, TRAJECTORY_COLUMNS);
  const out: TrajectoryRow[] = [];
  for (let k = 1; k < rows.length; k++) {
    const line = k + 1;
    const row = rows[k];
    checkWidth(row, line, TRAJECTORY_COLUMNS.length);
    out.push({
      line,
      realizationId: parseCount(row[0], line, "realization_id"),
      algorithm: parseName(row[1], line, "algorithm"),
      iteration: parseCount(row[2], line, "iteration"),
      totalLeakage: parseNumber(row[3], line, "total_leakage"),
    });
  }
  return out;
}

/** Parse run-montecarlo final-leakage output. Throws CsvError on any malformed content. */
export function readFinalLeakageCsv(text: string): FinalLeakageRow[] {
  const rows = tokenize(text);
  checkHeader(rows, FINAL_LEAKAGE_COLUMNS);
  const out: FinalLeakageRow[] = [];
  for (let k = 1; k < rows.length; k++) {
    const line = k + 1;
    const row = rows[k];
    checkWidth(row, line, FINAL_LEAKAGE_COLUMNS.length);
    out.push({
      line,
      realizationId: parseCount(row[0], line, "realization_id"),
      algorithm: parseName(row[1], line, "algorithm"),
      finalLeakage: parseNumber(row[2], line, "final_leakage"),
      iterationsRun: parseCount(row[3], line, "iterations_run"),
      converged: parseFlag(row[4], line, "converged"),
    });
  }
  return out;
}

/** Distinct algorithm names in order of first appearance. */
export function algorithmOrder(rows: { algorithm: string }[]): string[] {
  const seen: string[] = [];
  for (const row of rows) {
    if (!seen.includes(row.algorithm)) seen.push(row.algorithm);
  }
  return seen;
}
