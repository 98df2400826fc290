/**
 * CSV loading and schema checks for the simulator's output files.
 *
 * Two shapes are understood: aggregate sweep rows (one per scheme ×
 * cache-size point, with mean/stderr columns) and the bar-chart format
 * `label,file,p` for caching-distribution vectors.
 */

import { readFileSync } from "fs";
import Papa from "papaparse";

export class SchemaError extends Error {}

export interface SweepRow {
  scheme: string;
  M: number;
  meanRate: number;
  stderrRate: number;
}

export interface PstarRow {
  label: string;
  file: number;
  p: number;
}

const SWEEP_REQUIRED = ["scheme", "M", "mean_rate", "stderr_rate"];
const PSTAR_REQUIRED = ["label", "file", "p"];

function parseCsv(path: string): Papa.ParseResult<Record<string, string>> {
  const text = readFileSync(path, "utf8");
  const result = Papa.parse<Record<string, string>>(text.trim(), {
    header: true,
    skipEmptyLines: true,
  });
  if (result.errors.length > 0) {
    const e = result.errors[0];
    throw new SchemaError(`${path}: ${e.message} (row ${e.row})`);
  }
  return result;
}

function requireColumns(path: string, fields: string[] | undefined, needed: string[]) {
  const have = new Set(fields ?? []);
  const missing = needed.filter((c) => !have.has(c));
  if (missing.length > 0) {
    throw new SchemaError(`${path}: missing column(s) ${missing.join(", ")}`);
  }
}

function num(path: string, row: number, column: string, raw: string): number {
  const v = Number(raw);
  if (raw === "" || !Number.isFinite(v)) {
    throw new SchemaError(`${path}: row ${row}: bad ${column} value ${JSON.stringify(raw)}`);
  }
  return v;
}

export function loadSweep(path: string): SweepRow[] {
  const result = parseCsv(path);
  requireColumns(path, result.meta.fields, SWEEP_REQUIRED);
  if (result.data.length === 0) {
    throw new SchemaError(`${path}: no data rows`);
  }
  return result.data.map((row, i) => ({
    scheme: row.scheme,
    M: num(path, i + 2, "M", row.M),
    meanRate: num(path, i + 2, "mean_rate", row.mean_rate),
    stderrRate: row.stderr_rate === "" ? 0 : num(path, i + 2, "stderr_rate", row.stderr_rate),
  }));
}

export function loadPstar(path: string): PstarRow[] {
  const result = parseCsv(path);
  requireColumns(path, result.meta.fields, PSTAR_REQUIRED);
  if (result.data.length === 0) {
    throw new SchemaError(`${path}: no data rows`);
  }
  return result.data.map((row, i) => ({
    label: row.label,
    file: num(path, i + 2, "file", row.file),
    p: num(path, i + 2, "p", row.p),
  }));
}

/** Group rows by a key, preserving first-seen order. */
export function groupBy<T>(rows: T[], key: (row: T) => string): Map<string, T[]> {
  const out = new Map<string, T[]>();
  for (const row of rows) {
    const k = key(row);
    const bucket = out.get(k);
    if (bucket) bucket.push(row);
    else out.set(k, [row]);
  }
  return out;
}
