/**
 * Readers for the simulator's CSV contracts.
 *
 * Three schemas exist:
 *   diagnostics.csv  step,time,energy,kinetic,potential,mass,momentum,
 *                    phi2_residual,fp_iters   (empty cells = not tracked)
 *   snap_*.csv       x,<field names...>
 *   convergence_*.csv / air_water.csv   two numeric columns
 *
 * Parsers validate the header and every row; the first offending line is
 * reported as "<file>:<line>: <reason>".
 */
import { readFileSync } from "fs";

export const DIAG_HEADER =
  "step,time,energy,kinetic,potential,mass,momentum,phi2_residual,fp_iters";

export interface DiagnosticsRow {
  step: number;
  time: number;
  energy: number;
  kinetic: number;
  potential: number;
  mass: number | null;
  momentum: number | null;
  phi2Residual: number | null;
  fpIters: number | null;
}

export interface Snapshot {
  /** file label, e.g. "snap_00002000" */
  label: string;
  fields: string[];
  x: number[];
  /** column-major nodal values, one array per field */
  values: number[][];
}

export class SchemaError extends Error {
  constructor(file: string, line: number, reason: string) {
    super(`${file}:${line}: ${reason}`);
    this.name = "SchemaError";
  }
}

function lines(file: string): string[] {
  const text = readFileSync(file, "utf-8");
  const rows = text.split(/\r?\n/);
  while (rows.length > 0 && rows[rows.length - 1] === "") rows.pop();
  return rows;
}

function requireNumber(file: string, line: number, name: string, raw: string): number {
  const value = Number(raw);
  if (raw.trim() === "" || !Number.isFinite(value)) {
    throw new SchemaError(file, line, `expected finite number for ${name}, got "${raw}"`);
  }
  return value;
}

function optionalNumber(file: string, line: number, name: string, raw: string): number | null {
  if (raw.trim() === "") return null;
  return requireNumber(file, line, name, raw);
}

export function readDiagnostics(file: string): DiagnosticsRow[] {
  const rows = lines(file);
  if (rows.length === 0) throw new SchemaError(file, 1, "empty file");
  if (rows[0] !== DIAG_HEADER) {
    throw new SchemaError(file, 1, `expected header "${DIAG_HEADER}", got "${rows[0]}"`);
  }
  const out: DiagnosticsRow[] = [];
  for (let i = 1; i < rows.length; i++) {
    const parts = rows[i].split(",");
    if (parts.length !== 9) {
      throw new SchemaError(file, i + 1, `expected 9 fields, got ${parts.length}`);
    }
    out.push({
      step: requireNumber(file, i + 1, "step", parts[0]),
      time: requireNumber(file, i + 1, "time", parts[1]),
      energy: requireNumber(file, i + 1, "energy", parts[2]),
      kinetic: requireNumber(file, i + 1, "kinetic", parts[3]),
      potential: requireNumber(file, i + 1, "potential", parts[4]),
      mass: optionalNumber(file, i + 1, "mass", parts[5]),
      momentum: optionalNumber(file, i + 1, "momentum", parts[6]),
      phi2Residual: optionalNumber(file, i + 1, "phi2_residual", parts[7]),
      fpIters: optionalNumber(file, i + 1, "fp_iters", parts[8]),
    });
  }
  if (out.length === 0) throw new SchemaError(file, 2, "no data rows");
  return out;
}

export function readSnapshot(file: string): Snapshot {
  const rows = lines(file);
  if (rows.length === 0) throw new SchemaError(file, 1, "empty file");
  const header = rows[0].split(",");
  if (header[0] !== "x" || header.length < 2) {
    throw new SchemaError(file, 1, `expected header "x,<field names...>", got "${rows[0]}"`);
  }
  const fields = header.slice(1);
  const x: number[] = [];
  const values: number[][] = fields.map(() => []);
  for (let i = 1; i < rows.length; i++) {
    const parts = rows[i].split(",");
    if (parts.length !== header.length) {
      throw new SchemaError(file, i + 1, `expected ${header.length} fields, got ${parts.length}`);
    }
    x.push(requireNumber(file, i + 1, "x", parts[0]));
    for (let c = 0; c < fields.length; c++) {
      values[c].push(requireNumber(file, i + 1, fields[c], parts[c + 1]));
    }
  }
  if (x.length === 0) throw new SchemaError(file, 2, "no data rows");
  const stem = file.replace(/\\/g, "/").split("/").pop() ?? file;
  return { label: stem.replace(/\.csv$/, ""), fields, x, values };
}

/** Two-column numeric series (convergence or limit-sweep files). */
export function readPairs(file: string): { header: [string, string]; rows: [number, number][] } {
  const rows = lines(file);
  if (rows.length === 0) throw new SchemaError(file, 1, "empty file");
  const header = rows[0].split(",");
  if (header.length !== 2) {
    throw new SchemaError(file, 1, `expected two columns, got "${rows[0]}"`);
  }
  const out: [number, number][] = [];
  for (let i = 1; i < rows.length; i++) {
    const parts = rows[i].split(",");
    if (parts.length !== 2) {
      throw new SchemaError(file, i + 1, `expected 2 fields, got ${parts.length}`);
    }
    out.push([
      requireNumber(file, i + 1, header[0], parts[0]),
      requireNumber(file, i + 1, header[1], parts[1]),
    ]);
  }
  if (out.length < 2) throw new SchemaError(file, 2, "need at least two data rows");
  return { header: [header[0], header[1]], rows: out };
}
