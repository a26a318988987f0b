#!/usr/bin/env node
/**
 * plotview <kind> --in <path> --out <file.svg>
 *
 * kinds:
 *   energy-drift   --in diagnostics.csv
 *   profiles       --in <run dir with snap_*.csv | comma list of files>
 *                  [--field <name>]
 *   convergence    --in convergence_*.csv (epsilon,residual)
 *
 * Figures are self-contained SVG files.  Exit code 0 on success; schema
 * violations name the first offending line.
 */
import { readdirSync, statSync, writeFileSync } from "fs";
import { join } from "path";

import { readDiagnostics, readPairs, readSnapshot } from "./csv.js";
import { plotConvergence, plotEnergyDrift, plotProfiles } from "./plots.js";

interface Args {
  kind: string;
  input: string;
  output: string;
  field?: string;
}

function parseArgs(argv: string[]): Args {
  const [kind, ...rest] = argv;
  if (!kind || kind.startsWith("--")) {
    throw new Error("usage: plotview <energy-drift|profiles|convergence> --in <path> --out <file.svg>");
  }
  const args: Partial<Args> = { kind };
  for (let i = 0; i < rest.length; i += 2) {
    const key = rest[i];
    const value = rest[i + 1];
    if (value === undefined) throw new Error(`missing value for ${key}`);
    if (key === "--in") args.input = value;
    else if (key === "--out") args.output = value;
    else if (key === "--field") args.field = value;
    else throw new Error(`unknown flag ${key}`);
  }
  if (!args.input || !args.output) {
    throw new Error("both --in and --out are required");
  }
  return args as Args;
}

function snapshotFiles(input: string): string[] {
  if (input.includes(",")) return input.split(",").map((s) => s.trim());
  if (statSync(input).isDirectory()) {
    const files = readdirSync(input)
      .filter((f) => /^snap_\d+\.csv$/.test(f))
      .sort()
      .map((f) => join(input, f));
    if (files.length === 0) throw new Error(`no snap_*.csv files in ${input}`);
    return files;
  }
  return [input];
}

export function runPlotview(argv: string[]): number {
  const args = parseArgs(argv);
  if (args.kind === "energy-drift") {
    const rows = readDiagnostics(args.input);
    writeFileSync(args.output, plotEnergyDrift(rows));
  } else if (args.kind === "profiles") {
    const snaps = snapshotFiles(args.input).map(readSnapshot);
    let index = 0;
    if (args.field) {
      index = snaps[0].fields.indexOf(args.field);
      if (index < 0) {
        throw new Error(`field "${args.field}" not in [${snaps[0].fields}]`);
      }
    }
    writeFileSync(args.output, plotProfiles(snaps, index));
  } else if (args.kind === "convergence") {
    const { rows } = readPairs(args.input);
    const { svg, slope } = plotConvergence(rows);
    writeFileSync(args.output, svg);
    console.log(`fitted slope: ${slope.toFixed(3)}`);
  } else {
    throw new Error(`unknown plot kind "${args.kind}"`);
  }
  console.log(`wrote ${args.output}`);
  return 0;
}

const thisFile = process.argv[1]?.replace(/\\/g, "/") ?? "";
if (thisFile.endsWith("/cli.js") || thisFile.endsWith("/plotview")) {
  try {
    process.exit(runPlotview(process.argv.slice(2)));
  } catch (err) {
    console.error(String(err instanceof Error ? err.message : err));
    process.exit(1);
  }
}
