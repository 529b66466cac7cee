#!/usr/bin/env node
/**
 * plot --kind <sweep|series-sigma|series-entropy|series-ipr|histogram>
 *      --in <csv...> --out <file.svg> [--logx]
 *
 * Renders one figure from simulator CSVs.  Exits 2 on schema violations
 * or unreadable input; no output file is produced in that case.
 */

import { writeFileSync } from "node:fs";
import { pathToFileURL } from "node:url";
import { FIGURE_KINDS, FigureKind, FigureSpec, renderFigure } from "./figures.js";

export function parseArgs(argv: string[]): FigureSpec {
  let kind: string | undefined;
  let output: string | undefined;
  const inputs: string[] = [];
  let logX = false;
  for (let i = 0; i < argv.length; i++) {
    const arg = argv[i];
    if (arg === "--kind") {
      kind = argv[++i];
    } else if (arg === "--in") {
      while (i + 1 < argv.length && !argv[i + 1].startsWith("--")) {
        inputs.push(argv[++i]);
      }
    } else if (arg === "--out") {
      output = argv[++i];
    } else if (arg === "--logx") {
      logX = true;
    } else {
      throw new Error(`unknown argument "${arg}"`);
    }
  }
  if (!kind || !FIGURE_KINDS.includes(kind as FigureKind)) {
    throw new Error(`--kind must be one of ${FIGURE_KINDS.join(", ")}`);
  }
  if (inputs.length === 0) throw new Error("--in requires at least one CSV path");
  if (!output) throw new Error("--out is required");
  return { kind: kind as FigureKind, inputs, output, logX };
}

export function main(argv: string[]): number {
  let spec: FigureSpec;
  try {
    spec = parseArgs(argv);
  } catch (err) {
    process.stderr.write(`plot: ${(err as Error).message}\n`);
    return 2;
  }
  try {
    const svg = renderFigure(spec);
    writeFileSync(spec.output, svg);
  } catch (err) {
    process.stderr.write(`plot: ${(err as Error).message}\n`);
    return 2;
  }
  process.stdout.write(`${spec.output}\n`);
  return 0;
}

if (
  process.argv[1] !== undefined &&
  import.meta.url === pathToFileURL(process.argv[1]).href
) {
  process.exit(main(process.argv.slice(2)));
}
