#!/usr/bin/env node
/**
 * bpqm-plots render <figure-id> --in <csv> --out <svg>
 *
 * Renders an experiment CSV to a deterministic SVG. Nothing is written when
 * the input fails schema validation.
 */

import { readFileSync, writeFileSync } from "node:fs";
import { pathToFileURL } from "node:url";
import { SCHEMAS, SchemaError } from "./csv.js";
import { renderCsv } from "./render.js";

function usage(): string {
  return [
    "usage: bpqm-plots render <figure-id> --in <csv> --out <svg>",
    `  figure ids: ${Object.keys(SCHEMAS).join(", ")}`,
  ].join("\n");
}

export function main(argv: string[]): number {
  if (argv.length === 0 || argv[0] === "--help" || argv[0] === "-h") {
    console.log(usage());
    return argv.length === 0 ? 2 : 0;
  }
  if (argv[0] !== "render") {
    console.error(`unknown command '${argv[0]}'\n${usage()}`);
    return 2;
  }
  const figureId = argv[1];
  let input: string | undefined;
  let output: string | undefined;
  for (let i = 2; i < argv.length; i += 2) {
    const flag = argv[i];
    const value = argv[i + 1];
    if (value === undefined) {
      console.error(`missing value for ${flag}\n${usage()}`);
      return 2;
    }
    if (flag === "--in") input = value;
    else if (flag === "--out") output = value;
    else {
      console.error(`unknown flag '${flag}'\n${usage()}`);
      return 2;
    }
  }
  if (!figureId || !input || !output) {
    console.error(usage());
    return 2;
  }
  let csvText: string;
  try {
    csvText = readFileSync(input, "utf-8");
  } catch (err) {
    console.error(`cannot read ${input}: ${(err as Error).message}`);
    return 1;
  }
  try {
    const svg = renderCsv(figureId, csvText);
    writeFileSync(output, svg);
  } catch (err) {
    if (err instanceof SchemaError) {
      console.error(`refusing ${input}: ${err.message}`);
      return 1;
    }
    throw err;
  }
  console.error(`wrote ${output}`);
  return 0;
}

if (process.argv[1] && import.meta.url === pathToFileURL(process.argv[1]).href) {
  process.exit(main(process.argv.slice(2)));
}
