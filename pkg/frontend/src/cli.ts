import { readFileSync, writeFileSync } from "node:fs";

import { mergeCsv, renderFigure } from "./render.js";

const USAGE = `usage:
  render <figureId> <input.csv> <output.svg>
  merge <output.csv> [label=]input.csv [[label=]input.csv ...]`;

export function main(argv: string[]): number {
  const [command, ...rest] = argv;
  try {
    if (command === "render") {
      if (rest.length !== 3) throw new Error(USAGE);
      const [figureId, csvPath, outPath] = rest;
      const svg = renderFigure(figureId, readFileSync(csvPath, "utf8"));
      writeFileSync(outPath, svg);  // only reached when rendering succeeded
      return 0;
    }
    if (command === "merge") {
      if (rest.length < 2) throw new Error(USAGE);
      const [outPath, ...specs] = rest;
      const inputs = specs.map((spec) => {
        const eq = spec.indexOf("=");
        const label = eq > 0 ? spec.slice(0, eq) : null;
        const path = eq > 0 ? spec.slice(eq + 1) : spec;
        return { label, text: readFileSync(path, "utf8") };
      });
      writeFileSync(outPath, mergeCsv(inputs));
      return 0;
    }
    throw new Error(USAGE);
  } catch (err) {
    console.error(`error: ${err instanceof Error ? err.message : String(err)}`);
    return 1;
  }
}

if (import.meta.url === `file://${process.argv[1]}`) {
  process.exit(main(process.argv.slice(2)));
}
