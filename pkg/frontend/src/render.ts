import { createHash } from "node:crypto";

import { parseCsv } from "./csv.js";
import { extract } from "./figures.js";
import { renderChart } from "./svg.js";

/** Render a figure from raw CSV text; throws SchemaError on bad input. */
export function renderFigure(figureId: string, csvText: string): string {
  const table = parseCsv(csvText);
  const { spec, series } = extract(figureId, table);
  const digest = createHash("sha256").update(csvText, "utf8").digest("hex");
  return renderChart({
    title: spec.title,
    xLabel: spec.xLabel,
    yLabel: spec.yLabel,
    logX: spec.logX,
    logY: spec.logY,
    series,
    footer: `source sha256:${digest}`,
  });
}

/** Concatenate CSVs with identical headers; labelled inputs gain a leading
 * `series` column. All inputs must be labelled, or none. */
export function mergeCsv(inputs: { label: string | null; text: string }[]): string {
  if (inputs.length === 0) {
    throw new Error("merge needs at least one input");
  }
  const labelled = inputs.filter((i) => i.label !== null).length;
  if (labelled !== 0 && labelled !== inputs.length) {
    throw new Error("either label every merge input (label=path) or none");
  }
  const tables = inputs.map((i) => ({ label: i.label, table: parseCsv(i.text) }));
  const header = tables[0].table.columns.join(",");
  for (const t of tables) {
    if (t.table.columns.join(",") !== header) {
      throw new Error(
        `header mismatch: [${header}] vs [${t.table.columns.join(",")}]`,
      );
    }
  }
  const out: string[] = [labelled ? `series,${header}` : header];
  for (const { label, table } of tables) {
    for (const row of table.rows) {
      const cells = table.columns.map((c) => row[c]!);
      out.push(labelled ? [label!, ...cells].join(",") : cells.join(","));
    }
  }
  return out.join("\n") + "\n";
}
