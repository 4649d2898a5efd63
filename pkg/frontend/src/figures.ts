/** Figure catalogue: which CSV columns each figure needs and how its series
 * are extracted. */

import { SchemaError, Table, numeric, requireColumns } from "./csv.js";
import { Series } from "./svg.js";

export interface FigureSpec {
  title: string;
  xLabel: string;
  yLabel: string;
  logX: boolean;
  logY: boolean;
  required: string[];
  build(table: Table): Series[];
}

function columnSeries(
  table: Table,
  x: string,
  columns: [string, string][],
): Series[] {
  return columns.map(([column, label]) => ({
    label,
    points: table.rows
      .map((row) => [numeric(row, x), numeric(row, column)] as [number, number])
      .sort((a, b) => a[0] - b[0]),
  }));
}

/** One series per distinct value of a grouping column. */
function groupedSeries(
  table: Table,
  group: string,
  x: string,
  y: string,
  logX: boolean,
): Series[] {
  const order: string[] = [];
  const buckets = new Map<string, [number, number][]>();
  for (const row of table.rows) {
    const key = row[group]!;
    if (!buckets.has(key)) {
      buckets.set(key, []);
      order.push(key);
    }
    const xv = numeric(row, x);
    if (logX && xv <= 0) continue; // curves start at t = 0
    buckets.get(key)!.push([xv, numeric(row, y)]);
  }
  return order.map((key) => ({ label: key, points: buckets.get(key)! }));
}

const CLEARANCE_COLUMNS: [string, string][] = [
  ["clr_optimal", "optimal"],
  ["clr_mixed_aggressive", "mixed aggressive"],
  ["clr_scaled_geometric", "scaled geometric"],
];

function curveFigure(title: string): FigureSpec {
  return {
    title,
    xLabel: "time budget",
    yLabel: "clearance",
    logX: true,
    logY: false,
    required: ["series", "time", "clearance"],
    build: (t) => groupedSeries(t, "series", "time", "clearance", true),
  };
}

export const FIGURES: Record<string, FigureSpec> = {
  fig1: {
    title: "Clearance ratio of the optimal strategy (4 rays)",
    xLabel: "time budget",
    yLabel: "clearance ratio",
    logX: true,
    logY: false,
    required: ["T", "ratio_opt_over_geo", "ratio_opt_over_scaled_aggressive"],
    build: (t) =>
      columnSeries(t, "T", [
        ["ratio_opt_over_geo", "optimal / scaled geometric"],
        ["ratio_opt_over_scaled_aggressive", "optimal / scaled aggressive"],
      ]),
  },
  fig2: {
    title: "Clearance by ray count (budget 1e8)",
    xLabel: "rays",
    yLabel: "clearance",
    logX: false,
    logY: true,
    required: ["m", ...CLEARANCE_COLUMNS.map(([c]) => c)],
    build: (t) => columnSeries(t, "m", CLEARANCE_COLUMNS),
  },
  fig3: {
    title: "Clearance by competitive ratio (4 rays, budget 1e4)",
    xLabel: "half-excess ratio",
    yLabel: "clearance",
    logX: false,
    logY: false,
    required: ["rho", ...CLEARANCE_COLUMNS.map(([c]) => c)],
    build: (t) => columnSeries(t, "rho", CLEARANCE_COLUMNS),
  },
  fig4: curveFigure("Clearance over time, network A"),
  fig5: curveFigure("Clearance over time, network B"),
  fig6: curveFigure("Clearance over time, network C"),
  fig7: {
    title: "Competitive ratio per root, sorted by the rural-tour ratio",
    xLabel: "root (sorted)",
    yLabel: "competitive ratio",
    logX: false,
    logY: false,
    required: ["mode", "run", "competitive_ratio"],
    build: (table) => {
      const byMode = new Map<string, Map<number, number>>();
      const order: string[] = [];
      for (const row of table.rows) {
        const mode = row["mode"]!;
        if (!byMode.has(mode)) {
          byMode.set(mode, new Map());
          order.push(mode);
        }
        byMode.get(mode)!.set(numeric(row, "run"), numeric(row, "competitive_ratio"));
      }
      const reference = byMode.get("rpt") ?? byMode.get(order[0]!)!;
      const runs = [...reference.keys()].sort(
        (a, b) => reference.get(a)! - reference.get(b)! || a - b,
      );
      return order.map((mode) => ({
        label: mode,
        points: runs
          .filter((run) => byMode.get(mode)!.has(run))
          .map((run, rank) => [rank + 1, byMode.get(mode)!.get(run)!] as [number, number]),
      }));
    },
  },
  fig8: {
    title: "Competitive ratio by radius base",
    xLabel: "radius base",
    yLabel: "competitive ratio",
    logX: false,
    logY: false,
    required: ["mode", "r", "competitive_ratio"],
    build: (t) => {
      const series = groupedSeries(t, "mode", "r", "competitive_ratio", false);
      for (const s of series) {
        s.points.sort((a, b) => a[0] - b[0]);
      }
      return series;
    },
  },
};

export function figureSpec(id: string): FigureSpec {
  const spec = FIGURES[id];
  if (!spec) {
    throw new SchemaError(
      `unknown figure id ${id}; known: ${Object.keys(FIGURES).join(", ")}`,
    );
  }
  return spec;
}

export function extract(id: string, table: Table): { spec: FigureSpec; series: Series[] } {
  const spec = figureSpec(id);
  requireColumns(table, spec.required);
  const series = spec.build(table);
  if (series.every((s) => s.points.length === 0)) {
    throw new SchemaError("no plottable rows after filtering");
  }
  return { spec, series };
}
