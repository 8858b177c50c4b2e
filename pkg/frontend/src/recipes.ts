/**
 * Figure recipes: which CSV artifacts feed each figure and how they are
 * arranged into panels. All numbers and legend entries come from the CSV
 * files and their metadata blocks; this layer holds no model logic.
 */

import { readdirSync } from "fs";
import { join } from "path";
import { column, InputError, readCsv, stringColumn, CsvTable } from "./csv.js";
import { Curve, Panel } from "./svg.js";

export interface Recipe {
  id: string;
  description: string;
  /** assemble panels from the artifact directory */
  build(inDir: string): Panel[];
  columns?: number;
}

const BRANCH_COLORS: Record<string, string> = {
  extinction: "#111111",
  carrying: "#2ca02c",
};

function listFiles(dir: string, prefix: string): string[] {
  let names: string[];
  try {
    names = readdirSync(dir);
  } catch {
    throw new InputError(`missing input directory: ${dir}`);
  }
  const matches = names.filter((n) => n.startsWith(prefix) && n.endsWith(".csv")).sort();
  if (matches.length === 0) {
    throw new InputError(`no ${prefix}*.csv inputs in ${dir}`);
  }
  return matches.map((n) => join(dir, n));
}

function labelOf(table: CsvTable): string {
  return table.meta["label"] ?? table.path;
}

/** One curve per file, x/y column names fixed per artifact kind. */
function curvesFromFiles(paths: string[], xCol: string, yCol: string): Curve[] {
  return paths.map((p) => {
    const table = readCsv(p);
    return { x: column(table, xCol), y: column(table, yCol), label: labelOf(table) };
  });
}

function densityPanel(dir: string, title: string): Panel {
  const curves = curvesFromFiles(listFiles(dir, "density_"), "x", "P");
  return { title, xLabel: "x", yLabel: "P(x)", curves };
}

function pathPanel(dir: string, title: string): Panel {
  const table = readCsv(join(dir, "path.csv"));
  return {
    title,
    xLabel: "t",
    yLabel: "X(t)",
    curves: [{ x: column(table, "time"), y: column(table, "state"), label: labelOf(table) }],
  };
}

/** Bifurcation diagram: solid for stable runs, dashes for unstable ones. */
function diagramPanel(inDir: string): Panel {
  const table = readCsv(join(inDir, "diagram.csv"));
  const mu = column(table, "mu");
  const loc = column(table, "location");
  const branch = stringColumn(table, "branch");
  const cls = stringColumn(table, "classification");

  const curves: Curve[] = [];
  const branches = [...new Set(branch)];
  for (const b of branches) {
    const idx = branch.map((v, i) => (v === b ? i : -1)).filter((i) => i >= 0);
    // contiguous runs of one classification become one styled segment
    let start = 0;
    while (start < idx.length) {
      let stop = start + 1;
      while (stop < idx.length && cls[idx[stop]] === cls[idx[start]]) stop++;
      // include the boundary point so segments join up visually
      const seg = idx.slice(start, Math.min(stop + 1, idx.length));
      const kind = cls[idx[start]];
      curves.push({
        x: seg.map((i) => mu[i]),
        y: seg.map((i) => loc[i]),
        label: `${b} (${kind})`,
        color: BRANCH_COLORS[b] ?? undefined,
        dash: kind === "stable" ? undefined : kind === "unstable" ? "6 4" : "2 3",
      });
      start = stop;
    }
  }
  return { title: "equilibria vs mu", xLabel: "mu", yLabel: "X", curves };
}

function groupedLinearizedPanels(dir: string): Panel[] {
  const files = listFiles(dir, "solution_beta_");
  const groups = new Map<string, CsvTable[]>();
  for (const p of files) {
    const table = readCsv(p);
    const beta = table.meta["beta"] ?? "?";
    if (!groups.has(beta)) groups.set(beta, []);
    groups.get(beta)!.push(table);
  }
  const betas = [...groups.keys()].sort((a, b) => Number(a) - Number(b));
  return betas.map((beta) => ({
    title: `beta = ${beta}`,
    xLabel: "t",
    yLabel: "u(t)",
    curves: groups.get(beta)!.map((t) => ({
      x: column(t, "t"),
      y: column(t, "u"),
      label: labelOf(t),
    })),
  }));
}

function multiPanelDensities(inDir: string, ids: string[]): Panel[] {
  return ids.map((id) => {
    const dir = join(inDir, id);
    const files = listFiles(dir, "density_");
    const first = readCsv(files[0]);
    const swept = first.meta["swept_parameter"] ?? "parameter";
    return densityPanel(dir, `${id}: vs ${swept}`);
  });
}

export const RECIPES: Record<string, Recipe> = {
  fig2b: {
    id: "fig2b",
    description: "transcritical bifurcation diagram (solid stable, broken unstable)",
    build: (inDir) => [diagramPanel(inDir)],
  },
  fig3: {
    id: "fig3",
    description: "growth-model sample path",
    build: (inDir) => [pathPanel(join(inDir, "fig3"), "growth sample path")],
  },
  fig4: {
    id: "fig4",
    description: "growth stationary-density families (four panels)",
    build: (inDir) => multiPanelDensities(inDir, ["fig4a", "fig4b", "fig4c", "fig4d"]),
    columns: 2,
  },
  fig5: {
    id: "fig5",
    description: "linearized perturbation solutions for three beta regimes",
    build: (inDir) => groupedLinearizedPanels(join(inDir, "fig5")),
    columns: 3,
  },
  fig7: {
    id: "fig7",
    description: "logistic phase lines and potentials",
    build: (inDir) => {
      const dir = join(inDir, "fig7");
      return [
        {
          title: "phase lines",
          xLabel: "x",
          yLabel: "dX/dt",
          curves: curvesFromFiles(listFiles(dir, "phaseline_beta_"), "x", "drift"),
        },
        {
          title: "potentials",
          xLabel: "x",
          yLabel: "U(x)",
          curves: curvesFromFiles(listFiles(dir, "potential_beta_"), "x", "U"),
        },
      ];
    },
  },
  fig8: {
    id: "fig8",
    description: "logistic sample path",
    build: (inDir) => [pathPanel(join(inDir, "fig8"), "logistic sample path")],
  },
  fig9: {
    id: "fig9",
    description: "logistic stationary-density families (four panels)",
    build: (inDir) => multiPanelDensities(inDir, ["fig9a", "fig9b", "fig9c", "fig9d"]),
    columns: 2,
  },
};

// single-panel variants for each density family
for (const id of ["fig4a", "fig4b", "fig4c", "fig4d", "fig9a", "fig9b", "fig9c", "fig9d"]) {
  RECIPES[id] = {
    id,
    description: `stationary-density family ${id}`,
    build: (inDir) => multiPanelDensities(inDir, [id]),
  };
}
