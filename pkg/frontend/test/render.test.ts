import { execFileSync } from "child_process";
import { existsSync, mkdirSync, mkdtempSync, readFileSync, writeFileSync } from "fs";
import { tmpdir } from "os";
import { dirname, join } from "path";
import { fileURLToPath } from "url";
import { describe, expect, it } from "vitest";
import { InputError } from "../src/csv.js";
import { RecipeError, render } from "../src/render.js";
import { main as cliMain } from "../src/cli.js";
import { ARTIFACTS } from "./global-setup.js";

function out(): string {
  return mkdtempSync(join(tmpdir(), "plotgen-"));
}

describe("rendering the acceptance recipes from primary outputs", () => {
  it("fig2b: bifurcation diagram with stability styling", () => {
    const file = render("fig2b", ARTIFACTS, out());
    const svg = readFileSync(file, "utf-8");
    expect(svg).toContain("extinction (stable)");
    expect(svg).toContain("carrying (stable)");
    expect(svg).toContain('stroke-dasharray="6 4"'); // broken for unstable runs
  });

  it("fig4: four density panels with metadata legends", () => {
    const file = render("fig4", ARTIFACTS, out());
    const svg = readFileSync(file, "utf-8");
    for (const label of ["mu=1.5", "alpha=0.5", "epsilon=0.3", "s=0.5"]) {
      expect(svg).toContain(label);
    }
    expect(svg.match(/<rect x=/g)!.length).toBe(4); // four panel frames
  });

  it("fig5: three panels of linearized solutions", () => {
    const file = render("fig5", ARTIFACTS, out());
    const svg = readFileSync(file, "utf-8");
    expect(svg).toContain("beta = 0.001");
    expect(svg).toContain("beta = 20.0");
    expect(svg).toContain("u0=0.5");
    expect(svg.match(/<polyline/g)!.length).toBe(12);
  });

  it("fig9: four logistic density panels", () => {
    const file = render("fig9", ARTIFACTS, out());
    const svg = readFileSync(file, "utf-8");
    for (const label of ["beta_sens=8.0", "alpha=1.5", "epsilon=1.0", "s=0.3"]) {
      expect(svg).toContain(label);
    }
  });

  it("also renders the sample-path and potential figures", () => {
    for (const id of ["fig3", "fig7", "fig8"]) {
      const file = render(id, ARTIFACTS, out());
      expect(existsSync(file)).toBe(true);
    }
  });
});

describe("failure modes", () => {
  it("missing input reports the absent path and writes nothing", () => {
    const empty = out();
    const target = out();
    expect(() => render("fig2b", empty, target)).toThrow(InputError);
    expect(() => render("fig2b", empty, target)).toThrow(/diagram\.csv/);
    expect(existsSync(join(target, "fig2b.svg"))).toBe(false);
  });

  it("an empty CSV aborts the render", () => {
    const dir = out();
    mkdirSync(join(dir, "fig4a"), { recursive: true });
    writeFileSync(join(dir, "fig4a", "density_mu_1.5.csv"), "# stochpop-csv v1\nx,P\n");
    const target = out();
    expect(() => render("fig4a", dir, target)).toThrow(/no data rows/);
    expect(existsSync(join(target, "fig4a.svg"))).toBe(false);
  });

  it("a CSV without a metadata header is rejected", () => {
    const dir = out();
    writeFileSync(join(dir, "diagram.csv"), "mu,branch,location,classification\n");
    expect(() => render("fig2b", dir, out())).toThrow(/metadata header/);
  });

  it("unknown recipes are reported with the available ids", () => {
    expect(() => render("fig99", ARTIFACTS, out())).toThrow(RecipeError);
    expect(() => render("fig99", ARTIFACTS, out())).toThrow(/fig2b/);
  });
});

describe("command line", () => {
  it("renders via main() and prints the output path", () => {
    const target = out();
    expect(cliMain(["fig2b", "--in", ARTIFACTS, "--out", target])).toBe(0);
    expect(existsSync(join(target, "fig2b.svg"))).toBe(true);
  });

  it("exit code 1 for missing inputs, 2 for usage errors", () => {
    expect(cliMain(["fig2b", "--in", out(), "--out", out()])).toBe(1);
    expect(cliMain([])).toBe(2);
    expect(cliMain(["fig99", "--in", ARTIFACTS, "--out", out()])).toBe(2);
    expect(cliMain(["fig2b", "--in"])).toBe(2);
  });

  it("built bundle runs under node", () => {
    // exercised only when dist/ exists (npm run build)
    const here = dirname(fileURLToPath(import.meta.url));
    const dist = join(here, "..", "dist", "cli.js");
    if (!existsSync(dist)) return;
    const target = out();
    const stdout = execFileSync(
      "node",
      [dist, "fig2b", "--in", ARTIFACTS, "--out", target],
      { encoding: "utf-8" }
    );
    expect(stdout).toContain("fig2b.svg");
  });
});
