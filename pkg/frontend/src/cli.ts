#!/usr/bin/env node
/**
 * plotgen <recipe-id> --in <dir> --out <dir>
 *
 * Renders stochpop CSV artifacts into an SVG figure. Exit codes:
 * 0 success, 1 missing/invalid inputs, 2 usage error.
 */

import { InputError, RECIPES, RecipeError, render } from "./render.js";

function usage(): string {
  const ids = Object.keys(RECIPES).sort().join(", ");
  return `usage: plotgen <recipe-id> --in <dir> --out <dir>\nrecipes: ${ids}`;
}

export function main(argv: string[]): number {
  const args = [...argv];
  let recipeId: string | null = null;
  let inDir = ".";
  let outDir = ".";
  while (args.length > 0) {
    const arg = args.shift()!;
    if (arg === "--in") {
      const v = args.shift();
      if (!v) {
        console.error("--in needs a value\n" + usage());
        return 2;
      }
      inDir = v;
    } else if (arg === "--out") {
      const v = args.shift();
      if (!v) {
        console.error("--out needs a value\n" + usage());
        return 2;
      }
      outDir = v;
    } else if (arg === "--help" || arg === "-h") {
      console.log(usage());
      return 0;
    } else if (arg.startsWith("-")) {
      console.error(`unknown flag ${arg}\n` + usage());
      return 2;
    } else if (recipeId === null) {
      recipeId = arg;
    } else {
      console.error(`unexpected argument ${arg}\n` + usage());
      return 2;
    }
  }
  if (recipeId === null) {
    console.error(usage());
    return 2;
  }
  try {
    console.log(render(recipeId, inDir, outDir));
    return 0;
  } catch (err) {
    if (err instanceof RecipeError) {
      console.error(`error: ${err.message}`);
      return 2;
    }
    if (err instanceof InputError) {
      console.error(`error: ${err.message}`);
      return 1;
    }
    throw err;
  }
}

if (process.argv[1] && /cli\.(ts|js)$/.test(process.argv[1])) {
  process.exit(main(process.argv.slice(2)));
}
