/**
 * Glue between recipes and the SVG builder: pick a recipe, read its
 * artifacts, write one image. Rendering never mutates inputs and writes
 * nothing when any input is missing or empty.
 */

import { mkdirSync, writeFileSync } from "fs";
import { join } from "path";
import { InputError } from "./csv.js";
import { RECIPES } from "./recipes.js";
import { renderFigure } from "./svg.js";

export class RecipeError extends Error {}

export function render(recipeId: string, inDir: string, outDir: string): string {
  const recipe = RECIPES[recipeId];
  if (!recipe) {
    throw new RecipeError(
      `unknown recipe '${recipeId}'; available: ${Object.keys(RECIPES).sort().join(", ")}`
    );
  }
  const panels = recipe.build(inDir); // throws InputError before anything is written
  const svg = renderFigure(panels, { columns: recipe.columns });
  mkdirSync(outDir, { recursive: true });
  const outPath = join(outDir, `${recipeId}.svg`);
  writeFileSync(outPath, svg);
  return outPath;
}

export { InputError, RECIPES };
