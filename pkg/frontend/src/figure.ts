import { writeFileSync } from "node:fs";

import { readCsv } from "./csv.js";
import { renderBudget } from "./kinds/budget.js";
import { renderConvergence } from "./kinds/convergence.js";
import { renderDecay } from "./kinds/decay.js";
import { renderRadius } from "./kinds/radius.js";

export const FIGURE_KINDS = ["radius", "decay", "budget", "convergence"] as const;
export type FigureKind = (typeof FIGURE_KINDS)[number];

export interface FigureSpec {
  kind: FigureKind;
  input: string;
  output: string;
  /** time window [lo, hi]; omitted means the full span */
  window?: [number, number];
}

export function isFigureKind(value: string): value is FigureKind {
  return (FIGURE_KINDS as readonly string[]).includes(value);
}

/** Render one figure to `spec.output`; inputs are never modified. */
export function render(spec: FigureSpec): void {
  const table = readCsv(spec.input);
  let svg: string;
  switch (spec.kind) {
    case "radius":
      svg = renderRadius(table, spec.window);
      break;
    case "decay":
      svg = renderDecay(table, spec.window);
      break;
    case "budget":
      svg = renderBudget(table, spec.window);
      break;
    case "convergence":
      svg = renderConvergence(table);
      break;
  }
  writeFileSync(spec.output, svg);
}

export function windowMask(t: number[], window?: [number, number]): boolean[] {
  if (!window) return t.map(() => true);
  const [lo, hi] = window;
  if (!(lo < hi)) throw new Error(`invalid window [${lo}, ${hi}]`);
  return t.map((v) => v >= lo && v <= hi);
}

export function masked(values: number[], mask: boolean[]): number[] {
  return values.filter((_, i) => mask[i]);
}
