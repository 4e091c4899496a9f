#!/usr/bin/env node
import { MissingColumnError } from "./csv.js";
import { FIGURE_KINDS, isFigureKind, render, type FigureSpec } from "./figure.js";

const USAGE = `usage: bubbleflow-figures --kind <${FIGURE_KINDS.join("|")}> --input <csv> --output <svg> [--window lo,hi]

Renders one figure from bubbleflow run artifacts:
  radius       R(t) with the rest radius marked          (timeseries.csv)
  decay        log-log Q(t) with a (1+t)^-1 guide line   (timeseries.csv)
  budget       E0, cumulative dissipation and their sum  (timeseries.csv)
  convergence  refinement or truncation study            (convergence.csv)`;

export function parseArgs(argv: string[]): FigureSpec {
  const opts = new Map<string, string>();
  for (let i = 0; i < argv.length; i++) {
    const arg = argv[i];
    if (!arg.startsWith("--")) throw new Error(`unexpected argument ${arg}`);
    const eq = arg.indexOf("=");
    if (eq >= 0) {
      opts.set(arg.slice(2, eq), arg.slice(eq + 1));
    } else {
      const value = argv[++i];
      if (value === undefined) throw new Error(`missing value for ${arg}`);
      opts.set(arg.slice(2), value);
    }
  }
  const kind = opts.get("kind");
  const input = opts.get("input");
  const output = opts.get("output");
  if (!kind || !input || !output) throw new Error("need --kind, --input and --output");
  if (!isFigureKind(kind)) {
    throw new Error(`unknown figure kind "${kind}" (expected ${FIGURE_KINDS.join(", ")})`);
  }
  const spec: FigureSpec = { kind, input, output };
  const windowArg = opts.get("window");
  if (windowArg !== undefined) {
    const parts = windowArg.split(",").map(Number);
    if (parts.length !== 2 || parts.some((v) => !Number.isFinite(v))) {
      throw new Error(`--window expects "lo,hi", got "${windowArg}"`);
    }
    spec.window = [parts[0], parts[1]];
  }
  return spec;
}

export function main(argv: string[]): number {
  if (argv.includes("--help") || argv.length === 0) {
    console.log(USAGE);
    return argv.length === 0 ? 2 : 0;
  }
  try {
    const spec = parseArgs(argv);
    render(spec);
    console.log(`wrote ${spec.output}`);
    return 0;
  } catch (err) {
    if (err instanceof MissingColumnError) {
      console.error(`error: ${err.message}`);
      return 3;
    }
    console.error(`error: ${err instanceof Error ? err.message : err}`);
    return 2;
  }
}

if (process.argv[1] && process.argv[1].endsWith("cli.js")) {
  process.exit(main(process.argv.slice(2)));
}
