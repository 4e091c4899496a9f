import { execFileSync } from "node:child_process";
import { existsSync, mkdtempSync, readFileSync, statSync, writeFileSync } from "node:fs";
import { tmpdir } from "node:os";
import { join } from "node:path";
import { describe, expect, it } from "vitest";

import { MissingColumnError, readCsv, requireColumn } from "../src/csv.js";
import { render, type FigureSpec } from "../src/figure.js";
import { main, parseArgs } from "../src/cli.js";

const TIMESERIES_HEADER =
  "t,R,dR_dt,E0,D,cumD,E1,E2_varA,E2_varB,E3,Q,Hint,P,rho_min,rho_max,energy_residual,boundary_density";

function tmp(): string {
  return mkdtempSync(join(tmpdir(), "bubfig-"));
}

function writeTimeseries(dir: string, rows: number, qOfT: (t: number) => number): string {
  const lines = [TIMESERIES_HEADER];
  for (let i = 0; i < rows; i++) {
    const t = i * 0.5;
    const R = 1.0 + 0.05 * Math.exp(-0.3 * t) * Math.cos(1.6 * t);
    const q = qOfT(t);
    const e0 = 3.4e-3 * Math.exp(-0.5 * t);
    const cum = 3.4e-3 - e0;
    lines.push(
      [t, R, -0.01 * Math.exp(-0.3 * t), e0, 1e-3 * Math.exp(-0.5 * t), cum,
       e0 * 1.1, 1e-4, 1.2e-4, 1.1e-4, q, 1e-5, 2e-5, 0.99, 1.01, 1e-8, 1.0].join(","),
    );
  }
  const path = join(dir, "timeseries.csv");
  writeFileSync(path, lines.join("\n") + "\n");
  return path;
}

function writeRefinementTable(dir: string): string {
  const lines = ["n,dx,err_u,err_rho,err_R,order_u,order_rho,order_R"];
  lines.push("64,0.125,8.0e-4,1.0e-3,4.7e-5,2.2,2.2,2.0");
  lines.push("128,0.0625,1.7e-4,2.2e-4,1.2e-5,2.3,2.3,2.2");
  lines.push("256,0.03125,3.3e-5,4.3e-5,2.5e-6,,,");
  const path = join(dir, "convergence.csv");
  writeFileSync(path, lines.join("\n") + "\n");
  return path;
}

function writeTruncationTable(dir: string): string {
  const lines = ["k_lo,k_hi,du_L2,dvinv_L2,dR_sup,pre_return_du_L2,t_return"];
  lines.push("20,40,5.5e-3,5.3e-3,1.2e-4,5e-13,2.39");
  lines.push("40,80,1.1e-11,9.9e-12,4.1e-13,0,4.10");
  const path = join(dir, "convergence.csv");
  writeFileSync(path, lines.join("\n") + "\n");
  return path;
}

function assertSvg(path: string): string {
  expect(existsSync(path)).toBe(true);
  expect(statSync(path).size).toBeGreaterThan(500);
  const text = readFileSync(path, "utf8");
  expect(text.startsWith("<svg")).toBe(true);
  expect(text).toContain("</svg>");
  return text;
}

describe("figure rendering", () => {
  it("renders a radius figure", () => {
    const dir = tmp();
    const input = writeTimeseries(dir, 101, (t) => 2.5e-3 / (1 + t));
    const output = join(dir, "radius.svg");
    render({ kind: "radius", input, output });
    const text = assertSvg(output);
    expect(text).toContain("Bubble radius");
    expect(text).toContain("rest radius");
  });

  it("renders a decay figure with the (1+t)^-1 guide", () => {
    const dir = tmp();
    const input = writeTimeseries(dir, 101, (t) => 2.5e-3 / (1 + t) ** 1.3);
    const output = join(dir, "decay.svg");
    render({ kind: "decay", input, output, window: [0, 50] });
    const text = assertSvg(output);
    expect(text).toContain('class="guide"');
    expect(text).toContain("C (1+t)^-1 guide");
  });

  it("annotates an equilibrium decay figure", () => {
    const dir = tmp();
    const input = writeTimeseries(dir, 21, () => 0.0);
    const output = join(dir, "decay-eq.svg");
    render({ kind: "decay", input, output });
    const text = assertSvg(output);
    expect(text).toContain("equilibrium trajectory");
  });

  it("renders a budget figure with the initial-energy horizontal", () => {
    const dir = tmp();
    const input = writeTimeseries(dir, 101, (t) => 2.5e-3 / (1 + t));
    const output = join(dir, "budget.svg");
    render({ kind: "budget", input, output });
    const text = assertSvg(output);
    expect(text).toContain("E0(0)");
    expect(text).toContain("cumulative dissipation");
  });

  it("renders both convergence table flavors", () => {
    const dir = tmp();
    const refinement = writeRefinementTable(dir);
    render({ kind: "convergence", input: refinement, output: join(dir, "ref.svg") });
    expect(assertSvg(join(dir, "ref.svg"))).toContain("order 2 reference");
    const dir2 = tmp();
    const truncation = writeTruncationTable(dir2);
    render({ kind: "convergence", input: truncation, output: join(dir2, "trunc.svg") });
    expect(assertSvg(join(dir2, "trunc.svg"))).toContain("Domain-truncation");
  });

  it("is deterministic and leaves the input untouched", () => {
    const dir = tmp();
    const input = writeTimeseries(dir, 51, (t) => 1e-3 / (1 + t));
    const before = readFileSync(input, "utf8");
    const out1 = join(dir, "a.svg");
    const out2 = join(dir, "b.svg");
    render({ kind: "decay", input, output: out1 });
    render({ kind: "decay", input, output: out2 });
    expect(readFileSync(out1, "utf8")).toBe(readFileSync(out2, "utf8"));
    expect(readFileSync(input, "utf8")).toBe(before);
  });

  it("names the missing column", () => {
    const dir = tmp();
    const path = join(dir, "noq.csv");
    writeFileSync(path, "t,R\n0,1\n1,1.01\n");
    const spec: FigureSpec = { kind: "decay", input: path, output: join(dir, "x.svg") };
    expect(() => render(spec)).toThrowError(/"Q"/);
    try {
      render(spec);
    } catch (err) {
      expect(err).toBeInstanceOf(MissingColumnError);
      expect((err as MissingColumnError).column).toBe("Q");
    }
  });
});

describe("reference-run artifacts", () => {
  // real outputs of the simulator CLI, committed as fixtures: all four
  // figure kinds must render from them without error
  const fixtures = join(__dirname, "fixtures");

  it("renders radius, decay and budget from timeseries.csv", () => {
    const input = join(fixtures, "timeseries.csv");
    for (const kind of ["radius", "decay", "budget"] as const) {
      const dir = tmp();
      const output = join(dir, `${kind}.svg`);
      render({ kind, input, output, window: kind === "decay" ? [1, 50] : undefined });
      const text = assertSvg(output);
      if (kind === "decay") {
        expect(text).toContain('class="guide"');
        expect(text).toContain("C (1+t)^-1 guide");
      }
    }
  });

  it("renders the convergence figure from convergence.csv", () => {
    const dir = tmp();
    const output = join(dir, "convergence.svg");
    render({ kind: "convergence", input: join(fixtures, "convergence.csv"), output });
    assertSvg(output);
  });
});

describe("csv reader", () => {
  it("parses numeric tables with empty fields", () => {
    const dir = tmp();
    const path = join(dir, "t.csv");
    writeFileSync(path, "a,b\n1,\n2,3\n");
    const table = readCsv(path);
    expect(requireColumn(table, "a")).toEqual([1, 2]);
    expect(Number.isNaN(requireColumn(table, "b")[0])).toBe(true);
  });

  it("rejects ragged rows", () => {
    const dir = tmp();
    const path = join(dir, "bad.csv");
    writeFileSync(path, "a,b\n1,2\n3\n");
    expect(() => readCsv(path)).toThrowError(/row 3/);
  });
});

describe("cli", () => {
  it("parses arguments in both forms", () => {
    const spec = parseArgs(["--kind=decay", "--input", "in.csv", "--output=out.svg",
                            "--window", "10,500"]);
    expect(spec.kind).toBe("decay");
    expect(spec.window).toEqual([10, 500]);
  });

  it("rejects unknown kinds", () => {
    expect(() => parseArgs(["--kind", "contour", "--input", "a", "--output", "b"]))
      .toThrowError(/unknown figure kind/);
  });

  it("returns 0 on success and nonzero naming a missing column", () => {
    const dir = tmp();
    const input = writeTimeseries(dir, 31, (t) => 1e-3 / (1 + t));
    expect(main(["--kind", "radius", "--input", input,
                 "--output", join(dir, "r.svg")])).toBe(0);
    const broken = join(dir, "broken.csv");
    writeFileSync(broken, "t,R\n0,1\n1,1.01\n");
    expect(main(["--kind", "decay", "--input", broken,
                 "--output", join(dir, "d.svg")])).toBe(3);
  });

  it("works end to end through the built binary", () => {
    const dist = join(__dirname, "..", "dist", "cli.js");
    if (!existsSync(dist)) return;  // covered when `npm run build` precedes tests
    const dir = tmp();
    const input = writeTimeseries(dir, 31, (t) => 1e-3 / (1 + t));
    const output = join(dir, "decay.svg");
    execFileSync(process.execPath, [dist, "--kind", "decay",
                                    "--input", input, "--output", output]);
    assertSvg(output);
  });
});
