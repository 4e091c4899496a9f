import { requireColumn, type Table } from "../csv.js";
import { DEFAULT_MARGIN, DEFAULT_SIZE, extent, makeScale, renderFigure } from "../svg.js";
import { masked, windowMask } from "../figure.js";

/** Energy budget: decaying E0, accumulated dissipation, and their sum
 * held against the initial-energy horizontal. */
export function renderBudget(table: Table, window?: [number, number]): string {
  const tAll = requireColumn(table, "t");
  const e0All = requireColumn(table, "E0");
  const mask = windowMask(tAll, window);
  const t = masked(tAll, mask);
  const e0 = masked(e0All, mask);
  const cum = masked(requireColumn(table, "cumD"), mask);
  const total = e0.map((v, i) => v + cum[i]);
  const e0Initial = e0All[0];
  const [tLo, tHi] = extent(t);
  const [yLo, yHi] = extent([...e0, ...cum, ...total, e0Initial, 0.0]);
  const pad = 0.06 * (yHi - yLo || 1.0);
  const m = DEFAULT_MARGIN;
  return renderFigure({
    title: "Energy budget",
    xLabel: "t",
    yLabel: "energy",
    xScale: makeScale("linear", [tLo, tHi], [m.left, DEFAULT_SIZE.width - m.right]),
    yScale: makeScale("linear", [yLo - pad, yHi + pad],
      [DEFAULT_SIZE.height - m.bottom, m.top]),
    series: [
      { x: [tLo, tHi], y: [e0Initial, e0Initial], color: "#999", dash: "6 4", label: "E0(0)" },
      { x: t, y: e0, color: "#1f77b4", label: "E0(t)" },
      { x: t, y: cum, color: "#ff7f0e", label: "cumulative dissipation" },
      { x: t, y: total, color: "#2ca02c", label: "E0(t) + cumD(t)", width: 1.2 },
    ],
  });
}
