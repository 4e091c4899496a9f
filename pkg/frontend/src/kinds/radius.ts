import { requireColumn, type Table } from "../csv.js";
import { DEFAULT_MARGIN, DEFAULT_SIZE, extent, makeScale, renderFigure } from "../svg.js";
import { masked, windowMask } from "../figure.js";

/** Damped oscillation of the bubble radius with the rest value marked. */
export function renderRadius(table: Table, window?: [number, number]): string {
  const mask = windowMask(requireColumn(table, "t"), window);
  const t = masked(requireColumn(table, "t"), mask);
  const R = masked(requireColumn(table, "R"), mask);
  const [tLo, tHi] = extent(t);
  const [rLo, rHi] = extent([...R, 1.0]);
  const pad = 0.05 * (rHi - rLo || 1.0);
  const m = DEFAULT_MARGIN;
  const xScale = makeScale("linear", [tLo, tHi], [m.left, DEFAULT_SIZE.width - m.right]);
  const yScale = makeScale("linear", [rLo - pad, rHi + pad],
    [DEFAULT_SIZE.height - m.bottom, m.top]);
  return renderFigure({
    title: "Bubble radius",
    xLabel: "t",
    yLabel: "R(t)",
    xScale,
    yScale,
    series: [
      { x: [tLo, tHi], y: [1.0, 1.0], color: "#999", dash: "6 4", label: "rest radius" },
      { x: t, y: R, color: "#1f77b4", label: "R(t)" },
    ],
  });
}
