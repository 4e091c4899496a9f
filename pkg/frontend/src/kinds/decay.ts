import { requireColumn, type Table } from "../csv.js";
import { DEFAULT_MARGIN, DEFAULT_SIZE, extent, makeScale, positiveExtent, renderFigure, type Series } from "../svg.js";
import { masked, windowMask } from "../figure.js";

const Q_FLOOR = 1e-28;

/** Log-log decay of the perturbation norm with a (1+t)^-1 guide line.
 *
 * The guide is anchored at the window start, not least-squares fitted, so
 * the reference reads as an upper bound. An identically-zero Q trajectory
 * produces an annotated equilibrium figure instead.
 */
export function renderDecay(table: Table, window?: [number, number]): string {
  const tAll = requireColumn(table, "t");
  const mask = windowMask(tAll, window);
  const t = masked(tAll, mask);
  const q = masked(requireColumn(table, "Q"), mask);
  const onePlusT = t.map((v) => 1.0 + v);
  const m = DEFAULT_MARGIN;
  const xScale = makeScale("log", extent(onePlusT), [m.left, DEFAULT_SIZE.width - m.right]);

  const qMax = Math.max(...q);
  if (!(qMax > Q_FLOOR)) {
    const yScale = makeScale("log", [1e-30, 1e-26], [DEFAULT_SIZE.height - m.bottom, m.top]);
    return renderFigure({
      title: "Perturbation norm decay",
      xLabel: "1 + t",
      yLabel: "Q(t)",
      xScale,
      yScale,
      series: [],
      annotations: ["equilibrium trajectory: Q identically zero"],
    });
  }

  const [qLo, qHi] = positiveExtent(q, Q_FLOOR);
  const yScale = makeScale("log", [qLo, qHi * 2], [DEFAULT_SIZE.height - m.bottom, m.top]);

  // anchored guide: C/(1+t) through the first in-window sample with Q > 0
  const anchor = q.findIndex((v) => v > Q_FLOOR);
  const c = q[anchor] * onePlusT[anchor];
  const guide: Series = {
    x: onePlusT.slice(anchor),
    y: onePlusT.slice(anchor).map((v) => c / v),
    color: "#d62728",
    dash: "7 4",
    label: "C (1+t)^-1 guide",
    cssClass: "guide",
  };
  return renderFigure({
    title: "Perturbation norm decay",
    xLabel: "1 + t",
    yLabel: "Q(t)",
    xScale,
    yScale,
    series: [guide, { x: onePlusT, y: q, color: "#1f77b4", label: "Q(t)" }],
  });
}
