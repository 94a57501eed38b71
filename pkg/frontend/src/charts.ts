/** Pure chart geometry: SVG primitives computed from service response arrays.
 * No resampling or smoothing happens here; the arrays are rendered as-is. */

export interface Rect {
  x: number;
  y: number;
  width: number;
  height: number;
}

export interface BoxGeometry {
  boxX: number;
  boxWidth: number;
  medianX: number;
  whiskerLowX: number;
  whiskerHighX: number;
}

export interface Scale {
  (value: number): number;
}

/** Linear map from [domainLo, domainHi] onto [0, rangePx]. */
export function linearScale(domainLo: number, domainHi: number, rangePx: number): Scale {
  const span = domainHi - domainLo || 1;
  return (value: number) => ((value - domainLo) / span) * rangePx;
}

export function histogramBars(
  edges: number[],
  counts: number[],
  width: number,
  height: number,
): Rect[] {
  const maxCount = Math.max(...counts, 1);
  const x = linearScale(edges[0], edges[edges.length - 1], width);
  return counts.map((count, i) => {
    const x0 = x(edges[i]);
    const x1 = x(edges[i + 1]);
    const barHeight = (count / maxCount) * height;
    return { x: x0, y: height - barHeight, width: x1 - x0, height: barHeight };
  });
}

export function boxGeometry(
  box: { min: number; q1: number; med: number; q3: number; max: number },
  scale: Scale,
): BoxGeometry {
  return {
    boxX: scale(box.q1),
    boxWidth: scale(box.q3) - scale(box.q1),
    medianX: scale(box.med),
    whiskerLowX: scale(box.min),
    whiskerHighX: scale(box.max),
  };
}

/** Density polyline over the fixed grid, normalized to the panel height. */
export function densityPath(
  grid: number[],
  density: number[],
  width: number,
  height: number,
): string {
  const maxDensity = Math.max(...density, 1e-12);
  const x = linearScale(grid[0], grid[grid.length - 1], width);
  const points = grid.map((g, i) => {
    const px = x(g);
    const py = height - (density[i] / maxDensity) * height;
    return `${px.toFixed(2)},${py.toFixed(2)}`;
  });
  return `M${points.join(" L")}`;
}

/** Mirrored density strip for scenario comparison (violin-style). */
export function violinPath(
  grid: number[],
  density: number[],
  width: number,
  centerY: number,
  halfHeight: number,
): string {
  const maxDensity = Math.max(...density, 1e-12);
  const x = linearScale(grid[0], grid[grid.length - 1], width);
  const upper = grid.map((g, i) => {
    const px = x(g);
    const py = centerY - (density[i] / maxDensity) * halfHeight;
    return `${px.toFixed(2)},${py.toFixed(2)}`;
  });
  const lower = [...grid.keys()].reverse().map((i) => {
    const px = x(grid[i]);
    const py = centerY + (density[i] / maxDensity) * halfHeight;
    return `${px.toFixed(2)},${py.toFixed(2)}`;
  });
  return `M${upper.join(" L")} L${lower.join(" L")} Z`;
}

export function markerX(value: number, scale: Scale): number {
  return scale(value);
}
