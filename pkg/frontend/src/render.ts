/** Polyline rendering of corpus-shape strokes, aspect preserved. */

import type { CorpusStroke } from "./wire.js";

export interface Segment {
  x0: number;
  y0: number;
  x1: number;
  y1: number;
}

/** Minimal slice of CanvasRenderingContext2D the renderer needs. */
export interface LineContext {
  beginPath(): void;
  moveTo(x: number, y: number): void;
  lineTo(x: number, y: number): void;
  stroke(): void;
  clearRect(x: number, y: number, w: number, h: number): void;
}

/**
 * Scale the drawing into a pane of the given size and draw its polylines.
 * Returns the segments actually drawn so callers can inspect the result
 * even without a rasterizing context (ctx may be null in that case).
 */
export function renderSketch(
  strokes: CorpusStroke[],
  ctx: LineContext | null,
  paneWidth: number,
  paneHeight: number,
  margin = 8,
): Segment[] {
  ctx?.clearRect(0, 0, paneWidth, paneHeight);
  if (strokes.length === 0) return [];

  const xs = strokes.flatMap(([sx]) => sx);
  const ys = strokes.flatMap(([, sy]) => sy);
  const minX = Math.min(...xs);
  const maxX = Math.max(...xs);
  const minY = Math.min(...ys);
  const maxY = Math.max(...ys);
  const spanX = Math.max(1, maxX - minX);
  const spanY = Math.max(1, maxY - minY);
  const scale = Math.min(
    (paneWidth - 2 * margin) / spanX,
    (paneHeight - 2 * margin) / spanY,
  );
  const offX = (paneWidth - spanX * scale) / 2;
  const offY = (paneHeight - spanY * scale) / 2;
  const px = (x: number) => offX + (x - minX) * scale;
  const py = (y: number) => offY + (y - minY) * scale;

  const segments: Segment[] = [];
  for (const [sx, sy] of strokes) {
    if (sx.length === 0) continue;
    ctx?.beginPath();
    ctx?.moveTo(px(sx[0]), py(sy[0]));
    for (let i = 1; i < sx.length; i++) {
      ctx?.lineTo(px(sx[i]), py(sy[i]));
      segments.push({
        x0: px(sx[i - 1]),
        y0: py(sy[i - 1]),
        x1: px(sx[i]),
        y1: py(sy[i]),
      });
    }
    ctx?.stroke();
  }
  return segments;
}
