/**
 * Pointer-event stroke capture.
 *
 * One pen-down interval becomes one CanvasStroke. Clicks without movement
 * (fewer than two samples, or all samples identical) are discarded
 * silently. Coordinates stay in canvas pixels until submission, when they
 * are mapped to the 0..255 corpus space.
 */

import type { CorpusStroke } from "./wire.js";

export interface SamplePoint {
  x: number;
  y: number;
}

export interface CanvasStroke {
  points: SamplePoint[];
}

export class StrokeCapture {
  private current: SamplePoint[] | null = null;

  get drawing(): boolean {
    return this.current !== null;
  }

  begin(x: number, y: number): void {
    this.current = [{ x, y }];
  }

  move(x: number, y: number): SamplePoint | null {
    if (!this.current) return null;
    const last = this.current[this.current.length - 1];
    if (last.x === x && last.y === y) return null;
    const p = { x, y };
    this.current.push(p);
    return p;
  }

  /** Finish the pen-down interval; null when the drag had zero length. */
  end(): CanvasStroke | null {
    const samples = this.current;
    this.current = null;
    if (!samples || samples.length < 2) return null;
    return { points: samples };
  }
}

/** Map captured strokes from canvas pixels onto the 0..255 integer grid. */
export function toCorpusStrokes(
  strokes: CanvasStroke[],
  canvasWidth: number,
  canvasHeight: number,
): CorpusStroke[] {
  const sx = 255 / Math.max(1, canvasWidth - 1);
  const sy = 255 / Math.max(1, canvasHeight - 1);
  return strokes.map((stroke) => {
    const xs = stroke.points.map((p) => clampByte(Math.round(p.x * sx)));
    const ys = stroke.points.map((p) => clampByte(Math.round(p.y * sy)));
    return [xs, ys] as CorpusStroke;
  });
}

function clampByte(v: number): number {
  return Math.min(255, Math.max(0, v));
}
