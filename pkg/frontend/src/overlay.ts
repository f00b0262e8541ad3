// Detection overlay: pure box-to-pixel geometry plus the canvas drawing
// that uses it. The geometry is kept side-effect free so it can be checked
// against exact arithmetic.

import type { BoxDto, DetectionDto } from "./api.js";

export interface PixelRect {
  x: number;
  y: number;
  width: number;
  height: number;
}

/** Map a normalized center/size box onto a display of the given pixel size. */
export function boxToPixelRect(box: BoxDto, displayWidth: number, displayHeight: number): PixelRect {
  return {
    x: (box.cx - box.w / 2) * displayWidth,
    y: (box.cy - box.h / 2) * displayHeight,
    width: box.w * displayWidth,
    height: box.h * displayHeight,
  };
}

export function drawDetections(
  ctx: CanvasRenderingContext2D,
  detections: DetectionDto[],
  displayWidth: number,
  displayHeight: number,
  labelFor: (det: DetectionDto) => string,
): void {
  ctx.clearRect(0, 0, displayWidth, displayHeight);
  ctx.lineWidth = 2;
  ctx.font = "14px sans-serif";
  for (const det of detections) {
    const rect = boxToPixelRect(det.box, displayWidth, displayHeight);
    ctx.strokeStyle = "#e5383b";
    ctx.strokeRect(rect.x, rect.y, rect.width, rect.height);

    const label = `${labelFor(det)} ${(det.score * 100).toFixed(0)}%`;
    const textWidth = ctx.measureText(label).width;
    const labelY = Math.max(0, rect.y - 18);
    ctx.fillStyle = "rgba(0, 0, 0, 0.65)";
    ctx.fillRect(rect.x, labelY, textWidth + 8, 18);
    ctx.fillStyle = "#fff";
    ctx.fillText(label, rect.x + 4, labelY + 13);
  }
}
