/**
 * Canvas-element thumbnails for server-provided canvas text.
 */

import { CanvasFormatError, GRID_SIZE, parseCanvasText } from "./canvasText.js";

export interface ThumbnailOptions {
  cellSize?: number;
  onColor?: string;
  offColor?: string;
  gridColor?: string;
}

/**
 * Draw a canvas payload as a cell grid. Malformed payloads yield an error
 * badge element instead of a drawing.
 */
export function renderCanvasThumbnail(text: string, options: ThumbnailOptions = {}): HTMLElement {
  const cell = options.cellSize ?? 12;
  let cells: boolean[][];
  try {
    cells = parseCanvasText(text);
  } catch (err) {
    const badge = document.createElement("span");
    badge.className = "canvas-error";
    badge.textContent = "bad canvas";
    badge.title = err instanceof CanvasFormatError ? err.message : String(err);
    return badge;
  }
  const el = document.createElement("canvas");
  el.className = "canvas-thumbnail";
  el.width = GRID_SIZE * cell;
  el.height = GRID_SIZE * cell;
  const ctx = el.getContext("2d");
  if (ctx) {
    ctx.fillStyle = options.offColor ?? "#ffffff";
    ctx.fillRect(0, 0, el.width, el.height);
    ctx.fillStyle = options.onColor ?? "#2b2b2b";
    for (let r = 0; r < GRID_SIZE; r++) {
      for (let c = 0; c < GRID_SIZE; c++) {
        if (cells[r][c]) ctx.fillRect(c * cell, r * cell, cell, cell);
      }
    }
    ctx.strokeStyle = options.gridColor ?? "#d8d8d8";
    ctx.lineWidth = 1;
    for (let i = 0; i <= GRID_SIZE; i++) {
      ctx.beginPath();
      ctx.moveTo(i * cell + 0.5, 0);
      ctx.lineTo(i * cell + 0.5, el.height);
      ctx.stroke();
      ctx.beginPath();
      ctx.moveTo(0, i * cell + 0.5);
      ctx.lineTo(el.width, i * cell + 0.5);
      ctx.stroke();
    }
  }
  return el;
}
