/**
 * Decoding of the server's 10-line canvas text payloads into cell matrices.
 *
 * This is presentation-side decoding only: the client never computes any
 * grid transform or program semantics; every canvas shown comes verbatim
 * from the server.
 */

export const GRID_SIZE = 10;

export class CanvasFormatError extends Error {
  constructor(message: string) {
    super(message);
    this.name = "CanvasFormatError";
  }
}

export function parseCanvasText(text: string): boolean[][] {
  const lines = text.split("\n");
  if (lines.length > 0 && lines[lines.length - 1] === "") lines.pop();
  if (lines.length !== GRID_SIZE) {
    throw new CanvasFormatError(`expected ${GRID_SIZE} lines, got ${lines.length}`);
  }
  return lines.map((line, r) => {
    if (line.length !== GRID_SIZE) {
      throw new CanvasFormatError(`line ${r + 1} has ${line.length} characters`);
    }
    return Array.from(line, (ch, c) => {
      if (ch === "#") return true;
      if (ch === ".") return false;
      throw new CanvasFormatError(`invalid character ${JSON.stringify(ch)} at ${r + 1}:${c + 1}`);
    });
  });
}

export function filledCellCount(text: string): number {
  return parseCanvasText(text)
    .flat()
    .filter(Boolean).length;
}
