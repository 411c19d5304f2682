/**
 * Click-to-compose state: pick an operation, then pick its operands from
 * the primitive palette, step thumbnails, or helper thumbnails. The composer
 * only assembles program text; the server evaluates it.
 */

export interface Operation {
  name: string;
  arity: 1 | 2;
}

export const OPERATIONS: readonly Operation[] = [
  { name: "invert", arity: 1 },
  { name: "refl_h", arity: 1 },
  { name: "refl_v", arity: 1 },
  { name: "refl_d", arity: 1 },
  { name: "add", arity: 2 },
  { name: "subtract", arity: 2 },
  { name: "overlap", arity: 2 },
];

export const PRIMITIVES = ["line_h", "line_v", "diag", "square", "triangle"] as const;

export type OperandRef =
  | { kind: "primitive"; name: string }
  | { kind: "step"; index: number }
  | { kind: "helper"; name: string };

export function operandText(ref: OperandRef): string {
  switch (ref.kind) {
    case "primitive":
      return ref.name;
    case "step":
      return `step_${ref.index}`;
    case "helper":
      return ref.name;
  }
}

export function buildProgram(operation: string, operands: OperandRef[]): string {
  return `${operation}(${operands.map(operandText).join(",")})`;
}

export type SelectOutcome =
  | { status: "pending"; needed: number }
  | { status: "ready"; program: string }
  | { status: "blocked"; reason: string };

export class Composer {
  operation: Operation | null = null;
  operands: OperandRef[] = [];

  reset(): void {
    this.operation = null;
    this.operands = [];
  }

  selectOperation(name: string): void {
    const op = OPERATIONS.find((o) => o.name === name);
    if (!op) throw new Error(`unknown operation ${name}`);
    this.operation = op;
    this.operands = [];
  }

  /**
   * Add an operand. With no operation selected the operand itself becomes a
   * complete single-leaf program. Extra operands beyond the operation's
   * arity are blocked client-side.
   */
  selectOperand(ref: OperandRef): SelectOutcome {
    if (this.operation === null) {
      return { status: "ready", program: operandText(ref) };
    }
    if (this.operands.length >= this.operation.arity) {
      return { status: "blocked", reason: `${this.operation.name} takes ${this.operation.arity} operand(s)` };
    }
    this.operands.push(ref);
    if (this.operands.length === this.operation.arity) {
      return { status: "ready", program: buildProgram(this.operation.name, this.operands) };
    }
    return { status: "pending", needed: this.operation.arity - this.operands.length };
  }

  describe(): string {
    if (this.operation === null) return "pick an operation, or click a shape to place it";
    const got = this.operands.map(operandText).join(", ");
    const needed = this.operation.arity - this.operands.length;
    if (needed === 0) return `${this.operation.name}(${got})`;
    return `${this.operation.name}(${got}${got ? ", " : ""}… ${needed} more)`;
  }
}
