"""Canvas value domain: 10x10 boolean grids with shape primitives and transforms.

A canvas is stored as a 100-bit integer, row-major, bit 0 at cell (0, 0),
so equality, hashing, and the binary transforms are single int operations.
"""

from __future__ import annotations

from dataclasses import dataclass

SIZE = 10
CELLS = SIZE * SIZE
FULL_MASK = (1 << CELLS) - 1

# 10-bit helper tables: per-row bit reversal and row->column scatter.
_REV10 = [int(format(v, "010b")[::-1], 2) for v in range(1 << SIZE)]
_SPREAD10 = [
    sum(((v >> i) & 1) << (i * SIZE) for i in range(SIZE)) for v in range(1 << SIZE)
]


class GridError(ValueError):
    """Invalid canvas text, primitive name, or operator name."""


@dataclass(frozen=True, slots=True)
class Canvas:
    """Immutable 10x10 boolean grid backed by a 100-bit integer."""

    bits: int

    def __post_init__(self) -> None:
        if not 0 <= self.bits <= FULL_MASK:
            raise GridError(f"canvas encoding out of range: {self.bits}")

    def get(self, row: int, col: int) -> bool:
        if not (0 <= row < SIZE and 0 <= col < SIZE):
            raise GridError(f"cell ({row}, {col}) out of range")
        return bool((self.bits >> (row * SIZE + col)) & 1)

    def popcount(self) -> int:
        return bin(self.bits).count("1")

    def to_text(self) -> str:
        """Render as 10 lines of '#'/'.' characters, newline-terminated."""
        rows = []
        for r in range(SIZE):
            row = (self.bits >> (r * SIZE)) & 0x3FF
            rows.append("".join("#" if (row >> c) & 1 else "." for c in range(SIZE)))
        return "\n".join(rows) + "\n"

    @classmethod
    def from_text(cls, text: str) -> "Canvas":
        """Parse the 10-line text format. Rejects wrong dimensions or characters."""
        lines = text.split("\n")
        if lines and lines[-1] == "":
            lines = lines[:-1]
        if len(lines) != SIZE:
            raise GridError(f"expected {SIZE} canvas lines, got {len(lines)}")
        bits = 0
        for r, line in enumerate(lines):
            if len(line) != SIZE:
                raise GridError(f"canvas line {r + 1} has {len(line)} characters, expected {SIZE}")
            for c, ch in enumerate(line):
                if ch == "#":
                    bits |= 1 << (r * SIZE + c)
                elif ch != ".":
                    raise GridError(f"invalid character {ch!r} at line {r + 1}, column {c + 1}")
        return cls(bits)

    @classmethod
    def from_cells(cls, cells) -> "Canvas":
        """Build from an iterable of (row, col) pairs set to true."""
        bits = 0
        for r, c in cells:
            if not (0 <= r < SIZE and 0 <= c < SIZE):
                raise GridError(f"cell ({r}, {c}) out of range")
            bits |= 1 << (r * SIZE + c)
        return cls(bits)


EMPTY = Canvas(0)

UNARY_OPS = ("invert", "reflect_horizontal", "reflect_vertical", "reflect_diag")
BINARY_OPS = ("add", "subtract", "overlap")
OPERATOR_ARITY = {**{op: 1 for op in UNARY_OPS}, **{op: 2 for op in BINARY_OPS}}


def empty_canvas() -> Canvas:
    return EMPTY


def invert_bits(bits: int) -> int:
    return bits ^ FULL_MASK


def reflect_horizontal_bits(bits: int) -> int:
    """Flip top<->bottom: (r, c) -> (9-r, c)."""
    out = 0
    for r in range(SIZE):
        out |= ((bits >> (r * SIZE)) & 0x3FF) << ((SIZE - 1 - r) * SIZE)
    return out


def reflect_vertical_bits(bits: int) -> int:
    """Flip left<->right: (r, c) -> (r, 9-c)."""
    out = 0
    for r in range(SIZE):
        out |= _REV10[(bits >> (r * SIZE)) & 0x3FF] << (r * SIZE)
    return out


def reflect_diag_bits(bits: int) -> int:
    """Transpose: (r, c) -> (c, r)."""
    out = 0
    for r in range(SIZE):
        out |= _SPREAD10[(bits >> (r * SIZE)) & 0x3FF] << r
    return out


UNARY_BITS_FN = {
    "invert": invert_bits,
    "reflect_horizontal": reflect_horizontal_bits,
    "reflect_vertical": reflect_vertical_bits,
    "reflect_diag": reflect_diag_bits,
}


def add_bits(a: int, b: int) -> int:
    return a | b


def subtract_bits(a: int, b: int) -> int:
    return a & ~b & FULL_MASK


def overlap_bits(a: int, b: int) -> int:
    return a & b


BINARY_BITS_FN = {
    "add": add_bits,
    "subtract": subtract_bits,
    "overlap": overlap_bits,
}


def apply_unary(op: str, a: Canvas) -> Canvas:
    fn = UNARY_BITS_FN.get(op)
    if fn is None:
        raise GridError(f"unknown unary operator: {op!r}")
    return Canvas(fn(a.bits))


def apply_binary(op: str, a: Canvas, b: Canvas) -> Canvas:
    fn = BINARY_BITS_FN.get(op)
    if fn is None:
        raise GridError(f"unknown binary operator: {op!r}")
    return Canvas(fn(a.bits, b.bits))


PRIMITIVE_NAMES = ("line_horizontal", "line_vertical", "diagonal", "square", "triangle")


def _default_primitives() -> dict[str, Canvas]:
    line_h = Canvas.from_cells((4, c) for c in range(SIZE))
    line_v = Canvas.from_cells((r, 4) for r in range(SIZE))
    diagonal = Canvas.from_cells((i, i) for i in range(SIZE))
    square = Canvas.from_cells(
        (r, c)
        for r in range(SIZE)
        for c in range(SIZE)
        if r in (0, SIZE - 1) or c in (0, SIZE - 1)
    )
    triangle = Canvas.from_cells((r, c) for r in range(SIZE) for c in range(r + 1))
    return {
        "line_horizontal": line_h,
        "line_vertical": line_v,
        "diagonal": diagonal,
        "square": square,
        "triangle": triangle,
    }


DEFAULT_PRIMITIVES = _default_primitives()


def primitive_canvas(name: str) -> Canvas:
    canvas = DEFAULT_PRIMITIVES.get(name)
    if canvas is None:
        raise GridError(f"unknown primitive: {name!r}")
    return canvas


def validate_geometry(primitives: dict[str, Canvas]) -> dict[str, Canvas]:
    """Check a replacement primitive geometry: all five names, distinct, nonempty."""
    missing = [n for n in PRIMITIVE_NAMES if n not in primitives]
    if missing:
        raise GridError(f"geometry is missing primitives: {', '.join(missing)}")
    extra = [n for n in primitives if n not in PRIMITIVE_NAMES]
    if extra:
        raise GridError(f"geometry has unknown primitives: {', '.join(extra)}")
    seen: dict[int, str] = {}
    for name in PRIMITIVE_NAMES:
        canvas = primitives[name]
        if canvas.bits == 0:
            raise GridError(f"primitive {name!r} is empty")
        if canvas.bits in seen:
            raise GridError(f"primitives {seen[canvas.bits]!r} and {name!r} are identical")
        seen[canvas.bits] = name
    return dict(primitives)
