"""Grid-pattern DSL, bottom-up synthesizer with online library learning,
benchmark harness, and interactive task service."""

__version__ = "0.1.0"

from .grid import Canvas, empty_canvas, primitive_canvas, apply_unary, apply_binary
from .lang import parse, print_expr, evaluate, measures
from .synth import Library, SearchConfig, SolveResult, solve, solve_sequence

__all__ = [
    "Canvas",
    "empty_canvas",
    "primitive_canvas",
    "apply_unary",
    "apply_binary",
    "parse",
    "print_expr",
    "evaluate",
    "measures",
    "Library",
    "SearchConfig",
    "SolveResult",
    "solve",
    "solve_sequence",
    "__version__",
]
