"""Bottom-up enumerative search with observational-equivalence pruning.

Programs are enumerated in strata: stratum 1 holds the library entries, and
stratum k > 1 holds every operator application whose operands are retained
representatives with at least one operand first retained in stratum k-1 (so
no candidate is ever regenerated). Every constructed candidate counts toward
``nodes_expanded`` before pruning. Observationally equivalent candidates in
the same stratum are resolved by the configured ranking criterion; a
representative from an earlier stratum always survives, which keeps every
representative at its first-discovered stratum.

Candidate generation order inside a stratum is fixed: unary applications
(operand-major in retention order, operators in declared order), then binary
applications (left operand major in retention order, then right operand,
then add/subtract/overlap). This makes searches fully deterministic.
"""

from __future__ import annotations

import time
from dataclasses import dataclass

from . import grid, lang
from .grid import Canvas
from .lang import Expr

VARIANTS = ("Baseline", "Short", "Library", "ShortLibrary")
_VARIANT_ALIASES = {
    "baseline": "Baseline",
    "short": "Short",
    "library": "Library",
    "shortlibrary": "ShortLibrary",
    "short+library": "ShortLibrary",
    "short_library": "ShortLibrary",
    "short-library": "ShortLibrary",
}

# Operator codes shared by the store's compact representatives: unary 0..3,
# binary 4..6, declared order. Token rank = library size + code.
OP_NAMES = (
    "invert",
    "reflect_horizontal",
    "reflect_vertical",
    "reflect_diag",
    "add",
    "subtract",
    "overlap",
)
_OP_ORDER = {name: code for code, name in enumerate(OP_NAMES)}
_UNARY_FNS = tuple(grid.UNARY_BITS_FN[name] for name in OP_NAMES[:4])


class SynthError(ValueError):
    pass


class BudgetExhausted(Exception):
    """Raised when a stratum would exceed max_nodes; partial results are kept."""


class _Found(Exception):
    pass


class _Budget(Exception):
    pass


@dataclass(frozen=True, slots=True)
class LibraryEntry:
    name: str
    canvas: Canvas
    origin: object  # lang.Expr for learned helpers, the string "built-in" otherwise


class Library:
    """Ordered, named canvas entries.

    Libraries built through ``initial``/``add`` always start with the five
    built-in primitives; the constructor itself only requires unique names so
    reduced libraries can be built for oracle comparisons.
    """

    __slots__ = ("entries", "_index")

    def __init__(self, entries: tuple[LibraryEntry, ...]):
        if not entries:
            raise SynthError("library must have at least one entry")
        index: dict[str, int] = {}
        for i, entry in enumerate(entries):
            if entry.name in index:
                raise SynthError(f"duplicate library entry name: {entry.name!r}")
            index[entry.name] = i
        self.entries = entries
        self._index = index

    @classmethod
    def initial(cls, primitives: dict[str, Canvas] | None = None) -> "Library":
        prims = grid.validate_geometry(primitives) if primitives else grid.DEFAULT_PRIMITIVES
        return cls(
            tuple(LibraryEntry(name, prims[name], "built-in") for name in grid.PRIMITIVE_NAMES)
        )

    def add(self, name: str, canvas: Canvas, origin) -> "Library":
        if name in self._index:
            raise SynthError(f"library already has an entry named {name!r}")
        if name in lang.RESERVED_IDENTS or lang._STEP_REF.match(name):
            raise SynthError(f"{name!r} is a reserved name")
        return Library(self.entries + (LibraryEntry(name, canvas, origin),))

    def resolve(self, name: str) -> Canvas | None:
        i = self._index.get(name)
        return self.entries[i].canvas if i is not None else None

    def origin_of(self, name: str):
        i = self._index.get(name)
        return self.entries[i].origin if i is not None else None

    def index_of(self, name: str) -> int | None:
        return self._index.get(name)

    def names(self) -> tuple[str, ...]:
        return tuple(e.name for e in self.entries)

    def __len__(self) -> int:
        return len(self.entries)


def normalize_variant(name: str) -> str:
    variant = _VARIANT_ALIASES.get(name.strip().lower())
    if variant is None:
        raise SynthError(f"unknown variant {name!r}; expected one of {', '.join(VARIANTS)}")
    return variant


@dataclass(frozen=True, slots=True)
class SearchConfig:
    variant: str = "Short"
    max_nodes: int = 1_000_000
    max_size: int = 15

    def __post_init__(self) -> None:
        object.__setattr__(self, "variant", normalize_variant(self.variant))
        if self.max_nodes < 1:
            raise SynthError("max_nodes must be >= 1")
        if self.max_size < 1:
            raise SynthError("max_size must be >= 1")

    @property
    def criterion(self) -> str:
        return "length" if self.variant in ("Short", "ShortLibrary") else "lexicographic"

    @property
    def library_learning(self) -> bool:
        return self.variant in ("Library", "ShortLibrary")


@dataclass(frozen=True, slots=True)
class SearchStats:
    nodes_expanded: int
    distinct_canvases: int
    strata_completed: int
    wall_time: float  # seconds


@dataclass(frozen=True, slots=True)
class SolveResult:
    solved: bool
    program: Expr | None
    program_length: int | None
    stats: SearchStats


class EquivalenceStore:
    """Per-target search state: canvas -> retained representative.

    Representatives are compact tuples (node_count, leaf_count, code, x, y):
    leaves use code -1 with x = library index; unary reps reference the child
    canvas in x; binary reps reference left/right canvases in x/y. Children
    always come from completed strata, so references never go stale.
    """

    def __init__(self, lib: Library, config: SearchConfig, target: Canvas | None = None):
        self.lib = lib
        self.config = config
        self.target_bits = target.bits if target is not None else None
        self.reps: dict[int, tuple] = {}
        self.order: list[tuple[int, int, int]] = []  # (bits, node_count, leaf_count)
        self.strata_new: list[list[int]] = []
        self.candidate_counts: list[int] = []
        self.nodes_expanded = 0
        self.strata_completed = 0
        self.found_bits: int | None = None
        self._new_start = 0
        self._lexkeys: dict[int, tuple] = {}
        self._use_length = config.criterion == "length"
        self._op_rank_base = len(lib)

    # -- ranking ---------------------------------------------------------

    def _lexkey(self, bits: int) -> tuple:
        key = self._lexkeys.get(bits)
        if key is None:
            key = self._key_of(self.reps[bits])
            self._lexkeys[bits] = key
        return key

    def _key_of(self, rep: tuple) -> tuple:
        code = rep[2]
        if code < 0:
            return (rep[3],)
        base = self._op_rank_base
        if code < 4:
            return (base + code,) + self._lexkey(rep[3])
        return (base + code,) + self._lexkey(rep[3]) + self._lexkey(rep[4])

    def _better(self, cand: tuple, incumbent: tuple) -> bool:
        if self._use_length and cand[1] != incumbent[1]:
            return cand[1] < incumbent[1]
        return self._key_of(cand) < self._key_of(incumbent)

    # -- enumeration -----------------------------------------------------

    def run_stratum(self) -> list[int]:
        """Enumerate the next stratum; returns canvases first retained in it.

        Raises BudgetExhausted when max_nodes is hit mid-stratum (partial
        results stay in the store). Sets ``found_bits`` and returns early if
        the target canvas is retained.
        """
        k = self.strata_completed + 1
        reps = self.reps
        target = self.target_bits
        max_nodes = self.config.max_nodes
        max_size = self.config.max_size
        current_new: list[int] = []
        in_current: set[int] = set()
        append_new = current_new.append
        add_current = in_current.add
        nodes = self.nodes_expanded
        count_start = nodes
        hit_budget = False

        try:
            if k == 1:
                for idx, entry in enumerate(self.lib.entries):
                    if nodes >= max_nodes:
                        raise _Budget
                    nodes += 1
                    c = entry.canvas.bits
                    rep = (1, 1, -1, idx, 0)
                    if c in reps:
                        if c in in_current and self._better(rep, reps[c]):
                            reps[c] = rep
                    else:
                        reps[c] = rep
                        add_current(c)
                        append_new(c)
                        if c == target:
                            self.found_bits = c
                            raise _Found
            else:
                order = self.order
                new_start = self._new_start
                news = order[new_start:]
                better = self._better

                # Unary block: operand-major over the newest representatives.
                for ac, anode, aleaf in news:
                    ns = anode + 1
                    if ns > max_size:
                        continue
                    for code, fn in enumerate(_UNARY_FNS):
                        if nodes >= max_nodes:
                            raise _Budget
                        nodes += 1
                        c = fn(ac)
                        if c in reps:
                            if c in in_current:
                                rep = (ns, aleaf, code, ac, 0)
                                if better(rep, reps[c]):
                                    reps[c] = rep
                        else:
                            reps[c] = (ns, aleaf, code, ac, 0)
                            add_current(c)
                            append_new(c)
                            if c == target:
                                self.found_bits = c
                                raise _Found

                # Binary block: every (left, right) pair with at least one
                # operand from the newest stratum, left-major.
                for i, (ac, anode, aleaf) in enumerate(order):
                    rights = order if i >= new_start else news
                    rem = max_size - 1 - anode
                    if rem < 1:
                        continue
                    for bc, bnode, bleaf in rights:
                        if bnode > rem:
                            continue
                        ns = anode + bnode + 1
                        nl = aleaf + bleaf

                        if nodes >= max_nodes:
                            raise _Budget
                        nodes += 1
                        c = ac | bc
                        if c in reps:
                            if c in in_current:
                                rep = (ns, nl, 4, ac, bc)
                                if better(rep, reps[c]):
                                    reps[c] = rep
                        else:
                            reps[c] = (ns, nl, 4, ac, bc)
                            add_current(c)
                            append_new(c)
                            if c == target:
                                self.found_bits = c
                                raise _Found

                        if nodes >= max_nodes:
                            raise _Budget
                        nodes += 1
                        c = ac ^ (ac & bc)  # a AND NOT b
                        if c in reps:
                            if c in in_current:
                                rep = (ns, nl, 5, ac, bc)
                                if better(rep, reps[c]):
                                    reps[c] = rep
                        else:
                            reps[c] = (ns, nl, 5, ac, bc)
                            add_current(c)
                            append_new(c)
                            if c == target:
                                self.found_bits = c
                                raise _Found

                        if nodes >= max_nodes:
                            raise _Budget
                        nodes += 1
                        c = ac & bc
                        if c in reps:
                            if c in in_current:
                                rep = (ns, nl, 6, ac, bc)
                                if better(rep, reps[c]):
                                    reps[c] = rep
                        else:
                            reps[c] = (ns, nl, 6, ac, bc)
                            add_current(c)
                            append_new(c)
                            if c == target:
                                self.found_bits = c
                                raise _Found
        except _Found:
            pass
        except _Budget:
            hit_budget = True
        finally:
            self.nodes_expanded = nodes
            self.candidate_counts.append(nodes - count_start)
            self.strata_new.append(current_new)
            self._new_start = len(self.order)
            self.order.extend((c,) + self.reps[c][:2] for c in current_new)

        if hit_budget:
            raise BudgetExhausted(f"max_nodes={max_nodes} reached in stratum {k}")
        if self.found_bits is None:
            self.strata_completed = k
        return current_new

    def expr_of(self, bits: int) -> Expr:
        """Reconstruct the retained representative as an AST."""
        rep = self.reps[bits]
        code = rep[2]
        if code < 0:
            entry = self.lib.entries[rep[3]]
            if entry.origin == "built-in":
                return lang.PrimitiveRef(entry.name)
            return lang.LibraryRef(entry.name)
        if code < 4:
            return lang.UnaryApp(OP_NAMES[code], self.expr_of(rep[3]))
        return lang.BinaryApp(OP_NAMES[code], self.expr_of(rep[3]), self.expr_of(rep[4]))

    @property
    def distinct_canvases(self) -> int:
        return len(self.reps)


def enumerate_stratum(k: int, store: EquivalenceStore) -> list[tuple[Expr, Canvas]]:
    """Enumerate stratum k (the next one) and return its retained representatives."""
    if k != store.strata_completed + 1:
        raise SynthError(
            f"strata are enumerated in order; expected {store.strata_completed + 1}, got {k}"
        )
    new = store.run_stratum()
    return [(store.expr_of(c), Canvas(c)) for c in new]


def _expr_lexkey(e: Expr, lib: Library) -> tuple:
    if isinstance(e, lang.PrimitiveRef) or isinstance(e, lang.LibraryRef):
        idx = lib.index_of(e.name)
        if idx is None:
            raise SynthError(f"{e.name!r} is not in the library; cannot rank")
        return (idx,)
    if isinstance(e, lang.UnaryApp):
        return (len(lib) + _OP_ORDER[e.op],) + _expr_lexkey(e.child, lib)
    if isinstance(e, lang.BinaryApp):
        return (
            (len(lib) + _OP_ORDER[e.op],)
            + _expr_lexkey(e.left, lib)
            + _expr_lexkey(e.right, lib)
        )
    raise SynthError(f"cannot rank expression node {e!r}")


def rank(a: Expr, b: Expr, criterion: str, lib: Library | None = None) -> int:
    """Total order over equivalent programs: -1 if a outranks b, 1 if b wins, 0 if equal.

    ``lexicographic`` compares token sequences under the fixed token order
    (library entries in insertion order, then operators in declared order).
    ``length`` compares leaf counts, ties broken lexicographically.
    """
    if criterion not in ("lexicographic", "length"):
        raise SynthError(f"unknown ranking criterion {criterion!r}")
    if lib is None:
        lib = Library.initial()
    if criterion == "length":
        la = lang.measures(a).leaf_count
        lb = lang.measures(b).leaf_count
        if la != lb:
            return -1 if la < lb else 1
    ka = _expr_lexkey(a, lib)
    kb = _expr_lexkey(b, lib)
    if ka < kb:
        return -1
    if ka > kb:
        return 1
    return 0


def solve(target: Canvas, lib: Library | None = None, config: SearchConfig | None = None) -> SolveResult:
    """Search for a program denoting ``target``; never raises on failure to find."""
    if lib is None:
        lib = Library.initial()
    if config is None:
        config = SearchConfig()
    t0 = time.perf_counter()
    store = EquivalenceStore(lib, config, target=target)
    solved_bits: int | None = None
    while True:
        try:
            store.run_stratum()
        except BudgetExhausted:
            break
        if store.found_bits is not None:
            solved_bits = store.found_bits
            break
        if store.candidate_counts[-1] == 0:
            break  # nothing constructible under max_size; the space is exhausted
    wall = time.perf_counter() - t0
    stats = SearchStats(store.nodes_expanded, store.distinct_canvases, store.strata_completed, wall)
    if solved_bits is None:
        return SolveResult(False, None, None, stats)
    program = store.expr_of(solved_bits)
    return SolveResult(True, program, store.reps[solved_bits][1], stats)


def solve_sequence(
    targets: list[Canvas],
    config: SearchConfig,
    lib: Library | None = None,
) -> list[SolveResult]:
    """Solve targets in order. Library variants append each solved target's
    canvas as ``helper_<i>`` (1-based target position) before the next search;
    non-library variants restart from the initial library every time.
    """
    if not targets:
        raise SynthError("solve_sequence requires at least one target")
    base = lib if lib is not None else Library.initial()
    current = base
    results: list[SolveResult] = []
    for i, target in enumerate(targets, start=1):
        result = solve(target, current if config.library_learning else base, config)
        results.append(result)
        if config.library_learning and result.solved:
            current = current.add(f"helper_{i}", target, result.program)
    return results
