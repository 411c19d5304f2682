"""Independent brute-force enumerator used as the oracle for search tests.

Enumerates every AST up to a node-count cap by dynamic programming on exact
size, tracking each program's depth (stratum = depth, with leaves at depth 1).
Deliberately shares no code with the pruned search engine.
"""

from patternbuilder import grid


def _unary_results(bits):
    full = grid.FULL_MASK
    yield bits ^ full
    out = 0
    for r in range(10):
        out |= ((bits >> (r * 10)) & 0x3FF) << ((9 - r) * 10)
    yield out
    out = 0
    for r in range(10):
        row = (bits >> (r * 10)) & 0x3FF
        rev = int(format(row, "010b")[::-1], 2)
        out |= rev << (r * 10)
    yield out
    out = 0
    for r in range(10):
        for c in range(10):
            if (bits >> (r * 10 + c)) & 1:
                out |= 1 << (c * 10 + r)
    yield out


def enumerate_all(entry_bits, max_size):
    """All programs as (bits, depth) lists keyed by exact node count."""
    by_size = {1: [(b, 1) for b in entry_bits]}
    for n in range(2, max_size + 1):
        progs = []
        for (b, d) in by_size[n - 1]:
            for result in _unary_results(b):
                progs.append((result, d + 1))
        for i in range(1, n - 1):
            j = n - 1 - i
            for (ab, ad) in by_size[i]:
                for (bb, bd) in by_size[j]:
                    depth = (ad if ad > bd else bd) + 1
                    progs.append((ab | bb, depth))
                    progs.append((ab & ~bb & grid.FULL_MASK, depth))
                    progs.append((ab & bb, depth))
        by_size[n] = progs
    return by_size


def oracle_tables(entry_bits, max_size):
    """Per-canvas minimal node count and minimal depth (= first stratum)."""
    by_size = enumerate_all(entry_bits, max_size)
    min_node, min_depth = {}, {}
    for n, progs in by_size.items():
        for (b, d) in progs:
            if b not in min_node or n < min_node[b]:
                min_node[b] = n
            if b not in min_depth or d < min_depth[b]:
                min_depth[b] = d
    return min_node, min_depth
