"""Pattern corpus loading and the block text format.

A corpus file is a sequence of blocks: a line ``= <id>``, ten canvas lines,
and a blank line between blocks. The same format carries replacement
primitive geometries (ids are then the five primitive names).
"""

from __future__ import annotations

import hashlib
from dataclasses import dataclass
from importlib import resources

from . import grid
from .grid import Canvas

DEFAULT_CORPUS_RESOURCE = "corpus14.txt"


class CorpusError(ValueError):
    pass


@dataclass(frozen=True)
class PatternCorpus:
    patterns: tuple[tuple[str, Canvas], ...]
    source_path: str

    def ids(self) -> list[str]:
        return [pid for pid, _ in self.patterns]

    def canvases(self) -> list[Canvas]:
        return [canvas for _, canvas in self.patterns]

    def get(self, pattern_id: str) -> Canvas:
        for pid, canvas in self.patterns:
            if pid == pattern_id:
                return canvas
        raise CorpusError(f"no pattern named {pattern_id!r}")

    def digest(self) -> str:
        """SHA-256 over the ordered canvas encodings; changes iff any canvas changes."""
        h = hashlib.sha256()
        for _, canvas in self.patterns:
            h.update(canvas.bits.to_bytes(13, "little"))
        return h.hexdigest()

    def __len__(self) -> int:
        return len(self.patterns)


def parse_blocks(text: str, source: str = "<string>") -> list[tuple[str, Canvas]]:
    """Parse `= id` + 10-line canvas blocks; errors carry 1-based line numbers."""
    lines = text.split("\n")
    blocks: list[tuple[str, Canvas]] = []
    i = 0
    n = len(lines)
    while i < n:
        if lines[i].strip() == "":
            i += 1
            continue
        header = lines[i]
        if not header.startswith("= "):
            raise CorpusError(f"{source}:{i + 1}: expected '= <id>' header, got {header!r}")
        block_id = header[2:].strip()
        if not block_id:
            raise CorpusError(f"{source}:{i + 1}: empty block id")
        if i + 10 >= n + 1 and len([l for l in lines[i + 1:] if l != ""]) < 10:
            raise CorpusError(f"{source}:{i + 1}: block {block_id!r} is truncated")
        canvas_lines = lines[i + 1 : i + 11]
        if len(canvas_lines) < 10:
            raise CorpusError(f"{source}:{i + 1}: block {block_id!r} is truncated")
        try:
            canvas = Canvas.from_text("\n".join(canvas_lines) + "\n")
        except grid.GridError as exc:
            raise CorpusError(f"{source}:{i + 2}: block {block_id!r}: {exc}") from exc
        blocks.append((block_id, canvas))
        i += 11
    if not blocks:
        raise CorpusError(f"{source}:1: no pattern blocks found")
    return blocks


def load_corpus(path: str) -> PatternCorpus:
    with open(path, "r", encoding="utf-8") as fh:
        text = fh.read()
    blocks = parse_blocks(text, source=path)
    seen = set()
    for pid, _ in blocks:
        if pid in seen:
            raise CorpusError(f"{path}: duplicate pattern id {pid!r}")
        seen.add(pid)
    return PatternCorpus(tuple(blocks), path)


def default_corpus() -> PatternCorpus:
    """The corpus shipped with the package (14 patterns, P1..P14)."""
    ref = resources.files("patternbuilder.data").joinpath(DEFAULT_CORPUS_RESOURCE)
    blocks = parse_blocks(ref.read_text(encoding="utf-8"), source=str(ref))
    return PatternCorpus(tuple(blocks), str(ref))


def load_geometry(path: str) -> dict[str, Canvas]:
    """Load a replacement primitive geometry file (five named canvas blocks)."""
    with open(path, "r", encoding="utf-8") as fh:
        blocks = parse_blocks(fh.read(), source=path)
    return grid.validate_geometry(dict(blocks))
