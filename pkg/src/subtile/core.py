"""Core subtitle types and marker-text handling.

Untimed content keeps its block/line structure through the inline markers
``<eob>`` (end of a subtitle block) and ``<eol>`` (line break inside a
block). Timed content is a document of indexed blocks. All times are
integer milliseconds; every type is immutable once constructed, so
documents can be processed in parallel freely.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Iterator

from .errors import BoundaryCountMismatch, NonMonotoneTimes

EOL = "<eol>"
EOB = "<eob>"

#: Largest clock value an SRT file can carry: 99:59:59,999.
MAX_TIME_MS = 99 * 3_600_000 + 59 * 60_000 + 59 * 1_000 + 999


@dataclass(frozen=True)
class SegmentedText:
    """Block/line structured text without timing.

    ``blocks`` is an ordered sequence of blocks, each a non-empty sequence
    of lines. Lines never contain the marker tokens themselves.
    """

    blocks: tuple[tuple[str, ...], ...]

    def __post_init__(self):
        blocks = tuple(tuple(lines) for lines in self.blocks)
        for lines in blocks:
            if not lines:
                raise ValueError("every block needs at least one line")
            for line in lines:
                if EOL in line or EOB in line:
                    raise ValueError(f"line contains a marker token: {line!r}")
        object.__setattr__(self, "blocks", blocks)

    def __len__(self) -> int:
        return len(self.blocks)


@dataclass(frozen=True)
class SubtitleBlock:
    """One timed subtitle cue: index, start/end in ms, and its text lines."""

    index: int
    start: int
    end: int
    lines: tuple[str, ...]

    def __post_init__(self):
        if self.index < 1:
            raise ValueError(f"block index must be positive, got {self.index}")
        if self.start < 0:
            raise ValueError(f"negative start time: {self.start}")
        if self.start > self.end:
            raise NonMonotoneTimes(
                f"block {self.index}: start {self.start} ms after end {self.end} ms",
                cue=self.index,
            )
        lines = tuple(self.lines)
        if not lines:
            raise ValueError(f"block {self.index} has no text lines")
        for line in lines:
            if not line.strip() or "\n" in line or "\r" in line:
                raise ValueError(f"block {self.index} has a blank or multi-line entry")
        object.__setattr__(self, "lines", lines)

    @property
    def duration_ms(self) -> int:
        return self.end - self.start


@dataclass(frozen=True)
class SubtitleDocument:
    """Ordered timed blocks: the in-memory form of an SRT file.

    Indices run 1..n and start times never decrease.
    """

    blocks: tuple[SubtitleBlock, ...]

    def __post_init__(self):
        blocks = tuple(self.blocks)
        for pos, block in enumerate(blocks, start=1):
            if block.index != pos:
                raise ValueError(
                    f"block indices must run 1..n: found {block.index} at position {pos}"
                )
        for prev, cur in zip(blocks, blocks[1:]):
            if cur.start < prev.start:
                raise NonMonotoneTimes(
                    f"block {cur.index} starts before block {prev.index}",
                    cue=cur.index,
                )
        object.__setattr__(self, "blocks", blocks)

    def __len__(self) -> int:
        return len(self.blocks)

    def __iter__(self) -> Iterator[SubtitleBlock]:
        return iter(self.blocks)

    def to_segmented(self) -> SegmentedText:
        """Drop timing, keeping the block/line structure."""
        return SegmentedText(tuple(block.lines for block in self.blocks))


def parse_marked(text: str) -> SegmentedText:
    """Parse marker-annotated text into blocks and lines.

    Blocks split on ``<eob>``, lines on ``<eol>``; surrounding whitespace
    of each line is trimmed. A trailing ``<eob>`` is optional, and empty
    blocks or lines produced by consecutive markers are dropped.
    """
    blocks = []
    for chunk in text.split(EOB):
        lines = tuple(ln for ln in (part.strip() for part in chunk.split(EOL)) if ln)
        if lines:
            blocks.append(lines)
    return SegmentedText(tuple(blocks))


def render_marked(seg: SegmentedText) -> str:
    """Render structured text back to marker form.

    Inverse of :func:`parse_marked` for whitespace-trimmed lines: lines are
    joined by ``" <eol> "`` and every block is terminated by ``" <eob>"``.
    """
    return " ".join(f" {EOL} ".join(lines) + f" {EOB}" for lines in seg.blocks)


def attach_times(
    seg: SegmentedText, boundaries: Iterable[tuple[int, int]]
) -> SubtitleDocument:
    """Combine untimed blocks with (start, end) pairs into a document."""
    bounds = list(boundaries)
    if len(bounds) != len(seg.blocks):
        raise BoundaryCountMismatch(
            f"{len(seg.blocks)} blocks but {len(bounds)} boundaries"
        )
    for pos, (start, end) in enumerate(bounds, start=1):
        if start > end:
            raise NonMonotoneTimes(f"boundary {pos}: start {start} after end {end}", cue=pos)
        if pos > 1 and start < bounds[pos - 2][0]:
            raise NonMonotoneTimes(f"boundary {pos} starts before boundary {pos - 1}", cue=pos)
    blocks = tuple(
        SubtitleBlock(index=i + 1, start=start, end=end, lines=lines)
        for i, (lines, (start, end)) in enumerate(zip(seg.blocks, bounds))
    )
    return SubtitleDocument(blocks)


def char_count(text: str | Iterable[str]) -> int:
    """Count displayed characters, spaces included.

    Accepts a single line or an iterable of lines; line breaks themselves
    contribute nothing, so a block's count is the sum over its lines. The
    same rule feeds both conformity measurement and timestamp projection.
    """
    if isinstance(text, str):
        return len(text)
    return sum(len(line) for line in text)
