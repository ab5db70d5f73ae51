"""Bit-exact SubRip (.srt) parsing and emission.

The parser is liberal: UTF-8 with optional BOM, LF or CRLF endings, comma
or period millisecond separators, and non-consecutive cue indices (the
document is reindexed 1..n and the result flags it). The emitter is
canonical: no BOM, LF endings, comma separator, zero-padded clocks,
exactly one blank line between cues, and a single trailing newline.
"""

from __future__ import annotations

import re
from dataclasses import dataclass

from .core import MAX_TIME_MS, SubtitleBlock, SubtitleDocument
from .errors import (
    EmptyCueError,
    NonMonotoneTimes,
    SrtParseError,
    TimeParseError,
    TimeRangeError,
)

_TIME = r"(\d{1,2}):(\d{1,2}):(\d{1,2})[,.](\d{3})"
_TIME_LINE_RE = re.compile(rf"^\s*{_TIME}\s*-->\s*{_TIME}\s*$")
_INDEX_RE = re.compile(r"^-?\d+$")


@dataclass(frozen=True)
class SrtParseResult:
    """Parsed document plus a flag for cue indices that needed rewriting."""

    document: SubtitleDocument
    reindexed: bool


def _time_to_ms(h: str, m: str, s: str, ms: str, cue: int) -> int:
    minutes, seconds = int(m), int(s)
    if minutes > 59 or seconds > 59:
        raise TimeParseError(f"cue {cue}: minutes/seconds out of range", cue=cue)
    return ((int(h) * 60 + minutes) * 60 + seconds) * 1000 + int(ms)


def parse_srt(raw: bytes) -> SrtParseResult:
    """Parse the bytes of an .srt file.

    Raises a typed error (never an unhandled one) on malformed input:
    :class:`TimeParseError` for a bad time line, :class:`EmptyCueError`
    for a cue without text, :class:`NonMonotoneTimes` for reversed or
    regressing times, :class:`SrtParseError` otherwise.
    """
    try:
        text = raw.decode("utf-8")
    except UnicodeDecodeError as exc:
        raise SrtParseError(f"not valid UTF-8: {exc}") from None
    if text.startswith("﻿"):
        text = text[1:]

    lines = text.splitlines()
    cues: list[tuple[int | None, int, int, list[str]]] = []
    cue_no = 0
    i = 0
    while i < len(lines):
        if not lines[i].strip():
            i += 1
            continue
        cue_no += 1
        head = lines[i].strip()
        index: int | None = None
        if _INDEX_RE.match(head):
            index = int(head)
            i += 1
            if i >= len(lines):
                raise TimeParseError(f"cue {cue_no}: missing time line", cue=cue_no)
            head = lines[i].strip()
        match = _TIME_LINE_RE.match(head)
        if not match:
            raise TimeParseError(f"cue {cue_no}: bad time line {head!r}", cue=cue_no)
        start = _time_to_ms(*match.groups()[:4], cue=cue_no)
        end = _time_to_ms(*match.groups()[4:], cue=cue_no)
        if start > end:
            raise NonMonotoneTimes(
                f"cue {cue_no}: start {start} ms after end {end} ms", cue=cue_no
            )
        i += 1
        body: list[str] = []
        while i < len(lines) and lines[i].strip():
            body.append(lines[i])
            i += 1
        if not body:
            raise EmptyCueError(f"cue {cue_no}: no text", cue=cue_no)
        if cues and start < cues[-1][1]:
            raise NonMonotoneTimes(
                f"cue {cue_no}: starts before cue {cue_no - 1}", cue=cue_no
            )
        cues.append((index, start, end, body))

    reindexed = any(
        given != pos for pos, (given, _, _, _) in enumerate(cues, start=1)
    )
    try:
        blocks = tuple(
            SubtitleBlock(index=pos, start=start, end=end, lines=tuple(body))
            for pos, (_, start, end, body) in enumerate(cues, start=1)
        )
        document = SubtitleDocument(blocks)
    except ValueError as exc:
        raise SrtParseError(str(exc)) from None
    return SrtParseResult(document=document, reindexed=reindexed)


def format_time(ms: int) -> str:
    """Render milliseconds as a zero-padded ``HH:MM:SS,mmm`` clock."""
    if ms < 0 or ms > MAX_TIME_MS:
        raise TimeRangeError(f"{ms} ms is outside the SRT clock range")
    seconds, millis = divmod(ms, 1000)
    minutes, secs = divmod(seconds, 60)
    hours, mins = divmod(minutes, 60)
    return f"{hours:02d}:{mins:02d}:{secs:02d},{millis:03d}"


def emit_srt(doc: SubtitleDocument) -> bytes:
    """Emit the canonical bytes of a document.

    ``parse_srt(emit_srt(d)).document == d`` for every valid document, and
    re-emitting a parsed file is idempotent.
    """
    chunks = []
    for block in doc.blocks:
        clock = f"{format_time(block.start)} --> {format_time(block.end)}"
        chunks.append(f"{block.index}\n{clock}\n" + "\n".join(block.lines))
    if not chunks:
        return b""
    return ("\n\n".join(chunks) + "\n").encode("utf-8")
