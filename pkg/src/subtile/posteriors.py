"""Per-frame CTC posterior matrices and their on-disk encodings.

Two encodings are selected by file extension:

``.ctcp``
    Binary, little-endian: magic ``CTCP``, u32 version (=1), u32 frame
    count T, u32 vocabulary size V, u32 blank index, binary32 frame
    duration in ms, u32 byte length of the vocabulary blob, the blob
    (UTF-8 entries joined by ``\\n``), then T*V binary32 natural-log
    probabilities, row-major by frame.

``.json``
    Object with ``frame_duration_ms``, ``blank_index``, ``vocab`` and
    ``log_probs`` (array of arrays); meant for hand-written fixtures.
"""

from __future__ import annotations

import json
import struct
from dataclasses import dataclass
from functools import cached_property
from pathlib import Path

import numpy as np

from .errors import PosteriorFormatError, UnknownTokenError

_MAGIC = b"CTCP"
_VERSION = 1
_HEADER = struct.Struct("<4sIIIIfI")
_ROW_SUM_TOL = 1e-4


@dataclass(frozen=True)
class PosteriorMatrix:
    """T x V natural-log probabilities with a blank and frame metadata."""

    log_probs: np.ndarray
    vocab: tuple[str, ...]
    blank_index: int
    frame_duration_ms: float

    def __post_init__(self):
        lp = np.asarray(self.log_probs, dtype=np.float64)
        if lp.ndim != 2 or lp.shape[0] < 1 or lp.shape[1] < 2:
            raise ValueError(f"log_probs must be (T>=1, V>=2), got {lp.shape}")
        vocab = tuple(self.vocab)
        if len(vocab) != lp.shape[1]:
            raise ValueError(
                f"vocabulary size {len(vocab)} does not match V={lp.shape[1]}"
            )
        if len(set(vocab)) != len(vocab):
            raise ValueError("vocabulary entries must be unique")
        if not 0 <= self.blank_index < lp.shape[1]:
            raise ValueError(f"blank index {self.blank_index} outside [0, {lp.shape[1]})")
        if not self.frame_duration_ms > 0:
            raise ValueError(f"frame duration must be positive, got {self.frame_duration_ms}")
        row_sums = np.exp(lp).sum(axis=1)
        worst = float(np.abs(row_sums - 1.0).max())
        if worst > _ROW_SUM_TOL:
            raise ValueError(
                f"rows must exponentiate-sum to 1 within {_ROW_SUM_TOL}, worst off by {worst:.2e}"
            )
        lp.flags.writeable = False
        object.__setattr__(self, "log_probs", lp)
        object.__setattr__(self, "vocab", vocab)

    @property
    def num_frames(self) -> int:
        return self.log_probs.shape[0]

    @property
    def vocab_size(self) -> int:
        return self.log_probs.shape[1]

    @cached_property
    def _vocab_index(self) -> dict[str, int]:
        return {token: i for i, token in enumerate(self.vocab)}

    def token_ids(self, tokens) -> np.ndarray:
        """Map token strings to vocabulary indices.

        Raises :class:`UnknownTokenError` naming the first missing token.
        """
        index = self._vocab_index
        ids = np.empty(len(tokens), dtype=np.int64)
        for i, token in enumerate(tokens):
            try:
                ids[i] = index[token]
            except KeyError:
                raise UnknownTokenError(token) from None
        return ids


def save_posteriors(matrix: PosteriorMatrix, path: str | Path) -> None:
    """Write a matrix in the encoding selected by the path's extension."""
    path = Path(path)
    if path.suffix == ".ctcp":
        for token in matrix.vocab:
            if "\n" in token:
                raise ValueError(f"vocabulary entry contains a newline: {token!r}")
        blob = "\n".join(matrix.vocab).encode("utf-8")
        header = _HEADER.pack(
            _MAGIC,
            _VERSION,
            matrix.num_frames,
            matrix.vocab_size,
            matrix.blank_index,
            float(matrix.frame_duration_ms),
            len(blob),
        )
        body = matrix.log_probs.astype("<f4").tobytes(order="C")
        path.write_bytes(header + blob + body)
    elif path.suffix == ".json":
        payload = {
            "frame_duration_ms": matrix.frame_duration_ms,
            "blank_index": matrix.blank_index,
            "vocab": list(matrix.vocab),
            "log_probs": matrix.log_probs.tolist(),
        }
        path.write_text(json.dumps(payload), encoding="utf-8")
    else:
        raise PosteriorFormatError(f"unknown posterior extension: {path.suffix!r}")


def load_posteriors(path: str | Path) -> PosteriorMatrix:
    """Read a posterior file (.ctcp or .json)."""
    path = Path(path)
    if path.suffix == ".ctcp":
        return _load_ctcp(path)
    if path.suffix == ".json":
        return _load_json(path)
    raise PosteriorFormatError(f"unknown posterior extension: {path.suffix!r}")


def _load_ctcp(path: Path) -> PosteriorMatrix:
    raw = path.read_bytes()
    if len(raw) < _HEADER.size:
        raise PosteriorFormatError(f"{path.name}: truncated header")
    magic, version, frames, vocab_size, blank, frame_ms, blob_len = _HEADER.unpack_from(raw)
    if magic != _MAGIC:
        raise PosteriorFormatError(f"{path.name}: bad magic {magic!r}")
    if version != _VERSION:
        raise PosteriorFormatError(f"{path.name}: unsupported version {version}")
    offset = _HEADER.size
    if len(raw) < offset + blob_len:
        raise PosteriorFormatError(f"{path.name}: truncated vocabulary")
    try:
        vocab = raw[offset : offset + blob_len].decode("utf-8").split("\n")
    except UnicodeDecodeError:
        raise PosteriorFormatError(f"{path.name}: vocabulary is not UTF-8") from None
    offset += blob_len
    expected = frames * vocab_size * 4
    if len(raw) - offset != expected:
        raise PosteriorFormatError(
            f"{path.name}: expected {expected} probability bytes, found {len(raw) - offset}"
        )
    if len(vocab) != vocab_size:
        raise PosteriorFormatError(
            f"{path.name}: header says {vocab_size} tokens, blob holds {len(vocab)}"
        )
    lp = np.frombuffer(raw, dtype="<f4", count=frames * vocab_size, offset=offset)
    lp = lp.astype(np.float64).reshape(frames, vocab_size)
    try:
        return PosteriorMatrix(
            log_probs=lp,
            vocab=tuple(vocab),
            blank_index=blank,
            frame_duration_ms=float(frame_ms),
        )
    except ValueError as exc:
        raise PosteriorFormatError(f"{path.name}: {exc}") from None


def _load_json(path: Path) -> PosteriorMatrix:
    try:
        payload = json.loads(path.read_text(encoding="utf-8"))
    except (json.JSONDecodeError, UnicodeDecodeError) as exc:
        raise PosteriorFormatError(f"{path.name}: {exc}") from None
    try:
        return PosteriorMatrix(
            log_probs=np.asarray(payload["log_probs"], dtype=np.float64),
            vocab=tuple(payload["vocab"]),
            blank_index=int(payload["blank_index"]),
            frame_duration_ms=float(payload["frame_duration_ms"]),
        )
    except KeyError as exc:
        raise PosteriorFormatError(f"{path.name}: missing field {exc}") from None
    except (TypeError, ValueError) as exc:
        raise PosteriorFormatError(f"{path.name}: {exc}") from None
