"""Dynamic-programming kernels behind segmentation, decoding and alignment.

Every kernel exists twice: a plain-loop version compiled with numba, and a
vectorized pure-numpy twin. The dispatch names (``segmentation_trellis``,
``forward_logprob``, ``edit_cost_matrix``) pick the compiled version when
numba imports and ``SUBTILE_PURE_NUMPY`` is not set; otherwise the numpy
path is used. Both paths produce identical results (bit-identical for the
max/plus and integer recursions), which ``benchmarks/bench_kernels.py``
and the test suite verify.
"""

from __future__ import annotations

import os

import numpy as np

NEG_INF = -np.inf


def _env_flag(name: str) -> bool:
    return os.environ.get(name, "").strip().lower() in {"1", "true", "yes", "on"}


try:
    if _env_flag("SUBTILE_PURE_NUMPY"):
        raise ImportError("compiled kernels disabled via SUBTILE_PURE_NUMPY")
    from numba import njit

    HAVE_NUMBA = True
except ImportError:  # pragma: no cover - depends on environment
    njit = None
    HAVE_NUMBA = False


# ---------------------------------------------------------------------------
# Segmentation trellis
#
# k[t, j] = best log-score of having consumed the first j tokens by frame t
# (inclusive). Staying on token j costs max(blank, token) — the frame may
# re-emit the token or a blank; advancing consumes token j at frame t.
# ---------------------------------------------------------------------------


def _segmentation_trellis_loops(log_probs, token_ids, blank_index):
    T = log_probs.shape[0]
    L = token_ids.shape[0]
    k = np.full((T, L + 1), NEG_INF)
    k[0, 0] = log_probs[0, blank_index]
    if L > 0:
        k[0, 1] = log_probs[0, token_ids[0]]
    for t in range(1, T):
        blank_lp = log_probs[t, blank_index]
        k[t, 0] = k[t - 1, 0] + blank_lp
        for j in range(1, L + 1):
            tok_lp = log_probs[t, token_ids[j - 1]]
            hold = blank_lp if blank_lp > tok_lp else tok_lp
            stay = k[t - 1, j] + hold
            advance = k[t - 1, j - 1] + tok_lp
            k[t, j] = stay if stay >= advance else advance
    return k


def segmentation_trellis_numpy(log_probs, token_ids, blank_index):
    T = log_probs.shape[0]
    L = token_ids.shape[0]
    k = np.full((T, L + 1), NEG_INF)
    blank_lp = log_probs[:, blank_index]
    k[0, 0] = blank_lp[0]
    if L == 0:
        k[:, 0] = np.cumsum(blank_lp)
        return k
    tok_lp = log_probs[:, token_ids]  # (T, L)
    hold = np.maximum(tok_lp, blank_lp[:, None])
    k[0, 1] = tok_lp[0, 0]
    for t in range(1, T):
        k[t, 0] = k[t - 1, 0] + blank_lp[t]
        k[t, 1:] = np.maximum(k[t - 1, 1:] + hold[t], k[t - 1, :-1] + tok_lp[t])
    return k


# ---------------------------------------------------------------------------
# CTC forward pass over a blank-interleaved label
#
# state_ids holds [blank, l1, blank, l2, ..., blank]; can_skip[s] is true
# where the diagonal skip from s-2 is legal (distinct consecutive labels).
# Returns the total log-probability of emitting the label.
# ---------------------------------------------------------------------------


def _forward_logprob_loops(log_probs, state_ids, can_skip):
    T = log_probs.shape[0]
    S = state_ids.shape[0]
    alpha = np.full(S, NEG_INF)
    alpha[0] = log_probs[0, state_ids[0]]
    if S > 1:
        alpha[1] = log_probs[0, state_ids[1]]
    for t in range(1, T):
        for s in range(S - 1, -1, -1):
            acc = alpha[s]
            if s >= 1:
                acc = np.logaddexp(acc, alpha[s - 1])
            if s >= 2 and can_skip[s]:
                acc = np.logaddexp(acc, alpha[s - 2])
            alpha[s] = acc + log_probs[t, state_ids[s]]
    if S == 1:
        return alpha[0]
    return np.logaddexp(alpha[S - 1], alpha[S - 2])


def forward_logprob_numpy(log_probs, state_ids, can_skip):
    T = log_probs.shape[0]
    S = state_ids.shape[0]
    emit = log_probs[:, state_ids]  # (T, S)
    alpha = np.full(S, NEG_INF)
    alpha[0] = emit[0, 0]
    if S > 1:
        alpha[1] = emit[0, 1]
    for t in range(1, T):
        acc = alpha.copy()
        acc[1:] = np.logaddexp(acc[1:], alpha[:-1])
        if S > 2:
            skipped = np.logaddexp(acc[2:], alpha[:-2])
            acc[2:] = np.where(can_skip[2:], skipped, acc[2:])
        alpha = acc + emit[t]
    if S == 1:
        return float(alpha[0])
    return float(np.logaddexp(alpha[S - 1], alpha[S - 2]))


# ---------------------------------------------------------------------------
# Edit-cost matrix over two {C, B} masks
#
# Unit insertion/deletion, free match of identical symbols, and no
# cross-symbol substitution (modelled as an unreachable barrier cost).
# ---------------------------------------------------------------------------


def _edit_cost_matrix_loops(src, tgt):
    n = src.shape[0]
    m = tgt.shape[0]
    barrier = np.int32(n + m + 2)
    d = np.empty((n + 1, m + 1), np.int32)
    for j in range(m + 1):
        d[0, j] = j
    for i in range(1, n + 1):
        d[i, 0] = i
        for j in range(1, m + 1):
            best = d[i - 1, j] + 1
            left = d[i, j - 1] + 1
            if left < best:
                best = left
            if src[i - 1] == tgt[j - 1]:
                diag = d[i - 1, j - 1]
            else:
                diag = barrier
            if diag < best:
                best = diag
            d[i, j] = best
    return d


def edit_cost_matrix_numpy(src, tgt):
    n = src.shape[0]
    m = tgt.shape[0]
    barrier = np.int32(n + m + 2)
    d = np.empty((n + 1, m + 1), np.int32)
    cols = np.arange(m + 1, dtype=np.int32)
    d[0] = cols
    # Row recurrence with the left-neighbour chain closed by a prefix
    # minimum over skewed costs: row[j] = min_k<=j (cand[k] + (j - k)).
    skew = np.empty(m + 1, np.int32)
    for i in range(1, n + 1):
        diag = np.where(tgt == src[i - 1], d[i - 1, :-1], barrier)
        cand = np.minimum(diag, d[i - 1, 1:] + 1)
        skew[0] = i
        skew[1:] = cand - cols[1:]
        d[i] = np.minimum.accumulate(skew) + cols
    return d


if HAVE_NUMBA:
    segmentation_trellis_numba = njit(cache=True)(_segmentation_trellis_loops)
    forward_logprob_numba = njit(cache=True)(_forward_logprob_loops)
    edit_cost_matrix_numba = njit(cache=True)(_edit_cost_matrix_loops)

    segmentation_trellis = segmentation_trellis_numba
    forward_logprob = forward_logprob_numba
    edit_cost_matrix = edit_cost_matrix_numba
else:  # pragma: no cover - depends on environment
    segmentation_trellis_numba = None
    forward_logprob_numba = None
    edit_cost_matrix_numba = None

    segmentation_trellis = segmentation_trellis_numpy
    forward_logprob = forward_logprob_numpy
    edit_cost_matrix = edit_cost_matrix_numpy
