"""Syndrome decoding: product-sum belief propagation plus ordered statistics.

Belief propagation runs on the Tanner graph of a binary parity-check
matrix with per-bit priors and a parallel (flooding) schedule.  When BP
fails to reach a codeword of the syndrome coset, ordered-statistics
decoding (OSD) ranks columns by the BP posteriors, picks an independent
basis greedily, and solves for a coset element exactly; higher orders
sweep error patterns over the most suspect non-basis columns and keep
the solution of least soft weight.

Every returned recovery satisfies H @ recovery = syndrome; an
inconsistent syndrome raises UnsatisfiableSyndromeError instead.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from . import _kernels
from .errors import DomainError, UnsatisfiableSyndromeError

_PRIOR_FLOOR = 1e-12
_OSD_ORDER_CAP = 15


@dataclass(frozen=True)
class DecoderConfig:
    """Knobs for BP and the OSD fallback.

    max_iterations of None resolves to max(32, n_bits // 10) at decode
    time.  osd_order 0 solves on the ranked basis alone; order w sweeps
    all 2^w patterns over the w most error-prone non-basis columns.
    """

    max_iterations: int | None = None
    osd_order: int = 0
    llr_clip: float = 30.0
    schedule: str = "parallel"

    def __post_init__(self):
        if self.max_iterations is not None and self.max_iterations < 1:
            raise DomainError(f"max_iterations must be >= 1, got {self.max_iterations}")
        if self.osd_order < 0 or self.osd_order > _OSD_ORDER_CAP:
            raise DomainError(
                f"osd_order must lie in [0, {_OSD_ORDER_CAP}], got {self.osd_order}"
            )
        if not self.llr_clip > 0.0:
            raise DomainError(f"llr_clip must be positive, got {self.llr_clip}")
        if self.schedule != "parallel":
            raise DomainError(f"only the parallel schedule exists, got {self.schedule!r}")


@dataclass(frozen=True)
class DecodeResult:
    recovery: np.ndarray
    converged: bool
    soft_probs: np.ndarray
    used_osd: bool


def _as_dense(h) -> np.ndarray:
    if hasattr(h, "to_array"):
        h = h.to_array()
    arr = np.ascontiguousarray(np.asarray(h, dtype=np.uint8) & 1)
    if arr.ndim != 2:
        raise DomainError(f"parity-check matrix must be 2-D, got shape {arr.shape}")
    return arr


def _as_bits(v, length: int, what: str) -> np.ndarray:
    if hasattr(v, "to_array"):
        v = v.to_array()
    arr = np.asarray(v, dtype=np.uint8) & 1
    if arr.shape != (length,):
        raise DomainError(f"{what} must have length {length}, got shape {arr.shape}")
    return arr


class SyndromeDecoder:
    """Reusable decoder for one parity-check matrix.

    Owns its message buffers, so concurrent trials need one instance
    each; the matrix itself is shared read-only.
    """

    def __init__(self, h, cfg: DecoderConfig | None = None):
        self.cfg = cfg if cfg is not None else DecoderConfig()
        self.h = _as_dense(h)
        m, n = self.h.shape
        self.m = m
        self.n = n
        rows, cols = np.nonzero(self.h)
        e = cols.shape[0]
        self._chk_ptr = np.zeros(m + 1, np.int64)
        np.cumsum(np.bincount(rows, minlength=m), out=self._chk_ptr[1:])
        self._chk_col = cols.astype(np.int64)
        by_bit = np.argsort(cols, kind="stable")
        self._bit_edge = by_bit.astype(np.int64)
        self._bit_ptr = np.zeros(n + 1, np.int64)
        np.cumsum(np.bincount(cols, minlength=n), out=self._bit_ptr[1:])
        self._mu = np.empty(e, np.float64)
        self._mv = np.empty(e, np.float64)
        self._pre = np.empty(e, np.float64)
        self._tt = np.empty(e, np.float64)
        self._post = np.empty(n, np.float64)
        self._hard = np.empty(n, np.uint8)
        self._max_iter = (
            self.cfg.max_iterations
            if self.cfg.max_iterations is not None
            else max(32, n // 10)
        )
        self._aug_words = (n + 1 + 63) // 64
        self._pivots = np.empty(m, np.int64)

    def bp(self, syndrome, priors) -> tuple[np.ndarray, np.ndarray, bool]:
        """One BP run; returns (hard, posterior probabilities, converged)."""
        s = _as_bits(syndrome, self.m, "syndrome")
        lam = self._llr(priors)
        iters = _kernels.bp_product_sum(
            self._chk_ptr,
            self._chk_col,
            self._bit_ptr,
            self._bit_edge,
            s,
            lam,
            self._max_iter,
            self.cfg.llr_clip,
            self._mu,
            self._mv,
            self._pre,
            self._tt,
            self._post,
            self._hard,
        )
        soft = 0.5 * (1.0 - np.tanh(0.5 * self._post))
        return self._hard.copy(), soft, iters > 0

    def osd(self, syndrome, soft_probs) -> np.ndarray:
        """Ordered-statistics solve; always satisfies the syndrome."""
        s = _as_bits(syndrome, self.m, "syndrome")
        probs = np.clip(
            np.asarray(soft_probs, dtype=np.float64), _PRIOR_FLOOR, 1.0 - _PRIOR_FLOOR
        )
        if probs.shape != (self.n,):
            raise DomainError(f"soft vector must have length {self.n}")
        if not s.any():
            return np.zeros(self.n, np.uint8)

        order = np.argsort(-probs, kind="stable")
        aug = np.empty((self.m, self.n + 1), np.uint8)
        aug[:, : self.n] = self.h[:, order]
        aug[:, self.n] = s
        packed = np.packbits(aug, axis=1, bitorder="little")
        words = np.zeros((self.m, self._aug_words), np.uint64)
        words.view(np.uint8)[:, : packed.shape[1]] = packed

        pivots = self._pivots
        pivots[:] = -1
        rank = _kernels.gf2_rref_inplace(words, self.n, pivots)
        aug_wi, aug_bit = self.n >> 6, np.uint64(1) << np.uint64(self.n & 63)
        if rank < self.m and (words[rank:, aug_wi] & aug_bit).any():
            raise UnsatisfiableSyndromeError(
                "syndrome lies outside the column space of H"
            )

        piv = pivots[:rank]
        x_perm = np.zeros(self.n, np.uint8)
        base_bits = ((words[:rank, aug_wi] >> np.uint64(self.n & 63)) & 1).astype(
            np.uint8
        )

        window = self._osd_window(piv, rank)
        if window.shape[0] == 0:
            x_perm[piv] = base_bits
        else:
            weights = np.log((1.0 - probs) / probs)[order]
            wr = (rank + 63) // 64
            base = self._pack_bits(base_bits, wr)
            a_cols = np.zeros((window.shape[0], wr), np.uint64)
            for f, c in enumerate(window):
                col_bits = ((words[:rank, c >> 6] >> np.uint64(c & 63)) & 1).astype(
                    np.uint8
                )
                a_cols[f] = self._pack_bits(col_bits, wr)
            w_pivot = np.zeros(wr * 64, np.float64)
            w_pivot[:rank] = weights[piv]
            w_window = weights[window].astype(np.float64)
            out_x = np.zeros(wr, np.uint64)
            mask = _kernels.osd_gray_sweep(
                a_cols, base, w_pivot, w_window, window.shape[0], out_x
            )
            sol_bits = np.unpackbits(
                out_x.view(np.uint8), count=rank, bitorder="little"
            )
            x_perm[piv] = sol_bits
            for f, c in enumerate(window):
                if (mask >> f) & 1:
                    x_perm[c] = 1

        recovery = np.zeros(self.n, np.uint8)
        recovery[order] = x_perm
        return recovery

    def decode(self, syndrome, priors) -> DecodeResult:
        hard, soft, converged = self.bp(syndrome, priors)
        if converged:
            return DecodeResult(hard, True, soft, False)
        recovery = self.osd(syndrome, soft)
        return DecodeResult(recovery, False, soft, True)

    def _llr(self, priors) -> np.ndarray:
        p = np.clip(
            np.asarray(priors, dtype=np.float64), _PRIOR_FLOOR, 1.0 - _PRIOR_FLOOR
        )
        if p.shape != (self.n,):
            raise DomainError(f"priors must have length {self.n}, got shape {p.shape}")
        return np.clip(np.log((1.0 - p) / p), -self.cfg.llr_clip, self.cfg.llr_clip)

    def _osd_window(self, piv: np.ndarray, rank: int) -> np.ndarray:
        if self.cfg.osd_order == 0:
            return np.empty(0, np.int64)
        in_basis = np.zeros(self.n, bool)
        in_basis[piv] = True
        spare = np.flatnonzero(~in_basis)
        return spare[: min(self.cfg.osd_order, spare.shape[0])].astype(np.int64)

    @staticmethod
    def _pack_bits(bits: np.ndarray, n_words: int) -> np.ndarray:
        out = np.zeros(n_words, np.uint64)
        packed = np.packbits(bits, bitorder="little")
        out.view(np.uint8)[: packed.shape[0]] = packed
        return out


def bp_decode(h, syndrome, priors, cfg: DecoderConfig | None = None):
    """Belief propagation alone; returns (hard, soft, converged)."""
    return SyndromeDecoder(h, cfg).bp(syndrome, priors)


def osd_postprocess(h, syndrome, soft, cfg: DecoderConfig | None = None) -> np.ndarray:
    return SyndromeDecoder(h, cfg).osd(syndrome, soft)


def bp_osd_decode(h, syndrome, priors, cfg: DecoderConfig | None = None) -> DecodeResult:
    """BP first, OSD fallback; the recovery always satisfies the syndrome."""
    return SyndromeDecoder(h, cfg).decode(syndrome, priors)
