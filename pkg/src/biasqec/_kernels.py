"""numba kernels for the hot loops.

Distance sweeps over packed kernel bases live here; the decoder's message
passing and ordered-statistics elimination kernels share the module so the
whole package has a single compilation unit to warm up.
"""

import math

import numpy as np
from numba import njit

U1 = np.uint64(1)
U0 = np.uint64(0)

_M1 = np.uint64(0x5555555555555555)
_M2 = np.uint64(0x3333333333333333)
_M4 = np.uint64(0x0F0F0F0F0F0F0F0F)
_H01 = np.uint64(0x0101010101010101)


@njit(cache=True, inline="always")
def _popcount(x):
    x = x - ((x >> U1) & _M1)
    x = (x & _M2) + ((x >> np.uint64(2)) & _M2)
    x = (x + (x >> np.uint64(4))) & _M4
    return (x * _H01) >> np.uint64(56)


@njit(cache=True)
def min_kernel_weight(basis):
    """Minimum Hamming weight over all nonzero GF(2) combinations.

    basis: (k, w) uint64 packed rows, k >= 1. Walks the 2^k - 1 combinations
    in Gray order so each step is one row XOR.
    """
    k, w = basis.shape
    acc = np.zeros(w, np.uint64)
    best = np.int64(1) << np.int64(60)
    for step in range(1, 1 << k):
        j = 0
        while (step >> j) & 1 == 0:
            j += 1
        for t in range(w):
            acc[t] ^= basis[j, t]
        wt = np.int64(0)
        for t in range(w):
            wt += np.int64(_popcount(acc[t]))
        if wt < best:
            best = wt
    return best


@njit(cache=True)
def min_labeled_kernel_weight(basis, labels):
    """Minimum weight over combinations whose XORed label is nonzero.

    labels[i] packs up to 64 label bits for basis row i. Returns -1 when
    every combination has label zero.
    """
    k, w = basis.shape
    acc = np.zeros(w, np.uint64)
    lab = U0
    best = np.int64(1) << np.int64(60)
    found = False
    for step in range(1, 1 << k):
        j = 0
        while (step >> j) & 1 == 0:
            j += 1
        for t in range(w):
            acc[t] ^= basis[j, t]
        lab ^= labels[j]
        if lab != U0:
            wt = np.int64(0)
            for t in range(w):
                wt += np.int64(_popcount(acc[t]))
            if wt < best:
                best = wt
                found = True
    if not found:
        return np.int64(-1)
    return best


@njit(cache=True, nogil=True)
def bp_product_sum(
    chk_ptr, chk_col, bit_ptr, bit_edge, syndrome, lam, max_iter, clip,
    mu, mv, pre, tt, post, hard,
):
    """Flooding product-sum belief propagation on a parity-check graph.

    Edges are grouped by check in (chk_ptr, chk_col); bit_edge lists the
    same edge ids grouped by bit. lam holds prior log-likelihood ratios.
    Writes posterior LLRs into post and the hard decision into hard.
    Returns the iteration count on convergence, 0 otherwise.
    """
    m = chk_ptr.shape[0] - 1
    n = bit_ptr.shape[0] - 1
    e_total = chk_col.shape[0]
    tmax = 1.0 - 1e-12
    for e in range(e_total):
        mu[e] = lam[chk_col[e]]
    for it in range(1, max_iter + 1):
        for c in range(m):
            lo = chk_ptr[c]
            hi = chk_ptr[c + 1]
            sgn = -1.0 if syndrome[c] else 1.0
            prod = 1.0
            for e in range(lo, hi):
                pre[e] = prod
                t = math.tanh(0.5 * mu[e])
                tt[e] = t
                prod *= t
            suf = 1.0
            for e in range(hi - 1, lo - 1, -1):
                val = pre[e] * suf
                if val > tmax:
                    val = tmax
                elif val < -tmax:
                    val = -tmax
                msg = sgn * 2.0 * math.atanh(val)
                if msg > clip:
                    msg = clip
                elif msg < -clip:
                    msg = -clip
                mv[e] = msg
                suf *= tt[e]
        for j in range(n):
            s = lam[j]
            for idx in range(bit_ptr[j], bit_ptr[j + 1]):
                s += mv[bit_edge[idx]]
            post[j] = s
            hard[j] = 1 if s < 0.0 else 0
        for j in range(n):
            for idx in range(bit_ptr[j], bit_ptr[j + 1]):
                e = bit_edge[idx]
                v = post[j] - mv[e]
                if v > clip:
                    v = clip
                elif v < -clip:
                    v = -clip
                mu[e] = v
        ok = True
        for c in range(m):
            par = np.uint8(0)
            for e in range(chk_ptr[c], chk_ptr[c + 1]):
                par ^= hard[chk_col[e]]
            if par != syndrome[c]:
                ok = False
                break
        if ok:
            return it
    return 0


@njit(cache=True, nogil=True)
def gf2_rref_inplace(words, n_cols, pivots):
    """Full row-reduce of packed rows over columns 0..n_cols-1.

    Any columns beyond n_cols (augmented syndrome bits) ride along in the
    row XORs but never become pivots. pivots[r] receives the pivot column
    of reduced row r. Returns the rank.
    """
    m, w = words.shape
    r = 0
    for c in range(n_cols):
        if r == m:
            break
        wi = c >> 6
        bit = U1 << np.uint64(c & 63)
        pr = -1
        for i in range(r, m):
            if words[i, wi] & bit:
                pr = i
                break
        if pr < 0:
            continue
        if pr != r:
            for t in range(w):
                tmp = words[pr, t]
                words[pr, t] = words[r, t]
                words[r, t] = tmp
        for i in range(m):
            if i != r and (words[i, wi] & bit):
                for t in range(w):
                    words[i, t] ^= words[r, t]
        pivots[r] = c
        r += 1
    return r


@njit(cache=True, nogil=True)
def osd_gray_sweep(a_cols, base, w_pivot, w_window, order, out_x):
    """Exhaustive pattern sweep for ordered-statistics post-processing.

    base packs the pivot-solution bits for the all-zero pattern; a_cols[f]
    packs the pivot-bit flips caused by window column f. Sweeps all
    2^order patterns in Gray order, scoring each candidate by its total
    soft weight, and writes the winning pivot bits into out_x. Returns
    the winning pattern mask. Ties keep the earliest pattern.
    """
    wr = base.shape[0]
    cur = np.empty(wr, np.uint64)
    for t in range(wr):
        cur[t] = base[t]
        out_x[t] = base[t]
    best = 0.0
    for t in range(wr):
        word = cur[t]
        while word != U0:
            low = word & (~word + U1)
            bpos = 0
            probe = low
            while probe != U1:
                probe >>= U1
                bpos += 1
            best += w_pivot[(t << 6) + bpos]
            word ^= low
    best_mask = np.int64(0)
    tmask = np.int64(0)
    tweight = 0.0
    for k in range(1, 1 << order):
        f = 0
        while (k >> f) & 1 == 0:
            f += 1
        fbit = np.int64(1) << np.int64(f)
        tmask ^= fbit
        if tmask & fbit:
            tweight += w_window[f]
        else:
            tweight -= w_window[f]
        for t in range(wr):
            cur[t] ^= a_cols[f, t]
        sc = tweight
        for t in range(wr):
            word = cur[t]
            while word != U0:
                low = word & (~word + U1)
                bpos = 0
                probe = low
                while probe != U1:
                    probe >>= U1
                    bpos += 1
                sc += w_pivot[(t << 6) + bpos]
                word ^= low
        if sc < best - 1e-12:
            best = sc
            best_mask = tmask
            for t in range(wr):
                out_x[t] = cur[t]
    return best_mask
