"""Tests for BP decoding and ordered-statistics post-processing."""

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from biasqec.circulant import Protograph
from biasqec.decoder import (
    DecoderConfig,
    SyndromeDecoder,
    bp_decode,
    bp_osd_decode,
    osd_postprocess,
)
from biasqec.errors import DomainError, UnsatisfiableSyndromeError
from biasqec.gf2 import BinaryMatrix


def _rep3():
    """Circulant repetition code: rows 110, 011, 101."""
    return Protograph(3, [[(0, 1)]]).lift().to_array()


def _ring10():
    """Ten-bit ring code, distance 10; single errors decode exactly."""
    return Protograph(10, [[(0, 1)]]).lift().to_array()


def test_zero_syndrome_trivial():
    h = _rep3()
    hard, soft, converged = bp_decode(h, [0, 0, 0], [0.05, 0.05, 0.05])
    assert converged
    assert not hard.any()
    result = bp_osd_decode(h, [0, 0, 0], [0.05, 0.05, 0.05])
    assert not result.recovery.any()
    assert not result.used_osd
    assert result.converged


def test_rep3_weight_one_syndrome():
    h = _rep3()
    hard, soft, converged = bp_decode(h, [1, 0, 1], [0.1, 0.1, 0.1])
    assert converged
    assert list(hard) == [1, 0, 0]


def test_osd_weight_one_beats_complement():
    h = _rep3()
    recovery = osd_postprocess(h, [1, 0, 1], [0.1, 0.1, 0.1])
    assert list(recovery) == [1, 0, 0]


def test_single_error_recovery_sweep():
    """Every single-bit error below distance is recovered exactly."""
    h = _ring10()
    n = h.shape[1]
    priors = np.full(n, 0.05)
    for j in range(n):
        error = np.zeros(n, np.uint8)
        error[j] = 1
        syndrome = h @ error % 2
        result = bp_osd_decode(h, syndrome, priors)
        assert list(result.recovery) == list(error)
        assert not (h @ result.recovery % 2 ^ syndrome).any()


def test_syndrome_always_satisfied_after_osd():
    rng = np.random.default_rng(11)
    h = (rng.random((8, 20)) < 0.25).astype(np.uint8)
    priors = np.full(20, 0.08)
    cfg = DecoderConfig(max_iterations=4, osd_order=3)
    for _ in range(25):
        error = (rng.random(20) < 0.15).astype(np.uint8)
        syndrome = h @ error % 2
        result = bp_osd_decode(h, syndrome, priors, cfg)
        assert not (h @ result.recovery % 2 ^ syndrome).any()


def test_unsatisfiable_syndrome():
    h = np.array([[1, 1], [1, 1]], np.uint8)
    with pytest.raises(UnsatisfiableSyndromeError):
        osd_postprocess(h, [1, 0], [0.1, 0.1])
    with pytest.raises(UnsatisfiableSyndromeError):
        bp_osd_decode(h, [1, 0], [0.1, 0.1])


def test_degenerate_tie_resolved_deterministically():
    """Two weight-1 solutions; the stable column order picks bit 0."""
    h = np.array([[1, 1]], np.uint8)
    first = bp_osd_decode(h, [1], [0.2, 0.2])
    second = bp_osd_decode(h, [1], [0.2, 0.2])
    assert first.used_osd
    assert list(first.recovery) == [1, 0]
    assert list(first.recovery) == list(second.recovery)


def test_binary_matrix_input_matches_ndarray():
    h = _rep3()
    a = bp_osd_decode(h, [1, 1, 0], [0.1, 0.1, 0.1])
    b = bp_osd_decode(BinaryMatrix.from_array(h), [1, 1, 0], [0.1, 0.1, 0.1])
    assert list(a.recovery) == list(b.recovery)


def _soft_score(recovery, probs):
    q = np.clip(probs, 1e-12, 1.0 - 1e-12)
    weights = np.log((1.0 - q) / q)
    return float(weights[recovery.astype(bool)].sum())


@settings(max_examples=100, deadline=None)
@given(st.integers(0, 10**6))
def test_osd_order_monotone_budget(seed):
    """Raising the order never worsens the soft weight of the solution."""
    rng = np.random.default_rng(seed)
    h = (rng.random((6, 14)) < 0.3).astype(np.uint8)
    error = (rng.random(14) < 0.2).astype(np.uint8)
    syndrome = h @ error % 2
    if not syndrome.any():
        return
    soft = rng.uniform(0.01, 0.45, size=14)
    scores = []
    for order in (0, 1, 2, 4):
        rec = osd_postprocess(h, syndrome, soft, DecoderConfig(osd_order=order))
        assert not (h @ rec % 2 ^ syndrome).any()
        scores.append(_soft_score(rec, soft))
    assert all(a >= b - 1e-9 for a, b in zip(scores, scores[1:]))


def _greedy_basis(h, probs):
    """Columns kept by greedy independence in stable descending-prob order."""
    order = np.argsort(-probs, kind="stable")
    kept = []
    pivots = []
    for c in order:
        col = int("".join(str(int(b)) for b in h[:, c][::-1]), 2)
        for p in pivots:
            col = min(col, col ^ p)
        if col:
            pivots.append(col)
            kept.append(int(c))
    return set(kept)


def test_osd0_matches_exhaustive_coset_minimum():
    """With the true support inside the ranked basis, OSD-0 attains the
    minimum soft weight over the whole solution coset."""
    from itertools import product

    rng = np.random.default_rng(5)
    checked = 0
    for _ in range(40):
        h = (rng.random((5, 8)) < 0.35).astype(np.uint8)
        error = np.zeros(8, np.uint8)
        error[rng.choice(8, size=2, replace=False)] = 1
        syndrome = h @ error % 2
        if not syndrome.any():
            continue
        probs = np.where(error == 1, 0.4, 0.05)
        if not set(np.flatnonzero(error)) <= _greedy_basis(h, probs):
            continue
        rec = osd_postprocess(h, syndrome, probs, DecoderConfig(osd_order=0))
        # enumerate the full coset: rec + span(null(h))
        null_rows = _nullspace_rows(h)
        best = None
        for combo in product([0, 1], repeat=len(null_rows)):
            cand = rec.copy()
            for take, row in zip(combo, null_rows):
                if take:
                    cand ^= row
            score = _soft_score(cand, probs)
            best = score if best is None else min(best, score)
        assert _soft_score(rec, probs) <= best + 1e-9
        checked += 1
    assert checked >= 5


def _nullspace_rows(h):
    from biasqec.gf2 import BinaryMatrix, nullspace_basis

    basis = nullspace_basis(BinaryMatrix.from_array(h))
    return [v.to_array() for v in basis]


def test_extreme_priors_are_clamped():
    h = _rep3()
    result = bp_osd_decode(h, [1, 0, 1], [1.0, 0.0, 0.0])
    assert list(result.recovery) == [1, 0, 0]


def test_config_validation():
    with pytest.raises(DomainError):
        DecoderConfig(max_iterations=0)
    with pytest.raises(DomainError):
        DecoderConfig(osd_order=-1)
    with pytest.raises(DomainError):
        DecoderConfig(osd_order=16)
    with pytest.raises(DomainError):
        DecoderConfig(llr_clip=0.0)
    with pytest.raises(DomainError):
        DecoderConfig(schedule="serial")


def test_default_iteration_floor():
    dec = SyndromeDecoder(_rep3())
    assert dec._max_iter == 32
    dec = SyndromeDecoder(np.eye(500, dtype=np.uint8))
    assert dec._max_iter == 50


def test_decoder_instance_reusable():
    """Back-to-back decodes on one instance do not contaminate each other."""
    h = _ring10()
    dec = SyndromeDecoder(h)
    priors = np.full(10, 0.05)
    e1 = np.zeros(10, np.uint8)
    e1[3] = 1
    r1 = dec.decode(h @ e1 % 2, priors)
    r0 = dec.decode(np.zeros(10, np.uint8), priors)
    r1b = dec.decode(h @ e1 % 2, priors)
    assert not r0.recovery.any()
    assert list(r1.recovery) == list(r1b.recovery) == list(e1)
