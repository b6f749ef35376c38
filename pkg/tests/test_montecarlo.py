"""Tests for decoding trials, aggregation, and the results CSV."""

import math

import numpy as np
import pytest

from biasqec.codes import twisted_toric_css, xzzx_twisted_toric
from biasqec.decoder import DecoderConfig
from biasqec.errors import DomainError
from biasqec.gf2 import BinaryVector, in_rowspace
from biasqec.montecarlo import (
    ExperimentResult,
    bias_sweep,
    channel_update,
    format_csv,
    read_csv,
    result_row,
    run_experiment,
    run_injected,
    run_trial,
    trial_rng,
    word_error_rate,
    word_error_stderr,
    write_csv,
)
from biasqec.noise import BiasSpec, PauliChannel, channel_from_bias

CFG = DecoderConfig(max_iterations=20)


def test_channel_update_depolarising():
    p = 0.09
    ch = PauliChannel(p / 3, p / 3, p / 3)
    quiet = channel_update(np.zeros(4, np.uint8), ch, 4)
    assert np.allclose(quiet, (p / 3) / (1 - 2 * p / 3))
    flagged = channel_update(np.ones(4, np.uint8), ch, 4)
    assert np.allclose(flagged, 0.5)


def test_channel_update_no_y_mass():
    """An X hit with py = 0 rules out Z; the prior clamps at the floor."""
    ch = PauliChannel(0.1, 0.0, 0.05)
    out = channel_update(np.ones(3, np.uint8), ch, 3)
    assert np.allclose(out, 1e-12)


def test_channel_update_sector_swap():
    ch = PauliChannel(px=0.02, py=0.01, pz=0.06)
    out = channel_update(np.zeros(2, np.uint8), ch, 1)
    assert math.isclose(out[0], 0.06 / (1 - 0.02 - 0.01))
    assert math.isclose(out[1], 0.02 / (1 - 0.06 - 0.01))


def test_channel_update_reverse_direction():
    ch = PauliChannel(px=0.02, py=0.01, pz=0.06)
    out = channel_update(np.zeros(2, np.uint8), ch, 2, first_axis="Z")
    assert math.isclose(out[0], 0.02 / (1 - 0.06 - 0.01))
    out = channel_update(np.ones(2, np.uint8), ch, 2, first_axis="Z")
    assert math.isclose(out[0], 0.01 / 0.07)


def test_zero_noise_always_succeeds():
    code = xzzx_twisted_toric(3, 2)
    ch = PauliChannel(0.0, 0.0, 0.0)
    rng = np.random.default_rng(0)
    for _ in range(5):
        outcome = run_trial(code, ch, CFG, update=False, rng=rng)
        assert outcome.success
        assert outcome.residual_weight == 0
        assert outcome.min_logical_weight_observed is None


def test_single_x_errors_corrected():
    code = xzzx_twisted_toric(3, 2)
    ch = channel_from_bias(BiasSpec(axis="Z", eta=0.5, p=0.05))
    for j in range(code.n):
        e_x = np.zeros(code.n, np.uint8)
        e_x[j] = 1
        outcome = run_injected(code, ch, CFG, e_x, np.zeros(code.n, np.uint8))
        assert outcome.success


def test_injected_logical_fails():
    """A pure logical has zero syndrome, so decoding leaves it intact."""
    code = twisted_toric_css(3, 2)
    ch = channel_from_bias(BiasSpec(axis="Z", eta=0.5, p=0.05))
    logical = code.lx.to_array()[0]
    outcome = run_injected(code, ch, CFG, logical, np.zeros(code.n, np.uint8))
    assert not outcome.success
    assert outcome.min_logical_weight_observed == int(logical.sum())


def test_residual_classification_matches_rowspace():
    """success iff both residuals lie in the stabiliser rowspaces."""
    code = twisted_toric_css(3, 2)
    ch = channel_from_bias(BiasSpec(axis="Z", eta=1.0, p=0.18))
    rng = np.random.default_rng(42)
    from biasqec.montecarlo import _Engine

    engine = _Engine(code, ch, CFG, update=False)
    disagreements = 0
    for _ in range(40):
        e_x = (rng.random(code.n) < 0.12).astype(np.uint8)
        e_z = (rng.random(code.n) < 0.12).astype(np.uint8)
        outcome = engine.trial(e_x, e_z)
        r_x = engine._round_x(e_x, engine.priors.px_eff)
        r_z = engine._round_z(e_z, engine.priors.pz_eff)
        ok_x = in_rowspace(code.hx, BinaryVector.from_bits((r_x ^ e_x).tolist()))
        ok_z = in_rowspace(code.hz, BinaryVector.from_bits((r_z ^ e_z).tolist()))
        if outcome.success != (ok_x and ok_z):
            disagreements += 1
    assert disagreements == 0


def test_word_error_rate_limits():
    assert word_error_rate(0.0, 18) == 0.0
    assert word_error_rate(0.37, 1) == 0.37
    p_l = 1e-4
    assert math.isclose(word_error_rate(p_l, 18), p_l / 18, rel_tol=0.01)
    assert word_error_rate(1.0, 7) == 1.0


def test_word_error_stderr_edges():
    assert word_error_stderr(0.0, 100, 4) == 0.0
    assert word_error_stderr(1.0, 100, 4) == 0.0
    mid = word_error_stderr(0.5, 100, 1)
    assert math.isclose(mid, math.sqrt(0.25 / 100))


def test_run_experiment_reproducible():
    code = xzzx_twisted_toric(3, 2)
    spec = BiasSpec(axis="Z", eta=2.0, p=0.12)
    a = run_experiment(code, spec, CFG, False, 64, seed=9, chunk_size=16)
    b = run_experiment(code, spec, CFG, False, 64, seed=9, chunk_size=16)
    assert a.failures == b.failures
    assert a.trials == b.trials == 64
    assert result_row(a) == result_row(b)
    c = run_experiment(code, spec, CFG, False, 64, seed=10, chunk_size=16)
    assert (a.failures, a.p_l) != (c.failures, c.p_l) or a.failures == c.failures


def test_chunking_does_not_change_results():
    code = xzzx_twisted_toric(3, 2)
    spec = BiasSpec(axis="Z", eta=2.0, p=0.12)
    a = run_experiment(code, spec, CFG, False, 60, seed=3, chunk_size=7)
    b = run_experiment(code, spec, CFG, False, 60, seed=3, chunk_size=60)
    assert a.failures == b.failures


def test_min_failures_stops_at_chunk_boundary():
    code = xzzx_twisted_toric(3, 2)
    spec = BiasSpec(axis="Z", eta=0.5, p=0.4)
    result = run_experiment(
        code, spec, CFG, False, 2000, seed=1, chunk_size=50, min_failures=5
    )
    assert result.failures >= 5
    assert result.trials % 50 == 0
    assert result.trials < 2000
    assert result.p_l == result.failures / result.trials


def test_infinite_bias_runs():
    code = twisted_toric_css(3, 2)
    spec = BiasSpec(axis="X", eta=math.inf, p=0.15)
    result = run_experiment(code, spec, CFG, False, 40, seed=2, chunk_size=40)
    assert result.trials == 40
    assert 0.0 <= result.p_l <= 1.0


def test_update_flag_runs_and_echoes():
    code = xzzx_twisted_toric(3, 2)
    spec = BiasSpec(axis="Z", eta=3.0, p=0.1)
    result = run_experiment(code, spec, CFG, True, 32, seed=5, chunk_size=8)
    assert result.config["update"] == 1
    assert result.config["axis"] == "Z"


def test_bias_sweep_shapes():
    code = xzzx_twisted_toric(3, 2)
    grid = [0.5, 3.0, 100.0]
    results = bias_sweep(code, "Z", grid, 0.1, CFG, False, 24, seed=4)
    assert len(results) == 3
    assert [r.config["eta"] for r in results] == grid
    assert [r.config["stream"] for r in results] == [0, 1, 2]


def test_trial_rng_streams():
    a = trial_rng(7, 0, 0).random(4)
    b = trial_rng(7, 0, 0).random(4)
    c = trial_rng(7, 0, 1).random(4)
    d = trial_rng(7, 1, 0).random(4)
    assert np.array_equal(a, b)
    assert not np.array_equal(a, c)
    assert not np.array_equal(a, d)
    with pytest.raises(DomainError):
        trial_rng(7, 0, 1 << 40)
    with pytest.raises(DomainError):
        trial_rng(7, 1 << 24, 0)


def test_csv_round_trip(tmp_path):
    code = xzzx_twisted_toric(3, 2)
    spec = BiasSpec(axis="Z", eta=math.inf, p=0.08)
    result = run_experiment(code, spec, CFG, False, 16, seed=11, chunk_size=16)
    path = tmp_path / "out.csv"
    write_csv(path, [result])
    meta, rows = read_csv(path)
    assert meta["schema"] == "1"
    assert "config_sha256" in meta
    assert len(rows) == 1
    row = rows[0]
    assert row["eta"] == math.inf
    assert row["trials"] == 16
    assert row["P_L"] == result.p_l
    assert row["code_name"] == code.name
    assert format_csv([result]) == format_csv([result])


def test_csv_empty_min_logical():
    config = {
        "code_name": "toy",
        "N": 4,
        "K": 2,
        "axis": "Z",
        "eta": 0.5,
        "p": 0.01,
        "update": 0,
        "seed": 0,
        "max_iterations": 32,
        "osd_order": 0,
        "llr_clip": 30.0,
    }
    result = ExperimentResult(
        trials=10,
        failures=0,
        p_l=0.0,
        p_w=0.0,
        stderr=0.0,
        config=config,
        min_logical_weight=None,
    )
    row = result_row(result)
    assert row.endswith(",")
