"""Monte Carlo decoding trials under biased Pauli noise.

A trial samples a Pauli error, decodes the X component against the Z
checks and the Z component against the X checks (optionally updating
the second round's priors with what the first round found), and then
asks whether either residual acts nontrivially on the logical space.

Experiments aggregate independent trials into a block error rate P_L
and the per-logical-qubit word error rate P_W = 1 - (1 - P_L)^(1/K).
Trials draw from counter-based RNG streams keyed by (seed, stream,
trial index), so results are bit-identical for a fixed seed no matter
how trials are chunked across workers.
"""

from __future__ import annotations

import json
import hashlib
import math
import multiprocessing
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass

import numpy as np

from . import __version__
from .decoder import DecoderConfig, SyndromeDecoder
from .errors import DomainError
from .noise import (
    BiasSpec,
    PauliChannel,
    channel_from_bias,
    rotated_priors,
    sample_error,
)

_PRIOR_FLOOR = 1e-12
_SCHEMA = 1
# Trial indices occupy the low 40 bits of the second RNG key word and
# stream indices the bits above, so streams never collide.
_TRIAL_BITS = 40
_DEFAULT_CHUNK = 1024

CSV_COLUMNS = (
    "code_name",
    "N",
    "K",
    "axis",
    "eta",
    "p",
    "trials",
    "failures",
    "P_L",
    "P_W",
    "stderr_PW",
    "update",
    "seed",
    "max_iterations",
    "osd_order",
    "llr_clip",
    "min_logical_weight",
)


@dataclass(frozen=True)
class TrialOutcome:
    success: bool
    residual_weight: int
    min_logical_weight_observed: int | None


@dataclass(frozen=True)
class ExperimentResult:
    trials: int
    failures: int
    p_l: float
    p_w: float
    stderr: float
    config: dict
    min_logical_weight: int | None = None


def _effective_sector1(code) -> int:
    """Size of the unrotated sector; the whole code when nothing is rotated."""
    rotated = getattr(code, "rotated", frozenset())
    if not rotated:
        return code.n
    expected = frozenset(range(code.sector1_size, code.n))
    if rotated != expected:
        raise DomainError(
            "only codes whose rotated qubits form the full second sector are simulable"
        )
    return code.sector1_size


def channel_update(
    r_first, channel: PauliChannel, sector1: int, first_axis: str = "X"
) -> np.ndarray:
    """Conditional second-round priors given the first round's recovery.

    With the X round first, a qubit the X decoder left alone gets
    pz / (1 - px - py) and a corrected qubit py / (px + py); qubits in
    the rotated sector (index >= sector1) swap px and pz first.  Passing
    first_axis="Z" derives the mirrored update for reverse-order
    decoding.  Impossible events (zero denominator) clamp to the floor.
    """
    r = np.asarray(r_first, dtype=np.uint8) & 1
    n = r.shape[0]
    if sector1 < 0 or sector1 > n:
        raise DomainError(f"need 0 <= sector1 <= {n}, got {sector1}")
    px_q = np.full(n, channel.px)
    pz_q = np.full(n, channel.pz)
    px_q[sector1:] = channel.pz
    pz_q[sector1:] = channel.px
    if first_axis == "X":
        p_first, p_second = px_q, pz_q
    elif first_axis == "Z":
        p_first, p_second = pz_q, px_q
    else:
        raise DomainError(f"first_axis must be 'X' or 'Z', got {first_axis!r}")
    py = channel.py
    with np.errstate(divide="ignore", invalid="ignore"):
        quiet = p_second / (1.0 - p_first - py)
        flagged = np.full(n, py) / (p_first + py)
    out = np.where(r == 1, flagged, quiet)
    out = np.where(np.isfinite(out), out, 0.0)
    return np.clip(out, _PRIOR_FLOOR, 1.0 - _PRIOR_FLOOR)


class _Engine:
    """Decoders, priors, and dense matrices for one experiment setting."""

    def __init__(
        self,
        code,
        channel: PauliChannel,
        cfg: DecoderConfig,
        update: bool,
        reverse: bool = False,
    ):
        self.channel = channel
        self.update = update
        self.reverse = reverse
        self.n = code.n
        self.sector1 = _effective_sector1(code)
        self.hx = code.hx.to_array()
        self.hz = code.hz.to_array()
        self.lx = code.lx.to_array()
        self.lz = code.lz.to_array()
        self.priors = rotated_priors(channel, self.n, self.sector1)
        self.decoder_x = SyndromeDecoder(self.hz, cfg)
        self.decoder_z = SyndromeDecoder(self.hx, cfg)

    def trial(self, e_x: np.ndarray, e_z: np.ndarray) -> TrialOutcome:
        if self.reverse:
            r_z = self._round_z(e_z, self.priors.pz_eff)
            priors_x = (
                channel_update(r_z, self.channel, self.sector1, first_axis="Z")
                if self.update
                else self.priors.px_eff
            )
            r_x = self._round_x(e_x, priors_x)
        else:
            r_x = self._round_x(e_x, self.priors.px_eff)
            priors_z = (
                channel_update(r_x, self.channel, self.sector1, first_axis="X")
                if self.update
                else self.priors.pz_eff
            )
            r_z = self._round_z(e_z, priors_z)
        res_x = r_x ^ e_x
        res_z = r_z ^ e_z
        # uint8 matmul wraps mod 256, which is even, so parities survive
        fail_x = bool(((self.lz @ res_x) % 2).any())
        fail_z = bool(((self.lx @ res_z) % 2).any())
        weights = []
        if fail_x:
            weights.append(int(np.count_nonzero(res_x)))
        if fail_z:
            weights.append(int(np.count_nonzero(res_z)))
        return TrialOutcome(
            success=not (fail_x or fail_z),
            residual_weight=int(np.count_nonzero(res_x | res_z)),
            min_logical_weight_observed=min(weights) if weights else None,
        )

    def _round_x(self, e_x, priors):
        syndrome = (self.hz @ e_x) % 2
        return self.decoder_x.decode(syndrome, priors).recovery

    def _round_z(self, e_z, priors):
        syndrome = (self.hx @ e_z) % 2
        return self.decoder_z.decode(syndrome, priors).recovery

    def run(self, seed: int, stream: int, start: int, count: int):
        failures = 0
        min_logical = None
        for t in range(start, start + count):
            rng = trial_rng(seed, stream, t)
            e_x, e_z = sample_error(self.priors, self.channel, rng)
            outcome = self.trial(e_x, e_z)
            if not outcome.success:
                failures += 1
                w = outcome.min_logical_weight_observed
                if w is not None and (min_logical is None or w < min_logical):
                    min_logical = w
        return failures, min_logical


def trial_rng(seed: int, stream: int, trial: int) -> np.random.Generator:
    """Counter-based generator for one trial, split by (seed, stream, trial)."""
    if not 0 <= trial < (1 << _TRIAL_BITS):
        raise DomainError(f"trial index out of range: {trial}")
    if not 0 <= stream < (1 << (64 - _TRIAL_BITS)):
        raise DomainError(f"stream index out of range: {stream}")
    key = np.array(
        [seed & 0xFFFFFFFFFFFFFFFF, (stream << _TRIAL_BITS) | trial], dtype=np.uint64
    )
    return np.random.Generator(np.random.Philox(key=key))


def run_trial(
    code,
    channel: PauliChannel,
    cfg: DecoderConfig,
    update: bool,
    rng: np.random.Generator,
    reverse: bool = False,
) -> TrialOutcome:
    """Sample one error and run the full two-round decode on it."""
    engine = _Engine(code, channel, cfg, update, reverse)
    e_x, e_z = sample_error(engine.priors, channel, rng)
    return engine.trial(e_x, e_z)


def run_injected(
    code,
    channel: PauliChannel,
    cfg: DecoderConfig,
    e_x,
    e_z,
    update: bool = False,
    reverse: bool = False,
) -> TrialOutcome:
    """Decode a caller-chosen error instead of a sampled one."""
    engine = _Engine(code, channel, cfg, update, reverse)
    e_x = np.asarray(e_x, dtype=np.uint8) & 1
    e_z = np.asarray(e_z, dtype=np.uint8) & 1
    if e_x.shape != (code.n,) or e_z.shape != (code.n,):
        raise DomainError(f"error vectors must have length {code.n}")
    return engine.trial(e_x, e_z)


def word_error_rate(p_l: float, k: int) -> float:
    """Per-logical-qubit rate 1 - (1 - P_L)^(1/K)."""
    if k < 1:
        raise DomainError(f"K must be >= 1, got {k}")
    return 1.0 - (1.0 - p_l) ** (1.0 / k)


def word_error_stderr(p_l: float, trials: int, k: int) -> float:
    """Binomial error on P_L propagated through the word-rate map.

    The derivative of P_W blows up at P_L = 1, where the estimate is
    pinned anyway, so that point reports 0.
    """
    if trials < 1:
        raise DomainError(f"trials must be >= 1, got {trials}")
    se = math.sqrt(p_l * (1.0 - p_l) / trials)
    if p_l >= 1.0 or p_l <= 0.0:
        return 0.0
    return se * (1.0 - p_l) ** (1.0 / k - 1.0) / k


def experiment_config(
    code,
    spec: BiasSpec,
    cfg: DecoderConfig,
    update: bool,
    trials: int,
    seed: int,
    *,
    stream: int = 0,
    min_failures: int | None = None,
    reverse: bool = False,
    chunk_size: int = _DEFAULT_CHUNK,
) -> dict:
    """The provenance echo for one experiment point.

    Fully determined by the inputs, never by run outcomes, so callers
    can compute it (and the file digest) before any trial runs.
    """
    resolved_iters = (
        cfg.max_iterations if cfg.max_iterations is not None else max(32, code.n // 10)
    )
    return {
        "code_name": code.name,
        "N": code.n,
        "K": code.k,
        "axis": spec.axis,
        "eta": spec.eta,
        "p": spec.p,
        "update": int(update),
        "reverse": int(reverse),
        "seed": seed,
        "stream": stream,
        "trials_requested": trials,
        "min_failures": min_failures,
        "chunk_size": chunk_size,
        "max_iterations": resolved_iters,
        "osd_order": cfg.osd_order,
        "llr_clip": cfg.llr_clip,
    }


def _chunk_worker(payload):
    code, channel, cfg, update, reverse, seed, stream, start, count = payload
    engine = _Engine(code, channel, cfg, update, reverse)
    return engine.run(seed, stream, start, count)


def run_experiment(
    code,
    spec: BiasSpec,
    cfg: DecoderConfig,
    update: bool,
    trials: int,
    seed: int,
    *,
    stream: int = 0,
    workers: int = 1,
    min_failures: int | None = None,
    reverse: bool = False,
    chunk_size: int = _DEFAULT_CHUNK,
) -> ExperimentResult:
    """Aggregate trials at one (bias, p) point.

    Trials are processed in fixed-size chunks whose boundaries do not
    depend on the worker count; the optional min_failures stopping rule
    is evaluated only at chunk boundaries, in chunk order, so stopping
    decisions are reproducible too.
    """
    if trials < 1:
        raise DomainError(f"trials must be >= 1, got {trials}")
    if chunk_size < 1:
        raise DomainError(f"chunk_size must be >= 1, got {chunk_size}")
    channel = channel_from_bias(spec)
    chunks = [
        (start, min(chunk_size, trials - start))
        for start in range(0, trials, chunk_size)
    ]

    consumed = 0
    failures = 0
    min_logical = None

    def absorb(result, count):
        nonlocal consumed, failures, min_logical
        chunk_failures, chunk_min = result
        consumed += count
        failures += chunk_failures
        if chunk_min is not None and (min_logical is None or chunk_min < min_logical):
            min_logical = chunk_min

    if workers <= 1:
        engine = _Engine(code, channel, cfg, update, reverse)
        for start, count in chunks:
            absorb(engine.run(seed, stream, start, count), count)
            if min_failures is not None and failures >= min_failures:
                break
    else:
        ctx = multiprocessing.get_context("spawn")
        with ProcessPoolExecutor(max_workers=workers, mp_context=ctx) as pool:
            futures = [
                pool.submit(
                    _chunk_worker,
                    (code, channel, cfg, update, reverse, seed, stream, start, count),
                )
                for start, count in chunks
            ]
            for future, (start, count) in zip(futures, chunks):
                absorb(future.result(), count)
                if min_failures is not None and failures >= min_failures:
                    for pending in futures:
                        pending.cancel()
                    break

    p_l = failures / consumed
    config = experiment_config(
        code,
        spec,
        cfg,
        update,
        trials,
        seed,
        stream=stream,
        min_failures=min_failures,
        reverse=reverse,
        chunk_size=chunk_size,
    )
    return ExperimentResult(
        trials=consumed,
        failures=failures,
        p_l=p_l,
        p_w=word_error_rate(p_l, code.k),
        stderr=word_error_stderr(p_l, consumed, code.k),
        config=config,
        min_logical_weight=min_logical,
    )


def bias_sweep(
    code,
    axis: str,
    eta_grid,
    p: float,
    cfg: DecoderConfig,
    update: bool,
    trials: int,
    seed: int,
    *,
    workers: int = 1,
    min_failures: int | None = None,
    reverse: bool = False,
) -> list[ExperimentResult]:
    """One experiment per eta at fixed total rate; stream i is point i."""
    return [
        run_experiment(
            code,
            BiasSpec(axis=axis, eta=float(eta), p=p),
            cfg,
            update,
            trials,
            seed,
            stream=i,
            workers=workers,
            min_failures=min_failures,
            reverse=reverse,
        )
        for i, eta in enumerate(eta_grid)
    ]


def _csv_cell(value) -> str:
    if value is None:
        return ""
    if isinstance(value, float):
        return repr(value)
    return str(value)


def result_row(result: ExperimentResult) -> str:
    c = result.config
    cells = (
        c["code_name"],
        c["N"],
        c["K"],
        c["axis"],
        float(c["eta"]),
        float(c["p"]),
        result.trials,
        result.failures,
        float(result.p_l),
        float(result.p_w),
        float(result.stderr),
        c["update"],
        c["seed"],
        c["max_iterations"],
        c["osd_order"],
        float(c["llr_clip"]),
        result.min_logical_weight,
    )
    return ",".join(_csv_cell(v) for v in cells)


def digest_of_configs(configs) -> str:
    payload = json.dumps(list(configs), sort_keys=True)
    return hashlib.sha256(payload.encode()).hexdigest()


def config_digest(results) -> str:
    return digest_of_configs(r.config for r in results)


def format_csv_rows(rows, digest: str) -> str:
    """Canonical CSV text from preformatted rows and a config digest."""
    lines = [
        f"# schema={_SCHEMA}",
        f"# version={__version__}",
        f"# config_sha256={digest}",
        ",".join(CSV_COLUMNS),
    ]
    lines.extend(rows)
    return "\n".join(lines) + "\n"


def format_csv(results) -> str:
    """Canonical CSV text: schema/version/config comments, header, rows."""
    return format_csv_rows((result_row(r) for r in results), config_digest(results))


def write_csv(path, results) -> None:
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        fh.write(format_csv(results))


def read_csv(path) -> tuple[dict, list[dict]]:
    """Parse a results file back into (meta, row dicts)."""
    meta: dict = {}
    rows: list[dict] = []
    header: list[str] | None = None
    with open(path, "r", encoding="utf-8") as fh:
        for line in fh:
            line = line.rstrip("\n")
            if not line:
                continue
            if line.startswith("#"):
                body = line[1:].strip()
                if "=" in body:
                    key, _, value = body.partition("=")
                    meta[key.strip()] = value.strip()
                continue
            if header is None:
                header = line.split(",")
                continue
            cells = line.split(",")
            row: dict = dict(zip(header, cells))
            for key in ("N", "K", "trials", "failures", "update", "seed",
                        "max_iterations", "osd_order"):
                row[key] = int(row[key])
            for key in ("eta", "p", "P_L", "P_W", "stderr_PW", "llr_clip"):
                row[key] = float(row[key])
            row["min_logical_weight"] = (
                int(row["min_logical_weight"]) if row["min_logical_weight"] else None
            )
            rows.append(row)
    return meta, rows
