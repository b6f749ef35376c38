"""Biased Pauli channels, per-qubit priors, and hashing-bound utilities.

A single-qubit Pauli channel applies X, Y, Z with probabilities
(px, py, pz) and identity otherwise.  Bias is expressed relative to a
dominant axis: eta = p_axis / (sum of the other two error rates), so
eta = 0.5 recovers the depolarising channel and eta = inf a pure
dephasing (or pure flip) channel.

Priors are tracked per qubit because Hadamard-rotated sectors exchange
the roles of X and Z: a qubit in the rotated sector sees the channel
conjugated, so its effective flip probabilities swap while the Y mass
stays put.
"""

from __future__ import annotations

import dataclasses
import math
from dataclasses import dataclass

import numpy as np

from .errors import DomainError, NoSolutionError

_AXES = ("X", "Y", "Z")

# Bisection bracket for the hashing solver.  Roots below the floor are
# reported as NoSolutionError rather than extrapolated.
_P_FLOOR = 1e-6
_P_CEIL = 0.999


@dataclass(frozen=True)
class PauliChannel:
    """Single-qubit Pauli error rates (px, py, pz), each nonnegative,
    summing to at most 1."""

    px: float
    py: float
    pz: float

    def __post_init__(self):
        for name in ("px", "py", "pz"):
            v = getattr(self, name)
            if math.isnan(v) or v < 0.0 or v > 1.0:
                raise DomainError(f"{name} must lie in [0, 1], got {v!r}")
        if self.px + self.py + self.pz > 1.0 + 1e-12:
            raise DomainError(
                f"error rates sum to {self.px + self.py + self.pz!r} > 1"
            )

    @property
    def p(self) -> float:
        """Total error probability."""
        return self.px + self.py + self.pz


@dataclass(frozen=True)
class BiasSpec:
    """A channel described by dominant axis, bias eta, and total rate p.

    eta must be positive (math.inf selects a pure channel on the axis).
    The depolarising channel is eta = 0.5 on any axis.
    """

    axis: str
    eta: float
    p: float = 0.0

    def __post_init__(self):
        if self.axis not in _AXES:
            raise DomainError(f"axis must be one of {_AXES}, got {self.axis!r}")
        if math.isnan(self.eta) or self.eta <= 0.0:
            raise DomainError(f"eta must be positive or inf, got {self.eta!r}")
        if math.isnan(self.p) or self.p < 0.0 or self.p >= 1.0:
            raise DomainError(f"p must lie in [0, 1), got {self.p!r}")


@dataclass(frozen=True)
class QubitPriors:
    """Per-qubit effective flip probabilities.

    px_eff[j] is the probability that qubit j suffers a bit flip in its
    own frame (X or Y error after any sector rotation), pz_eff[j] the
    probability of a phase flip (Z or Y).  Both are length-N float
    vectors.
    """

    px_eff: np.ndarray
    pz_eff: np.ndarray

    def __post_init__(self):
        px = np.asarray(self.px_eff, dtype=np.float64)
        pz = np.asarray(self.pz_eff, dtype=np.float64)
        if px.ndim != 1 or pz.shape != px.shape:
            raise DomainError("px_eff and pz_eff must be equal-length vectors")
        object.__setattr__(self, "px_eff", px)
        object.__setattr__(self, "pz_eff", pz)

    @property
    def n(self) -> int:
        return self.px_eff.shape[0]


def channel_from_bias(spec: BiasSpec) -> PauliChannel:
    """Build the Pauli channel with total rate spec.p biased along spec.axis.

    The dominant axis receives p * eta / (1 + eta) and each of the other
    two axes p / (2 * (1 + eta)); infinite bias puts all mass on the
    axis.  Example: axis Z, eta 3, p 0.08 gives (px, py, pz) =
    (0.01, 0.01, 0.06).
    """
    if math.isinf(spec.eta):
        main, off = spec.p, 0.0
    else:
        main = spec.p * spec.eta / (1.0 + spec.eta)
        off = spec.p / (2.0 * (1.0 + spec.eta))
    rates = {a: off for a in _AXES}
    rates[spec.axis] = main
    return PauliChannel(px=rates["X"], py=rates["Y"], pz=rates["Z"])


def channel_bias(channel: PauliChannel, axis: str) -> float:
    """Recover eta = p_axis / (sum of the other two rates).

    Returns math.inf when the off-axis rates vanish.
    """
    if axis not in _AXES:
        raise DomainError(f"axis must be one of {_AXES}, got {axis!r}")
    rates = {"X": channel.px, "Y": channel.py, "Z": channel.pz}
    main = rates.pop(axis)
    rest = sum(rates.values())
    if rest == 0.0:
        return math.inf
    return main / rest


def rotated_priors(channel: PauliChannel, n: int, sector1: int) -> QubitPriors:
    """Effective per-qubit priors for a code whose second sector
    (qubits sector1..n-1) is Hadamard rotated.

    Unrotated qubits see px_eff = px + py and pz_eff = pz + py; rotated
    qubits see the two swapped, because conjugation by Hadamard
    exchanges X and Z while fixing Y.  Pass sector1 = n for a plain CSS
    code with no rotated sector.
    """
    if n < 0 or sector1 < 0 or sector1 > n:
        raise DomainError(f"need 0 <= sector1 <= n, got sector1={sector1}, n={n}")
    px_eff = np.full(n, channel.px + channel.py, dtype=np.float64)
    pz_eff = np.full(n, channel.pz + channel.py, dtype=np.float64)
    px_eff[sector1:] = channel.pz + channel.py
    pz_eff[sector1:] = channel.px + channel.py
    return QubitPriors(px_eff=px_eff, pz_eff=pz_eff)


def sample_error(
    priors: QubitPriors, channel: PauliChannel, rng: np.random.Generator
) -> tuple[np.ndarray, np.ndarray]:
    """Draw one Pauli error, returned as binary vectors (eX, eZ).

    Each qubit independently suffers Y with probability py, a pure bit
    flip with probability px_eff - py, and a pure phase flip with
    probability pz_eff - py; these masses are disjoint, so the marginals
    are exactly px_eff and pz_eff.  One uniform variate is consumed per
    qubit.
    """
    n = priors.n
    q_y = channel.py
    q_x = np.clip(priors.px_eff - q_y, 0.0, None)
    q_z = np.clip(priors.pz_eff - q_y, 0.0, None)
    u = rng.random(n)
    is_y = u < q_y
    is_x = ~is_y & (u < q_y + q_x)
    is_z = ~is_y & ~is_x & (u < q_y + q_x + q_z)
    e_x = (is_y | is_x).astype(np.uint8)
    e_z = (is_y | is_z).astype(np.uint8)
    return e_x, e_z


def _entropy_terms(masses) -> float:
    total = 0.0
    for q in masses:
        if q > 0.0:
            total -= q * math.log2(q)
    return total


def shannon_limit(p_x: float) -> float:
    """Capacity bound 1 - H2(pX) of the binary symmetric channel."""
    if math.isnan(p_x) or p_x < 0.0 or p_x > 1.0:
        raise DomainError(f"pX must lie in [0, 1], got {p_x!r}")
    return 1.0 - _entropy_terms((p_x, 1.0 - p_x))


def hashing_rate(channel: PauliChannel) -> float:
    """Hashing bound 1 - H(1-p, px, py, pz) on the achievable rate.

    Terms with zero mass contribute nothing, so an infinitely biased
    channel reduces to the Shannon limit of a binary symmetric channel.
    """
    masses = (1.0 - channel.p, channel.px, channel.py, channel.pz)
    return 1.0 - _entropy_terms(masses)


def hashing_probability(r: float, spec: BiasSpec) -> float:
    """Invert the hashing bound: the smallest p with
    hashing_rate(channel_from_bias(spec at total rate p)) = r.

    The rate starts at 1 for p -> 0 and decreases through the physical
    branch; the root is located by bisection on [1e-6, argmin of the
    rate] to within 1e-6.  Raises NoSolutionError when no root lies in
    the bracket (r too close to 1, or larger than every achievable
    rate).
    """
    if math.isnan(r) or r < 0.0 or r >= 1.0:
        raise DomainError(f"rate must lie in [0, 1), got {r!r}")

    def gap(p: float) -> float:
        return hashing_rate(channel_from_bias(dataclasses.replace(spec, p=p))) - r

    lo = _P_FLOOR
    if math.isinf(spec.eta):
        # Pure channel: the rate 1 - H2(p) attains its minimum of 0 at
        # exactly p = 1/2, a tangent root no grid search can bracket.
        hi = 0.5
    else:
        grid = np.linspace(_P_FLOOR, _P_CEIL, 2048)
        values = [gap(p) for p in grid]
        hi = float(grid[int(np.argmin(values))])
    if gap(lo) <= 0.0:
        raise NoSolutionError(f"no root in [{_P_FLOOR}, {_P_CEIL}] for rate {r}")
    if gap(hi) > 0.0:
        raise NoSolutionError(f"rate {r} exceeds the hashing bound for {spec}")
    while hi - lo > 1e-7:
        mid = 0.5 * (lo + hi)
        if gap(mid) > 0.0:
            lo = mid
        else:
            hi = mid
    return 0.5 * (lo + hi)
