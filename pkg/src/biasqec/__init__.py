"""Bias-tailored quantum LDPC codes and their Monte Carlo evaluation."""

__version__ = "0.1.0"

from .circulant import Protograph, RingElement, lift
from .codes import (
    CssCode,
    RotatedCode,
    bias_tailored_lifted_product,
    classical_params,
    hadamard_rotate,
    hypergraph_product,
    lifted_product,
    quantum_distance,
    twisted_toric_css,
    xzzx_twisted_toric,
)
from .decoder import DecoderConfig, SyndromeDecoder
from .montecarlo import ExperimentResult, bias_sweep, run_experiment, run_trial
from .noise import BiasSpec, channel_from_bias, hashing_probability

__all__ = [
    "__version__",
    "BiasSpec",
    "CssCode",
    "DecoderConfig",
    "ExperimentResult",
    "Protograph",
    "RingElement",
    "RotatedCode",
    "SyndromeDecoder",
    "bias_sweep",
    "bias_tailored_lifted_product",
    "channel_from_bias",
    "classical_params",
    "hadamard_rotate",
    "hashing_probability",
    "hypergraph_product",
    "lift",
    "lifted_product",
    "quantum_distance",
    "run_experiment",
    "run_trial",
    "twisted_toric_css",
    "xzzx_twisted_toric",
]
