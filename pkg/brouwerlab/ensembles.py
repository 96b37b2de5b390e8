"""
Random weighted graph generators
Bounded i.i.d. pair weights, one draw per unordered pair in lexicographic
(i, j), i < j, order, from a per-trial substream.

Substream seeding, bit-exact:
    splitmix64(x) = z3, where (all arithmetic mod 2^64)
        z1 = x + 0x9E3779B97F4A7C15
        z2 = (z1 ^ (z1 >> 30)) * 0xBF58476D1CE4E5B9
        z3' = (z2 ^ (z2 >> 27)) * 0x94D049BB133111EB
        z3 = z3' ^ (z3' >> 31)
    stream(master, t) = splitmix64(master ^ splitmix64(t))
The stream seed initializes numpy's PCG64 (through SeedSequence).
"""
import math
from typing import Any, Dict, Optional, Tuple

import numpy as np
from pydantic import ValidationError

from brouwerlab.exceptions import ParameterError
from brouwerlab.graph_core import WeightedGraph, from_pair_weights
from brouwerlab.schemas.ensembles import EnsembleSpec, FamilySpec, SeedSpec

MASK64 = (1 << 64) - 1
SPLITMIX_INCREMENT = 0x9E3779B97F4A7C15
SPLITMIX_MUL1 = 0xBF58476D1CE4E5B9
SPLITMIX_MUL2 = 0x94D049BB133111EB

__all__ = [
    "EnsembleSpec",
    "FamilySpec",
    "SeedSpec",
    "expected_total_weight",
    "generator_metadata",
    "make_family",
    "make_spec",
    "mix_seed",
    "moment_check",
    "regime_indicators",
    "sample_graph",
    "sample_single_weights",
    "sample_weights",
]


def splitmix64(x: int) -> int:
    """SplitMix64 output function applied to one 64-bit word"""
    z = (x + SPLITMIX_INCREMENT) & MASK64
    z = ((z ^ (z >> 30)) * SPLITMIX_MUL1) & MASK64
    z = ((z ^ (z >> 27)) * SPLITMIX_MUL2) & MASK64
    return z ^ (z >> 31)


def mix_seed(master_seed: int, trial_index: int) -> int:
    """Substream seed for one trial"""
    return splitmix64((master_seed & MASK64) ^ splitmix64(trial_index & MASK64))


def generator_metadata() -> Dict[str, Any]:
    """Algorithm names and constants, recorded with every run"""
    return {
        "mixer": "splitmix64",
        "mixer_constants": [
            hex(SPLITMIX_INCREMENT),
            hex(SPLITMIX_MUL1),
            hex(SPLITMIX_MUL2),
        ],
        "mixer_shifts": [30, 27, 31],
        "stream": "splitmix64(master ^ splitmix64(trial))",
        "generator": "numpy.random.PCG64 seeded via SeedSequence(stream)",
        "numpy_version": np.__version__,
        "pair_order": "lexicographic (i, j), i < j",
    }


def make_spec(family: str, n: int, **params: float) -> EnsembleSpec:
    """Validated EnsembleSpec; parameter problems become ParameterError"""
    try:
        return EnsembleSpec(family=family, params=params, n=n)
    except ValidationError as e:
        raise ParameterError(f"invalid ensemble: {_first_error(e)}", field="spec")


def make_family(family: str, mu_exponent: Optional[float] = None, **params: float) -> FamilySpec:
    try:
        return FamilySpec(family=family, params=params, mu_exponent=mu_exponent)
    except ValidationError as e:
        raise ParameterError(f"invalid ensemble family: {_first_error(e)}", field="family")


def _first_error(e: ValidationError) -> str:
    errors = e.errors()
    return errors[0].get("msg", str(e)) if errors else str(e)


def _rng(seed: SeedSpec) -> np.random.Generator:
    return np.random.Generator(np.random.PCG64(mix_seed(seed.master_seed, seed.trial_index)))


def _draw(spec: EnsembleSpec, rng: np.random.Generator, size: int) -> np.ndarray:
    if spec.family == "bernoulli":
        return (rng.random(size) < spec.params["p"]).astype(float)
    if spec.family == "uniform":
        return rng.uniform(spec.params["a"], spec.params["b"], size)
    up = (1.0 + spec.params["mu"]) / 2.0
    return np.where(rng.random(size) < up, 1.0, -1.0)


def sample_weights(spec: EnsembleSpec, seed: SeedSpec) -> np.ndarray:
    """C(n,2) pair weights in lexicographic pair order"""
    return _draw(spec, _rng(seed), math.comb(spec.n, 2))


def sample_graph(spec: EnsembleSpec, seed: SeedSpec) -> WeightedGraph:
    """One graph; identical output for identical (spec, seed)"""
    return from_pair_weights(spec.n, sample_weights(spec, seed))


def sample_single_weights(spec: EnsembleSpec, seed: SeedSpec, size: int) -> np.ndarray:
    """Independent draws of one weight, for moment checks"""
    return _draw(spec, _rng(seed), size)


def expected_total_weight(spec: EnsembleSpec) -> float:
    """mu * C(n,2)"""
    return spec.mu * math.comb(spec.n, 2)


def regime_indicators_for(mu: float, sigma: float, n: int) -> Tuple[float, float]:
    """(mu/sigma (n/log n)^(1/2), sigma^2 log n / (mu n)), natural log"""
    if n < 2:
        raise ParameterError(f"regime indicators need n >= 2, got {n}", field="n")
    if mu == 0:
        raise ParameterError("regime indicators need mu != 0", field="mu")
    log_n = math.log(n)
    r1 = math.inf if sigma == 0 else mu / sigma * math.sqrt(n / log_n)
    r2 = sigma * sigma * log_n / (mu * n)
    return r1, r2


def regime_indicators(spec: EnsembleSpec) -> Tuple[float, float]:
    return regime_indicators_for(spec.mu, spec.sigma, spec.n)


def moment_check(spec: EnsembleSpec, draws: int, seed: SeedSpec) -> Dict[str, Any]:
    """Sample mean/variance of single weights against mu and sigma^2"""
    values = sample_single_weights(spec, seed, draws)
    mean = float(np.mean(values))
    variance = float(np.var(values, ddof=1)) if draws > 1 else 0.0
    sigma2 = spec.sigma ** 2
    return {
        "draws": draws,
        "mean": mean,
        "variance": variance,
        "mu": spec.mu,
        "sigma2": sigma2,
        "mean_ok": abs(mean - spec.mu) <= 4.0 * spec.sigma / math.sqrt(draws),
        "variance_ok": abs(variance - sigma2) <= 0.1 * sigma2,
    }
