"""
Analytic objects behind the asymptotic argument
Quadratic-in-k polynomials and their discriminants, the (epsilon, delta, n0)
selection, Hoeffding tails and the union-bound composition.

Constants: ``b`` is the almost-sure bound on |weight| used by Hoeffding,
``c`` is the binomial-ratio constant with C(n,2) >= c n^2.
"""
import math
from fractions import Fraction
from typing import Literal, Optional, Tuple

import numpy as np

from brouwerlab.config import get_settings
from brouwerlab.ensembles import regime_indicators_for
from brouwerlab.exceptions import (
    BoundNotValidError,
    HypothesisViolationError,
    ParameterError,
)
from brouwerlab.schemas.ensembles import FamilySpec
from brouwerlab.schemas.reports import BoundsReport, DiscriminantReport, RegimeParams

N0Method = Literal["direct", "proof_bound"]

# hypothesis mu <= 1 - gamma of the mean-dominated regime, checked with this slack for float input
_HYPOTHESIS_SLACK = 1e-12

# n0 is re-checked on n0..n0+_GRID_SPAN and on powers of two up to 2^_GRID_DOUBLINGS
_GRID_SPAN = 32
_GRID_DOUBLINGS = 24

# tail probabilities stay in (0, 1]; below this use the log form
_TINY = math.ulp(0.0)


def _binom2(n: float) -> float:
    """C(n, 2) extended to real n"""
    return n * (n - 1.0) / 2.0


def _check_gamma(gamma: float) -> None:
    if not 0.0 < gamma < 1.0:
        raise ParameterError(f"gamma must lie in (0, 1), got {gamma}", field="gamma")


def _check_lemma3_mu(gamma: float, mu: float) -> None:
    if mu <= 0.0:
        raise HypothesisViolationError(f"mu must be > 0, got {mu}", hypothesis="mu in (0, 1-gamma]")
    if mu > 1.0 - gamma + _HYPOTHESIS_SLACK:
        raise HypothesisViolationError(
            f"mu={mu} exceeds 1-gamma={1.0 - gamma}", hypothesis="mu in (0, 1-gamma]"
        )


# mean-dominated regime ---------------------------------------------------


def lemma3_f(k: float, n: int, mu: float, epsilon: float, delta: float) -> float:
    """f(k) = mu (1-delta) C(n,2) + k(k+1)/2 - k (1+eps) mu n"""
    return mu * (1.0 - delta) * _binom2(n) + k * (k + 1.0) / 2.0 - k * (1.0 + epsilon) * mu * n


def lemma3_vertex(n: int, mu: float, epsilon: float) -> float:
    """Minimizer k* = (1+eps) mu n - 1/2 of f"""
    return (1.0 + epsilon) * mu * n - 0.5


def lemma3_discriminant(n: int, mu: float, epsilon: float, delta: float) -> DiscriminantReport:
    """Delta = n^2 mu (delta - 1 + mu (eps+1)^2) - n mu (delta + eps) + 1/4"""
    if n < 1:
        raise ParameterError(f"n must be >= 1, got {n}", field="n")
    if mu <= 0.0:
        raise ParameterError(f"mu must be > 0, got {mu}", field="mu")
    value = _lemma3_delta(n, mu, epsilon, delta)
    return DiscriminantReport(n=n, value=value, negative=value < 0.0)


def _lemma3_delta(n: float, mu: float, epsilon: float, delta: float) -> float:
    return (
        n * n * mu * (delta - 1.0 + mu * (epsilon + 1.0) ** 2)
        - n * mu * (delta + epsilon)
        + 0.25
    )


def eq3_holds(k: float, n: int, mu: float, epsilon: float, delta: float) -> bool:
    """k (1+eps) mu n < mu (1-delta) C(n,2) + C(k+1,2)"""
    return k * (1.0 + epsilon) * mu * n < mu * (1.0 - delta) * _binom2(n) + k * (k + 1.0) / 2.0


def lemma3_n0(gamma: float, mu_upper: float, method: N0Method = "direct") -> int:
    """Smallest n0 with a negative discriminant for every n >= n0

    ``direct`` evaluates Delta at mu = mu_upper; ``proof_bound`` uses the
    simplified bound -n^2 mu gamma^2 / 2 + 1/4. On the hypothesis range both
    are decreasing in n, so the first negative n is n0.
    """
    _check_gamma(gamma)
    _check_lemma3_mu(gamma, mu_upper)
    delta, epsilon = _lemma3_constants(gamma)

    if method == "direct":
        def value(n: float) -> float:
            return _lemma3_delta(n, mu_upper, epsilon, delta)

        a = mu_upper * (delta - 1.0 + mu_upper * (epsilon + 1.0) ** 2)
        b = mu_upper * (delta + epsilon)
        guess = (b - math.sqrt(b * b - a)) / (2.0 * a)
    elif method == "proof_bound":
        def value(n: float) -> float:
            return -n * n * mu_upper * gamma * gamma / 2.0 + 0.25

        guess = math.sqrt(1.0 / (2.0 * mu_upper * gamma * gamma))
    else:
        raise ParameterError(f"unknown n0 method: {method}", field="method")

    n0 = max(1, int(math.floor(guess)))
    while value(n0) >= 0.0:
        n0 += 1
    while n0 > 1 and value(n0 - 1) < 0.0:
        n0 -= 1

    _validate_n0(n0, mu_upper, epsilon, delta)
    return n0


def _validate_n0(n0: int, mu: float, epsilon: float, delta: float) -> None:
    grid = list(range(n0, n0 + _GRID_SPAN)) + [n0 * 2 ** j for j in range(1, _GRID_DOUBLINGS)]
    for n in grid:
        if _lemma3_delta(n, mu, epsilon, delta) >= 0.0:
            raise HypothesisViolationError(
                f"discriminant non-negative at n={n} >= n0={n0}",
                hypothesis="Delta < 0 for all n >= n0",
            )


def _lemma3_constants(gamma: float) -> Tuple[float, float]:
    """(delta, epsilon) with delta = gamma^2/2 and (eps+1)^2 = 1+gamma"""
    return gamma * gamma / 2.0, math.sqrt(1.0 + gamma) - 1.0


def lemma3_params(gamma: float, mu_upper: Optional[float] = None) -> RegimeParams:
    """delta = gamma^2/2, eps = sqrt(1+gamma) - 1, n0 at mu_upper (default 1-gamma)"""
    _check_gamma(gamma)
    delta, epsilon = _lemma3_constants(gamma)
    mu = 1.0 - gamma if mu_upper is None else mu_upper
    return RegimeParams(
        gamma=gamma,
        epsilon=epsilon,
        delta=delta,
        n0=lemma3_n0(gamma, mu),
        which_lemma="lemma3",
    )


# variance-dominated regime -----------------------------------------------


def _default_c(c: Optional[float]) -> float:
    if c is None:
        c = get_settings().bounds.lemma5_c
    if c <= 0.0:
        raise ParameterError(f"c must be > 0, got {c}", field="c")
    return c


def lemma5_f(
    k: float, n: int, mu: float, sigma: float, epsilon: float, delta: float, c: Optional[float] = None
) -> float:
    """f(k) = k^2/2 - k (2+eps) sigma sqrt(n log n) + c mu (1-delta) n^2"""
    c = _default_c(c)
    return (
        k * k / 2.0
        - k * (2.0 + epsilon) * sigma * math.sqrt(n * math.log(n))
        + c * mu * (1.0 - delta) * n * n
    )


def lemma5_vertex(n: int, sigma: float, epsilon: float) -> float:
    return (2.0 + epsilon) * sigma * math.sqrt(n * math.log(n))


def lemma5_discriminant(
    n: int, mu: float, sigma: float, epsilon: float, delta: float, c: Optional[float] = None
) -> DiscriminantReport:
    """Delta = (2+eps)^2 sigma^2 n log n - 2 c mu (1-delta) n^2"""
    if n < 2:
        raise ParameterError(f"n must be >= 2, got {n}", field="n")
    c = _default_c(c)
    value = (2.0 + epsilon) ** 2 * sigma * sigma * n * math.log(n) - 2.0 * c * mu * (1.0 - delta) * n * n
    return DiscriminantReport(n=n, value=value, negative=value < 0.0)


def binomial_ratio_threshold(c: float) -> int:
    """Smallest n with C(n,2) >= c n^2 (requires c < 1/2)"""
    if not 0.0 < c < 0.5:
        raise ParameterError(f"c must lie in (0, 1/2), got {c}", field="c")
    # exact in the decimal value of c; C(n,2) >= c n^2 iff (n-1)/(2n) >= c
    target = Fraction(str(float(c)))
    n = max(2, math.ceil(1 / (1 - 2 * target)))
    while Fraction(n - 1, 2 * n) < target:
        n += 1
    return n


def _family_moments(family: FamilySpec, ns: np.ndarray) -> Tuple[np.ndarray, np.ndarray]:
    """mu(n), sigma(n) over an array of sizes"""
    if family.mu_exponent is not None:
        mu = ns.astype(float) ** (-family.mu_exponent)
        return mu, np.sqrt(np.maximum(0.0, 1.0 - mu * mu))
    spec = family.resolve(2)
    return np.full(len(ns), spec.mu), np.full(len(ns), spec.sigma)


def lemma5_n0(
    family: FamilySpec,
    epsilon: float,
    delta: float,
    c: Optional[float] = None,
    n_max: int = 1_000_000,
) -> Optional[int]:
    """First n from which Delta5 < 0 through n_max, or None"""
    c = _default_c(c)
    start = binomial_ratio_threshold(c)
    if n_max < start:
        raise ParameterError(f"n_max must be >= {start}", field="n_max")
    ns = np.arange(start, n_max + 1)
    mu, sigma = _family_moments(family, ns)
    nf = ns.astype(float)
    values = (2.0 + epsilon) ** 2 * sigma ** 2 * nf * np.log(nf) - 2.0 * c * mu * (1.0 - delta) * nf ** 2
    non_negative = np.flatnonzero(values >= 0.0)
    if len(non_negative) == 0:
        return int(start)
    last = int(non_negative[-1])
    if last == len(ns) - 1:
        return None
    return int(ns[last + 1])


def lemma5_params(
    family: FamilySpec,
    epsilon: float = 0.1,
    delta: float = 0.1,
    c: Optional[float] = None,
    n_max: int = 1_000_000,
) -> RegimeParams:
    """Any eps > 0 and delta in (0, 1) work; n0 found by scanning"""
    if epsilon <= 0.0:
        raise ParameterError("epsilon must be > 0", field="epsilon")
    if not 0.0 < delta < 1.0:
        raise ParameterError("delta must lie in (0, 1)", field="delta")
    c = _default_c(c)
    n0 = lemma5_n0(family, epsilon, delta, c, n_max)
    if n0 is None:
        raise HypothesisViolationError(
            f"discriminant still non-negative at n_max={n_max}",
            hypothesis="sigma^2 log n / (mu n) -> 0",
        )
    return RegimeParams(epsilon=epsilon, delta=delta, n0=n0, which_lemma="lemma5", c=c)


# Tails and composition ----------------------------------------------------


def _check_tail_inputs(n: int, mu: float, delta: float) -> None:
    if n < 2:
        raise ParameterError(f"n must be >= 2, got {n}", field="n")
    if mu <= 0.0:
        raise ParameterError(f"mu must be > 0, got {mu}", field="mu")
    if not 0.0 < delta < 1.0:
        raise ParameterError(f"delta must lie in (0, 1), got {delta}", field="delta")


def log_hoeffding_tail_bound(n: int, mu: float, delta: float, b: float) -> float:
    """-delta^2 mu^2 C(n,2) / b^2"""
    _check_tail_inputs(n, mu, delta)
    if b <= 0.0:
        raise ParameterError(f"b must be > 0, got {b}", field="b")
    return -(delta * delta) * (mu * mu) * math.comb(n, 2) / (b * b)


def hoeffding_tail_bound(n: int, mu: float, delta: float, b: float) -> float:
    """P[e(G) <= (1-delta) mu C(n,2)] <= exp(-delta^2 mu^2 C(n,2) / b^2)"""
    return max(math.exp(log_hoeffding_tail_bound(n, mu, delta, b)), _TINY)


def hoeffding_range_bound(n: int, mu: float, delta: float, lower: float, upper: float) -> float:
    """Hoeffding for weights in [lower, upper]: exp(-2 delta^2 mu^2 C(n,2) / (upper-lower)^2)"""
    _check_tail_inputs(n, mu, delta)
    if not upper > lower:
        raise ParameterError("upper must exceed lower", field="upper")
    span = upper - lower
    exponent = -2.0 * (delta * delta) * (mu * mu) * math.comb(n, 2) / (span * span)
    return max(math.exp(exponent), _TINY)


def bonferroni_lower_bound(p_a: float, p_b: float) -> float:
    """P[A and B] >= P[A] + P[B] - 1"""
    for name, p in (("p_a", p_a), ("p_b", p_b)):
        if not 0.0 <= p <= 1.0:
            raise ParameterError(f"{name} must lie in [0, 1], got {p}", field=name)
    return max(0.0, p_a + p_b - 1.0)


def theorem_lower_bound(n: int, mu: float, gamma: float, b: float) -> float:
    """1 - exp(-delta^2 mu^2 C(n,2) / b^2) with delta = gamma^2/2, for n >= n0"""
    _check_gamma(gamma)
    _check_lemma3_mu(gamma, mu)
    n0 = lemma3_n0(gamma, mu)
    if n < n0:
        raise BoundNotValidError(n, n0)
    delta, _ = _lemma3_constants(gamma)
    return -math.expm1(log_hoeffding_tail_bound(n, mu, delta, b))


def theorem2_lower_bound(
    n: int,
    mu: float,
    sigma: float,
    epsilon: float,
    delta: float,
    b: float,
    c: Optional[float] = None,
) -> float:
    """Same Hoeffding composition, valid where the variance-regime discriminant is negative"""
    report = lemma5_discriminant(n, mu, sigma, epsilon, delta, c)
    if not report.negative:
        raise BoundNotValidError(n, reason=f"lemma5 discriminant {report.value:.6g} >= 0 at n={n}")
    return -math.expm1(log_hoeffding_tail_bound(n, mu, delta, b))


def bounds_report(
    gamma: float,
    mu: float,
    n: int,
    b: float = 1.0,
    sigma: Optional[float] = None,
    c: Optional[float] = None,
) -> BoundsReport:
    """All derived quantities for one (gamma, mu, sigma, n, b)"""
    params = lemma3_params(gamma, mu_upper=mu)
    n0_bound = lemma3_n0(gamma, mu, method="proof_bound")
    discriminant = lemma3_discriminant(n, mu, params.epsilon, params.delta)
    vertex = lemma3_f(lemma3_vertex(n, mu, params.epsilon), n, mu, params.epsilon, params.delta)

    hoeffding = log_hoeffding = None
    if n >= 2:
        log_hoeffding = log_hoeffding_tail_bound(n, mu, params.delta, b)
        hoeffding = math.exp(log_hoeffding)

    theorem = None
    if n >= params.n0:
        theorem = theorem_lower_bound(n, mu, gamma, b)

    indicators = lemma5 = None
    if sigma is not None and n >= 2:
        r1, r2 = regime_indicators_for(mu, sigma, n)
        indicators = {"r1": r1, "r2": r2}
        lemma5 = lemma5_discriminant(n, mu, sigma, params.epsilon, params.delta, c)

    return BoundsReport(
        inputs={"gamma": gamma, "mu": mu, "sigma": sigma, "n": float(n), "b": b},
        lemma3=params,
        n0_proof_bound=n0_bound,
        discriminant=discriminant,
        vertex_value=vertex,
        hoeffding_bound=hoeffding,
        log_hoeffding_bound=log_hoeffding,
        theorem_lower_bound=theorem,
        theorem_status="valid" if theorem is not None else "not yet valid",
        regime_indicators=indicators,
        lemma5_discriminant=lemma5,
    )
