"""
Experiment records and summaries
"""
from typing import Any, Dict, List, Optional

from pydantic import BaseModel, ConfigDict, Field

from brouwerlab.schemas.ensembles import EnsembleSpec


class SeedInfo(BaseModel):
    master: int
    trial: int
    stream: int = Field(description="mixed 64-bit substream seed")


class TrialRecord(BaseModel):
    """One sampled graph and its conjecture outcome"""

    trial_index: int = Field(alias="t", ge=0)
    spec: EnsembleSpec
    seed: SeedInfo
    e_g: float = Field(alias="e", description="sampled total weight")
    lambda_max: float = Field(alias="lmax")
    min_margin: float
    min_margin_k: int = Field(alias="k", ge=1)
    holds: bool

    model_config = ConfigDict(populate_by_name=True)


class ExperimentSummary(BaseModel):
    requested: int = Field(ge=1, description="trials asked for")
    trials: int = Field(ge=0, description="trials completed")
    failed: int = Field(0, ge=0, description="trials aborted by the eigensolver")
    failed_trials: List[int] = Field(default_factory=list)
    violations: int = Field(ge=0)
    empirical_prob: Optional[float] = Field(None, ge=0, le=1)
    analytic_lower_bound: Optional[float] = None
    analytic_gamma: Optional[float] = None
    ratio1_quartiles: Optional[List[float]] = Field(None, description="lambda_max/(n mu)")
    ratio2_quartiles: Optional[List[float]] = Field(
        None, description="lambda_max/(sigma sqrt(n log n))"
    )
    metadata: Dict[str, Any] = Field(default_factory=dict)


class ConcentrationRow(BaseModel):
    n: int
    trials: int
    mu: float
    sigma: float
    r1: Optional[float] = Field(None, description="mu/sigma (n/log n)^(1/2)")
    r2: Optional[float] = Field(None, description="sigma^2 log n / (mu n)")
    q25_ratio1: Optional[float] = None
    median_ratio1: Optional[float] = None
    q75_ratio1: Optional[float] = None
    q25_ratio2: Optional[float] = None
    median_ratio2: Optional[float] = None
    q75_ratio2: Optional[float] = None


class ConcentrationTable(BaseModel):
    family: Dict[str, Any]
    rows: List[ConcentrationRow]
    metadata: Dict[str, Any] = Field(default_factory=dict)


class TailStudyResult(BaseModel):
    """Empirical P[e(G) <= (1-delta) mu C(n,2)] against Hoeffding"""

    n: int
    delta: float
    trials: int
    threshold: float
    empirical_tail: float
    analytic_bound: float
    range_bound: float = Field(description="textbook Hoeffding for the weight range")
    standard_error: float = Field(description="sqrt(bound (1-bound) / trials)")
    within_slack: bool = Field(description="empirical <= bound + 3 standard errors")
    metadata: Dict[str, Any] = Field(default_factory=dict)


class EnumerationResult(BaseModel):
    n: int
    total: int = Field(description="2^C(n,2)")
    checked: int
    violations: int
    min_margin_overall: Optional[float] = None
    witness_mask: Optional[int] = None
    witness_k: Optional[int] = None
    violating_masks: List[int] = Field(default_factory=list)
    complete: bool


class EnumerationCheckpoint(BaseModel):
    last_mask: str = Field(description="last completed bitmask, integer as string")
    n: int
    violations: int
    min_margin: Optional[float] = None
    witness_mask: Optional[str] = None
    witness_k: Optional[int] = None
    violating_masks: List[str] = Field(default_factory=list)


class ProofChainSummary(BaseModel):
    """Empirical view of the union-bound argument"""

    n: int
    gamma: float
    epsilon: float
    delta: float
    n0: int
    chain_valid: bool = Field(description="n >= n0, so A and B together force the conjecture")
    trials: int
    p_spectral: float = Field(description="P[lambda_max <= (1+eps) mu n]")
    p_weight: float = Field(description="P[e(G) >= (1-delta) mu C(n,2)]")
    p_both: float
    p_holds: float
    bonferroni_bound: float = Field(description="max(0, P[A] + P[B] - 1)")
    implication_failures: int = Field(description="trials in A and B where the conjecture failed")
    metadata: Dict[str, Any] = Field(default_factory=dict)
