"""
Conjecture and bound reports
"""
from typing import Dict, List, Literal, Optional

from pydantic import BaseModel, ConfigDict, Field


class BrouwerReport(BaseModel):
    """Per-k margins m_k = e(G) + C(k+1,2) - S_k"""

    n: int = Field(ge=1, description="vertex count")
    e_g: float = Field(alias="e", description="total edge weight e(G)")
    margins: List[float] = Field(description="m_k for k = 1..n")
    holds: bool = Field(description="no margin below -tol")
    violating_k: List[int] = Field(default_factory=list, description="k with m_k < -tol")
    equality_k: List[int] = Field(default_factory=list, description="k with |m_k| <= tol")
    tolerance: float = Field(alias="tol", ge=0, description="tau_check used")
    violation_status: Dict[int, Literal["numerical", "confirmed"]] = Field(
        default_factory=dict, description="classification of each violating k"
    )

    model_config = ConfigDict(
        populate_by_name=True,
        json_schema_extra={
            "example": {
                "n": 3,
                "e": 3.0,
                "margins": [1.0, 0.0, 3.0],
                "holds": True,
                "violating_k": [],
                "equality_k": [2],
                "tol": 2.8e-6,
                "violation_status": {},
            }
        },
    )


class RegimeParams(BaseModel):
    """(epsilon, delta, n0) selection for one lemma"""

    gamma: Optional[float] = Field(None, gt=0, lt=1, description="hypothesis margin gamma")
    epsilon: float = Field(gt=0)
    delta: float = Field(gt=0, lt=1)
    n0: int = Field(ge=1, description="smallest n from which the discriminant stays negative")
    which_lemma: Literal["lemma3", "lemma5"]
    c: Optional[float] = Field(None, description="binomial-ratio constant (lemma5 only)")


class DiscriminantReport(BaseModel):
    n: int = Field(ge=1)
    value: float = Field(description="discriminant of the quadratic in k")
    negative: bool


class BoundsReport(BaseModel):
    """Everything derived from (gamma, mu, sigma, n, b)"""

    inputs: Dict[str, Optional[float]]
    lemma3: RegimeParams
    n0_proof_bound: int = Field(description="n0 from the proof's simplified bound")
    discriminant: DiscriminantReport
    vertex_value: float = Field(description="f(k*) at the parabola vertex")
    hoeffding_bound: Optional[float] = Field(None, description="exp(-delta^2 mu^2 C(n,2)/b^2)")
    log_hoeffding_bound: Optional[float] = None
    theorem_lower_bound: Optional[float] = None
    theorem_status: Literal["valid", "not yet valid"]
    regime_indicators: Optional[Dict[str, float]] = None
    lemma5_discriminant: Optional[DiscriminantReport] = None
