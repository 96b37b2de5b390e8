"""
Random weighted graph ensembles
Bounded i.i.d. off-diagonal weights with exact moment accounting
"""
import math
from typing import Dict, Literal, Optional

from pydantic import BaseModel, ConfigDict, Field, model_validator

FamilyName = Literal["bernoulli", "uniform", "shifted_rademacher"]

_REQUIRED_PARAMS = {
    "bernoulli": {"p"},
    "uniform": {"a", "b"},
    "shifted_rademacher": {"mu"},
}


def _check_family_params(family: str, params: Dict[str, float]) -> None:
    for key, value in params.items():
        if not math.isfinite(value):
            raise ValueError(f"parameter {key} must be finite")
    if family == "bernoulli":
        if not 0.0 <= params["p"] <= 1.0:
            raise ValueError("bernoulli p must lie in [0, 1]")
    elif family == "uniform":
        if not params["a"] < params["b"]:
            raise ValueError("uniform requires a < b")
    elif family == "shifted_rademacher":
        if not -1.0 <= params["mu"] <= 1.0:
            raise ValueError("shifted_rademacher mu must lie in [-1, 1]")


class EnsembleSpec(BaseModel):
    """One weight distribution at a fixed size n"""

    family: FamilyName
    params: Dict[str, float] = Field(description="family parameters")
    n: int = Field(ge=1, description="vertex count")

    model_config = ConfigDict(
        frozen=True,
        json_schema_extra={
            "example": {"family": "bernoulli", "params": {"p": 0.5}, "n": 50}
        },
    )

    @model_validator(mode="after")
    def _validate_params(self) -> "EnsembleSpec":
        missing = _REQUIRED_PARAMS[self.family] - set(self.params)
        if missing:
            raise ValueError(f"{self.family} needs parameters {sorted(missing)}")
        _check_family_params(self.family, self.params)
        return self

    @property
    def mu(self) -> float:
        """Mean of one off-diagonal weight"""
        if self.family == "bernoulli":
            return self.params["p"]
        if self.family == "uniform":
            return (self.params["a"] + self.params["b"]) / 2.0
        return self.params["mu"]

    @property
    def sigma(self) -> float:
        """Standard deviation of one off-diagonal weight"""
        if self.family == "bernoulli":
            p = self.params["p"]
            return math.sqrt(p * (1.0 - p))
        if self.family == "uniform":
            return (self.params["b"] - self.params["a"]) / math.sqrt(12.0)
        mu = self.params["mu"]
        return math.sqrt(max(0.0, 1.0 - mu * mu))

    @property
    def bound(self) -> float:
        """Almost-sure bound B on |weight|"""
        if self.family == "uniform":
            return max(abs(self.params["a"]), abs(self.params["b"]))
        return 1.0

    @property
    def support(self) -> tuple:
        """(lower, upper) range of one weight"""
        if self.family == "bernoulli":
            return (0.0, 1.0)
        if self.family == "uniform":
            return (self.params["a"], self.params["b"])
        return (-1.0, 1.0)


class FamilySpec(BaseModel):
    """A family whose parameters may depend on n

    For shifted_rademacher, ``mu_exponent`` alpha resolves to mu = n^(-alpha).
    """

    family: FamilyName
    params: Dict[str, float] = Field(default_factory=dict)
    mu_exponent: Optional[float] = Field(None, gt=0, description="mu = n^(-alpha)")

    model_config = ConfigDict(frozen=True)

    @model_validator(mode="after")
    def _validate(self) -> "FamilySpec":
        if self.mu_exponent is not None and self.family != "shifted_rademacher":
            raise ValueError("mu_exponent only applies to shifted_rademacher")
        required = set(_REQUIRED_PARAMS[self.family])
        if self.mu_exponent is not None:
            required.discard("mu")
        missing = required - set(self.params)
        if missing:
            raise ValueError(f"{self.family} needs parameters {sorted(missing)}")
        return self

    def resolve(self, n: int) -> EnsembleSpec:
        """Concrete spec at size n"""
        params = dict(self.params)
        if self.mu_exponent is not None:
            params["mu"] = float(n) ** (-self.mu_exponent)
        return EnsembleSpec(family=self.family, params=params, n=n)


class SeedSpec(BaseModel):
    """Master seed plus trial index; the substream seed is mix(master, trial)"""

    master_seed: int = Field(ge=0, lt=2**64)
    trial_index: int = Field(ge=0)

    model_config = ConfigDict(frozen=True)
