"""
Pydantic models for run configuration.
"""

import os
from pathlib import Path
from typing import List, Literal, Optional, Tuple

from pydantic import BaseModel, Field, field_validator, model_validator

METHODS: Tuple[str, ...] = (
    "netshield",
    "netshield_plus",
    "eps_qp",
    "eps_qp_batched",
    "nsga2",
    "sms_emoa",
    "hybrid_nsga2",
    "hybrid_sms",
)
STOCHASTIC_METHODS = ("nsga2", "sms_emoa", "hybrid_nsga2", "hybrid_sms")
HYBRID_METHODS = ("hybrid_nsga2", "hybrid_sms")
WORKERS_ENV = "NETIMMUNE_WORKERS"


def default_workers() -> int:
    value = os.environ.get(WORKERS_ENV, "1")
    try:
        return max(int(value), 1)
    except ValueError:
        return 1


class GaConfig(BaseModel):
    """Parameters of one evolutionary run."""
    population_size: int = Field(100, ge=2, description="Individuals kept per generation")
    p_m: Optional[float] = Field(None, ge=0.0, le=1.0, description="Per-bit mutation probability, 1/n when unset")
    p_c: float = Field(0.75, ge=0.0, le=1.0, description="Crossover probability")
    evaluation_budget: int = Field(10000, ge=1, description="Evaluations (or iterations) per run")
    seed: int = Field(0, description="Seed of the run's random stream")
    algorithm: Literal["nsga2", "sms_emoa"] = Field("nsga2")
    reference_point: Optional[Tuple[float, float]] = Field(
        None, description="Fixed (delta_lambda, cost) reference for SMS-EMOA selection"
    )
    memoize: bool = Field(True, description="Serve repeated genotypes from the cache without spending budget")
    budget_mode: Literal["evaluations", "iterations"] = Field("evaluations")
    stall_factor: int = Field(10, ge=1, description="Stop after stall_factor x budget offspring")
    trace: bool = Field(False, description="Record population hypervolume after every step")

    @model_validator(mode="after")
    def _budget_covers_population(self) -> "GaConfig":
        if self.budget_mode == "evaluations" and self.evaluation_budget < self.population_size:
            raise ValueError(
                f"evaluation_budget ({self.evaluation_budget}) must be at least "
                f"population_size ({self.population_size})"
            )
        return self

    def resolved_p_m(self, n: int) -> float:
        if self.p_m is not None:
            return self.p_m
        return 1.0 / n if n else 0.0


class ExperimentConfig(BaseModel):
    """One `netimmune solve` invocation."""
    graph: str = Field(..., description="Edge-list path, generator spec or bundled dataset name")
    method: Literal[
        "netshield",
        "netshield_plus",
        "eps_qp",
        "eps_qp_batched",
        "nsga2",
        "sms_emoa",
        "hybrid_nsga2",
        "hybrid_sms",
    ]
    k: Optional[int] = Field(None, ge=0, description="Selection size for the NetShield methods")
    batch: List[int] = Field(default_factory=list, description="Batch sizes b")
    eps_max: Optional[int] = Field(None, ge=0, description="Largest budget of the grid, sum of costs when unset")
    eps_stride: int = Field(1, ge=1)
    population_size: int = Field(100, ge=2)
    p_m: Optional[float] = Field(None, ge=0.0, le=1.0)
    p_c: float = Field(0.75, ge=0.0, le=1.0)
    evaluation_budget: int = Field(10000, ge=1)
    budget_mode: Literal["evaluations", "iterations"] = Field("evaluations")
    memoize: bool = True
    stall_factor: int = Field(10, ge=1)
    reference_point: Optional[Tuple[float, float]] = None
    trace: bool = False
    runs: int = Field(5, ge=1)
    seed: int = 0
    out: Path = Field(Path("results"))
    largest_component: bool = False
    workers: int = Field(default_factory=default_workers, ge=1)
    eigen_solver: Literal["power", "dense"] = "power"
    node_limit: Optional[int] = Field(
        None, ge=1, description="Branch nodes per exact solve, unlimited when unset"
    )

    @field_validator("batch")
    @classmethod
    def _positive_batches(cls, value: List[int]) -> List[int]:
        if any(b < 1 for b in value):
            raise ValueError("batch sizes must be >= 1")
        return value

    @model_validator(mode="after")
    def _method_parameters(self) -> "ExperimentConfig":
        if self.method in ("netshield", "netshield_plus") and self.k is None:
            raise ValueError(f"method {self.method} requires k")
        if self.method in HYBRID_METHODS and not self.batch:
            self.batch = [1]
        if self.method in ("netshield_plus", "eps_qp_batched") and not self.batch:
            raise ValueError(f"method {self.method} requires at least one batch size")
        if self.method == "netshield_plus":
            if len(self.batch) != 1:
                raise ValueError("netshield_plus takes exactly one batch size")
            if self.batch[0] > self.k:
                raise ValueError(f"batch size {self.batch[0]} exceeds k={self.k}")
        if self.stochastic and self.budget_mode == "evaluations" and self.evaluation_budget < self.population_size:
            raise ValueError(
                f"evaluation_budget ({self.evaluation_budget}) must be at least "
                f"population_size ({self.population_size})"
            )
        return self

    @property
    def stochastic(self) -> bool:
        return self.method in STOCHASTIC_METHODS

    @property
    def algorithm(self) -> str:
        return "sms_emoa" if self.method in ("sms_emoa", "hybrid_sms") else "nsga2"

    def ga_fields(self, seed: int) -> dict:
        return {
            "population_size": self.population_size,
            "p_m": self.p_m,
            "p_c": self.p_c,
            "evaluation_budget": self.evaluation_budget,
            "seed": seed,
            "algorithm": self.algorithm,
            "reference_point": self.reference_point,
            "memoize": self.memoize,
            "budget_mode": self.budget_mode,
            "stall_factor": self.stall_factor,
            "trace": self.trace,
        }

    def ga_config(self, run_index: int) -> GaConfig:
        """GaConfig of repetition run_index, seeded with seed + run_index."""
        return GaConfig(**self.ga_fields(self.seed + run_index))
