from typing import Dict, List, Literal, Optional

from pydantic import BaseModel, ConfigDict, Field, field_validator, model_validator


# Network file schemas
class EdgeRecord(BaseModel):
    u: str
    v: str
    c: float

    @field_validator("u", "v", mode="before")
    @classmethod
    def coerce_label(cls, value):
        return str(value) if isinstance(value, int) else value


class NetworkFile(BaseModel):
    model_config = ConfigDict(populate_by_name=True)

    version: int = 1
    vertices: List[str]
    edges: List[EdgeRecord] = []
    weight: Optional[Dict[str, float]] = None
    lam: float = Field(default=0.0, alias="lambda")
    normalize: bool = False

    @field_validator("vertices", mode="before")
    @classmethod
    def coerce_labels(cls, value):
        """Integer labels are accepted and stored as strings"""
        if isinstance(value, list):
            return [str(v) if isinstance(v, int) else v for v in value]
        return value


# Matrix file schemas
class MatrixFile(BaseModel):
    order: List[str]
    rows: List[List[float]]

    @model_validator(mode="after")
    def check_square(self):
        n = len(self.order)
        if len(self.rows) != n or any(len(row) != n for row in self.rows):
            raise ValueError(f"matrix must be {n} x {n} to match its order")
        return self


# Bench schemas
class BenchRow(BaseModel):
    n: int
    m: int
    t_update_ms: float
    t_recompute_ms: float
    speedup: float
    max_dev: float


# Selfcheck schemas
class CheckResult(BaseModel):
    name: str
    fixture: str
    seed: Optional[int] = None
    value: float
    tolerance: float
    passed: bool
    # "upper": value <= tolerance, "lower": value > tolerance
    bound: Literal["upper", "lower"] = "upper"

    @property
    def violation(self) -> str:
        if self.bound == "lower":
            return f"{self.value:.3e} <= {self.tolerance:.3e}"
        return f"{self.value:.3e} > {self.tolerance:.3e}"


class SelfcheckReport(BaseModel):
    seed: int
    cases: int
    checks: List[CheckResult] = []
    findings: List[str] = []

    @property
    def failures(self) -> List[CheckResult]:
        return [check for check in self.checks if not check.passed]

    @property
    def passed(self) -> bool:
        return not self.failures
