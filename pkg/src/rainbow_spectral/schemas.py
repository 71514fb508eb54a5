from __future__ import annotations

from typing import Any, Literal, Optional

import orjson
from pydantic import BaseModel, ConfigDict, Field, model_validator

from .config import (
    DEFAULT_BUDGET,
    DEFAULT_EXTREMAL_MIX,
    DEFAULT_SAMPLES,
    DEFAULT_TOL,
    GRAPH6_MAX_N,
    SPECTRAL_MARGIN,
)


SweepMode = Literal["exhaustive", "filtered-exhaustive", "sampled"]
CertificateKind = Literal["T11", "T12", "T13", "PROP"]
Outcome = Literal["PASS", "COUNTEREXAMPLE"]


class SweepPlan(BaseModel):
    model_config = ConfigDict(frozen=True)

    n: int = Field(ge=2, le=GRAPH6_MAX_N)
    m: int = Field(ge=1)
    mode: SweepMode = "exhaustive"
    samples: int = Field(default=DEFAULT_SAMPLES, ge=1)
    seed: int = Field(default=0, ge=0, lt=2**64)
    margin: float = Field(default=SPECTRAL_MARGIN, ge=0)
    tol: float = Field(default=DEFAULT_TOL, gt=0)
    budget: int = Field(default=DEFAULT_BUDGET, ge=1)
    extremal_mix: float = Field(default=DEFAULT_EXTREMAL_MIX, ge=0, le=1)
    workers: int = Field(default=1, ge=1)
    emit_all: bool = False

    @model_validator(mode="after")
    def _exhaustive_within_budget(self) -> "SweepPlan":
        if self.mode != "sampled" and self.n * (self.n - 1) // 2 > 62:
            raise ValueError(
                f"Exhaustive modes enumerate 2^C(n,2) graphs; n={self.n} is out of reach."
            )
        return self


class CertificateParams(BaseModel):
    model_config = ConfigDict(frozen=True)

    n: int
    m: int
    regime: str
    check: str
    mode: str
    seed: Optional[int] = None
    margin: float = SPECTRAL_MARGIN
    tol: float = DEFAULT_TOL
    index: Optional[list[int]] = None


class Certificate(BaseModel):
    """
    One verification outcome. ``instance`` holds graph6 strings (one per family
    member); ``measured`` carries every rho with its residual; a COUNTEREXAMPLE
    holds enough to re-run the instance through ``verify.replay``.
    """

    model_config = ConfigDict(frozen=True)

    kind: CertificateKind
    params: CertificateParams
    instance: list[str]
    measured: dict[str, Any]
    outcome: Outcome
    witness: Optional[dict[str, Any]] = None

    @property
    def is_summary(self) -> bool:
        return bool(self.witness) and "summary" in self.witness

    def to_json_line(self) -> bytes:
        return orjson.dumps(self.model_dump(mode="json")) + b"\n"

    @classmethod
    def from_json_line(cls, line: bytes | str) -> "Certificate":
        return cls.model_validate(orjson.loads(line))
