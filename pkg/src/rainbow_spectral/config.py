from __future__ import annotations

import os
from dataclasses import dataclass
from typing import Optional


DEFAULT_TOL = 1e-10
SPECTRAL_MARGIN = 1e-9
CROSS_CHECK_TOL = 1e-8
ITERATION_CAP = 10**6
DEFAULT_BUDGET = 10**8
DEFAULT_SAMPLES = 10**5
DEFAULT_EXTREMAL_MIX = 0.05

GRAPH6_MAX_N = 62
ISOMORPHISM_MAX_N = 8

OUTPUT_FORMATS = ("text", "json")


def _env(name: str) -> Optional[str]:
    value = os.getenv(name)
    if value is None or value.strip() == "":
        return None
    return value.strip()


@dataclass(frozen=True)
class ToolkitConfig:
    tolerance: float = DEFAULT_TOL
    budget: int = DEFAULT_BUDGET
    seed: int = 0
    output: str = "text"
    workers: int = 1

    def __post_init__(self) -> None:
        if not self.tolerance > 0:
            raise ValueError(f"Tolerance must be positive, got {self.tolerance}.")
        if self.budget < 1:
            raise ValueError(f"Budget must be at least 1, got {self.budget}.")
        if not 0 <= self.seed < 2**64:
            raise ValueError("Seed must be a 64-bit unsigned integer.")
        if self.output not in OUTPUT_FORMATS:
            raise ValueError(f"Output must be one of {', '.join(OUTPUT_FORMATS)}.")
        if self.workers < 0:
            raise ValueError("Workers must be >= 0 (0 selects the physical core count).")

    @property
    def resolved_workers(self) -> int:
        if self.workers > 0:
            return self.workers
        import psutil

        return psutil.cpu_count(logical=False) or 1


def load_config(
    tolerance: Optional[float] = None,
    budget: Optional[int] = None,
    seed: Optional[int] = None,
    output: Optional[str] = None,
    workers: Optional[int] = None,
) -> ToolkitConfig:
    """Explicit values win, then SRM_* environment variables, then defaults."""
    try:
        env_tol = _env("SRM_TOL")
        env_budget = _env("SRM_BUDGET")
        env_seed = _env("SRM_SEED")
        env_workers = _env("SRM_WORKERS")
        return ToolkitConfig(
            tolerance=tolerance
            if tolerance is not None
            else (float(env_tol) if env_tol else DEFAULT_TOL),
            budget=budget
            if budget is not None
            else (int(env_budget) if env_budget else DEFAULT_BUDGET),
            seed=seed if seed is not None else (int(env_seed) if env_seed else 0),
            output=output or "text",
            workers=workers
            if workers is not None
            else (int(env_workers) if env_workers else 1),
        )
    except (TypeError, OverflowError) as exc:
        raise ValueError(str(exc)) from exc


def default_tolerance() -> float:
    env_tol = _env("SRM_TOL")
    if env_tol is None:
        return DEFAULT_TOL
    value = float(env_tol)
    if not value > 0:
        raise ValueError(f"SRM_TOL must be positive, got {env_tol}.")
    return value
