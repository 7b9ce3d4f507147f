"""Experiment configuration (a single JSON document; unknown keys are rejected)."""

from __future__ import annotations

import json
from pathlib import Path
from typing import Annotated, Literal, Optional, Union

from pydantic import BaseModel, ConfigDict, Field, model_validator


class _Strict(BaseModel):
    model_config = ConfigDict(extra="forbid", frozen=True)


class LowDimSource(_Strict):
    kind: Literal["lowdim"]
    n: int = Field(gt=0)
    p: int = Field(gt=0)
    rho: float = Field(0.3, ge=0.0, lt=1.0)
    snr: float = Field(10.0, gt=0.0)


class HighDimSource(_Strict):
    kind: Literal["highdim"]
    n: int = Field(gt=0)
    block_count: int = Field(100, gt=0)
    block_size: int = Field(10, gt=0)
    rho_within: float = Field(0.5, ge=0.0, lt=1.0)
    snr: float = Field(10.0, gt=0.0)

    @property
    def p(self) -> int:
        return self.block_count * self.block_size


class CsvSource(_Strict):
    kind: Literal["csv"]
    path: str
    response: str
    response_kind: Literal["continuous", "categorical"] = "continuous"
    categorical: list[str] = []
    missing_markers: list[str] = ["", "NA", "NaN"]


DataSource = Annotated[Union[LowDimSource, HighDimSource, CsvSource], Field(discriminator="kind")]


class NoMask(_Strict):
    kind: Literal["none"]


class SelfMask(_Strict):
    kind: Literal["self_masking"]
    lam: Union[float, list[float]] = Field(0.0, alias="lambda")


class McarMask(_Strict):
    kind: Literal["mcar"]
    rate: float = Field(ge=0.0, le=1.0)


class BlockMask(_Strict):
    kind: Literal["block"]
    informative_lambda: float = 2.0
    p_inf: float = Field(0.5, ge=0.0, le=1.0)


MaskConfig = Annotated[Union[NoMask, SelfMask, McarMask, BlockMask], Field(discriminator="kind")]


class PipelineConfig(_Strict):
    id: Optional[str] = None
    imputer: Literal["mean"] = "mean"
    indicators: Literal["none", "mim", "smim", "omim"] = "none"
    indicator_centering: bool = False

    @property
    def pipeline_id(self) -> str:
        if self.id:
            return self.id
        centered = self.indicator_centering and self.indicators != "none"
        return self.indicators + ("-centered" if centered else "")


class ExperimentConfig(_Strict):
    data_source: DataSource
    mask: MaskConfig = NoMask(kind="none")
    pipelines: list[PipelineConfig] = Field(min_length=1)
    model: Literal["linear", "logistic"] = "linear"
    ridge: Optional[float] = Field(None, ge=0.0)
    trials: int = Field(20, gt=0)
    train_fraction: float = Field(0.75, gt=0.0, lt=1.0)
    alpha: float = Field(0.1, gt=0.0, lt=1.0)
    master_seed: int = Field(0, ge=0, lt=2 ** 64)
    lambda_grid: Optional[list[float]] = None
    p_inf_grid: Optional[list[float]] = None
    logistic_max_iter: int = Field(100, gt=0)
    logistic_tol: float = Field(1e-8, gt=0.0)

    @model_validator(mode="after")
    def _check(self):
        ids = [p.pipeline_id for p in self.pipelines]
        if len(set(ids)) != len(ids):
            raise ValueError(f"pipeline ids must be unique, got {ids}")
        synthetic = self.data_source.kind in ("lowdim", "highdim")
        if any(p.indicators == "omim" for p in self.pipelines):
            if not synthetic:
                raise ValueError("omim needs ground-truth lambdas and is only allowed with synthetic data")
        continuous = synthetic or self.data_source.response_kind == "continuous"
        if continuous and self.model != "linear":
            raise ValueError("a continuous response needs model='linear'")
        if not continuous and self.model != "logistic":
            raise ValueError("a categorical response needs model='logistic'")
        if self.lambda_grid is not None and self.p_inf_grid is not None:
            raise ValueError("sweep either lambda_grid or p_inf_grid, not both")
        if self.lambda_grid is not None:
            if self.mask.kind != "self_masking":
                raise ValueError("lambda_grid needs mask kind 'self_masking'")
            if not self.lambda_grid:
                raise ValueError("lambda_grid must not be empty")
        if self.p_inf_grid is not None:
            if self.mask.kind != "block":
                raise ValueError("p_inf_grid needs mask kind 'block'")
            if not self.p_inf_grid or any(not 0.0 <= v <= 1.0 for v in self.p_inf_grid):
                raise ValueError("p_inf_grid values must lie in [0, 1]")
        if self.data_source.kind == "csv" and self.data_source.categorical and self.mask.kind != "none":
            raise ValueError("synthetic masking of CSV data with categorical columns is not supported")
        if self.mask.kind == "block" and self.data_source.kind != "highdim":
            raise ValueError("block masking needs a highdim data source")
        if self.mask.kind == "self_masking" and isinstance(self.mask.lam, list):
            if self.lambda_grid is not None:
                raise ValueError("per-feature lambda lists cannot be combined with lambda_grid")
        return self

    @property
    def effective_ridge(self) -> float:
        if self.ridge is not None:
            return self.ridge
        return 1e-6 if self.model == "linear" else 1e-4

    @property
    def sweep_name(self) -> Optional[str]:
        if self.lambda_grid is not None:
            return "lambda"
        if self.p_inf_grid is not None:
            return "p_inf"
        return None

    @property
    def sweep_values(self) -> list[Optional[float]]:
        if self.lambda_grid is not None:
            return [float(v) for v in self.lambda_grid]
        if self.p_inf_grid is not None:
            return [float(v) for v in self.p_inf_grid]
        return [None]


def load_config(path) -> ExperimentConfig:
    """Parse a JSON config; a relative CSV path is resolved against the config's directory."""
    path = Path(path)
    config = ExperimentConfig.model_validate(json.loads(path.read_text(encoding="utf-8")))
    src = config.data_source
    if src.kind == "csv" and not Path(src.path).is_absolute():
        src = src.model_copy(update={"path": str(path.parent / src.path)})
        config = config.model_copy(update={"data_source": src})
    return config
