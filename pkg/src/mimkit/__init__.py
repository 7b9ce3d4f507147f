"""Missing indicator preprocessing for supervised learning with missing data.

Zero (mean) imputation after observed-entry standardization, plus missing
indicators for all partially observed features (MIM), for the ones whose
missingness is associated with the response (selective MIM), or for a known
informative set (oracle).  Also ships synthetic generators, masking
mechanisms, linear/logistic predictors and an experiment runner.
"""

from .masking import (
    BlockMaskSpec,
    MaskSpec,
    apply_self_mask,
    draw_block_mask_spec,
    mask_probability,
)
from .preprocess import (
    AugmentedMatrix,
    FittedPipeline,
    SelectionResult,
    StandardizeParams,
    add_indicators,
    encode_categorical_missing,
    fit_pipeline,
    fit_standardizer,
    impute_mean,
    oracle_select,
    smim_select,
    transform_standardize,
)
from .tabular import MaskedDataset, Response, SeedStream, split_train_test

__version__ = "0.1.0"

__all__ = [
    "AugmentedMatrix",
    "BlockMaskSpec",
    "FittedPipeline",
    "MaskSpec",
    "MaskedDataset",
    "Response",
    "SeedStream",
    "SelectionResult",
    "StandardizeParams",
    "add_indicators",
    "apply_self_mask",
    "draw_block_mask_spec",
    "encode_categorical_missing",
    "fit_pipeline",
    "fit_standardizer",
    "impute_mean",
    "mask_probability",
    "oracle_select",
    "smim_select",
    "split_train_test",
    "transform_standardize",
]
