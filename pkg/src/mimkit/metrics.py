"""Test-set metrics; the reported values are all 'lower is better'."""

from __future__ import annotations

import numpy as np
from scipy.stats import rankdata

RMSE = "rmse"
ONE_MINUS_AUC = "one_minus_auc"
ONE_MINUS_ACCURACY = "one_minus_accuracy"


def rmse(pred, truth) -> float:
    pred = np.asarray(pred, dtype=np.float64).ravel()
    truth = np.asarray(truth, dtype=np.float64).ravel()
    if pred.size == 0:
        raise ValueError("rmse of an empty vector")
    if pred.shape != truth.shape:
        raise ValueError(f"length mismatch: {pred.size} vs {truth.size}")
    return float(np.sqrt(np.mean((pred - truth) ** 2)))


def auc(scores, labels) -> float:
    """ROC AUC via the Mann-Whitney U statistic with average ranks for ties."""
    scores = np.asarray(scores, dtype=np.float64).ravel()
    labels = np.asarray(labels).ravel()
    if scores.shape != labels.shape:
        raise ValueError(f"length mismatch: {scores.size} vs {labels.size}")
    pos = labels == 1
    n_pos = int(pos.sum())
    n_neg = labels.size - n_pos
    if n_pos == 0 or n_neg == 0:
        raise ValueError("AUC needs both classes present")
    ranks = rankdata(scores, method="average")
    u = ranks[pos].sum() - n_pos * (n_pos + 1) / 2.0
    return float(u / (n_pos * n_neg))


def accuracy(predicted, labels) -> float:
    predicted = np.asarray(predicted).ravel()
    labels = np.asarray(labels).ravel()
    if labels.size == 0:
        raise ValueError("accuracy of an empty vector")
    if predicted.shape != labels.shape:
        raise ValueError(f"length mismatch: {predicted.size} vs {labels.size}")
    return float(np.mean(predicted == labels))


def metric_for_response(kind: str, n_classes: int) -> str:
    if kind == "continuous":
        return RMSE
    return ONE_MINUS_AUC if n_classes == 2 else ONE_MINUS_ACCURACY
