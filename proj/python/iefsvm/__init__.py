"""Entropy-weighted support vector machines for imbalanced binary data."""

from ._core import (
    Model,
    auc,
    binary_entropy,
    enumerate_patterns,
    holm_test,
    memberships,
    train,
    wilcoxon_signed_rank,
)

__all__ = [
    "Model",
    "auc",
    "binary_entropy",
    "enumerate_patterns",
    "holm_test",
    "memberships",
    "train",
    "wilcoxon_signed_rank",
]
