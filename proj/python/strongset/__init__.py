# Copyright 2026 The strongset Authors.
# SPDX-License-Identifier: Apache-2.0

"""Strong and weak audio event labels: framing, metrics and analysis."""

from strongset._core import (
    IoError,
    ParseError,
    StrongsetError,
    ValidationError,
    Ontology,
    dprime,
    evaluate,
    frame_strong_tsv,
    lwlrap,
    mix_manifest,
    odds_ratio,
    pool_negatives,
    positive_frames,
    probit,
    roc_auc,
)

__all__ = [
    "IoError",
    "ParseError",
    "StrongsetError",
    "ValidationError",
    "Ontology",
    "dprime",
    "evaluate",
    "frame_strong_tsv",
    "lwlrap",
    "mix_manifest",
    "odds_ratio",
    "pool_negatives",
    "positive_frames",
    "probit",
    "roc_auc",
]
