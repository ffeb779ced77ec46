"""Serialised phrase models: SVM/SVR weights plus their preprocessing.

A bundle holds everything needed to score new phrases: the fitted model,
the feature configuration (including the training vocabulary), and the
scaler parameters.  Stored as a single JSON document.
"""

from __future__ import annotations

import json

import numpy as np

from .embeddings import EmbeddingStore
from .errors import ValidationError
from .features import (
    FeatureConfig,
    MinMaxScaler,
    build_matrix,
    config_from_dict,
    config_to_dict,
)
from .lexicon import PhraseRecord
from .svm import SvmModel

FORMAT_NAME = "phrase-model"
FORMAT_VERSION = 1


def bundle_to_json(model: SvmModel, config: FeatureConfig, scaler: MinMaxScaler) -> str:
    payload = {
        "format": FORMAT_NAME,
        "version": FORMAT_VERSION,
        "model": model.to_dict(),
        "config": config_to_dict(config),
        "scaler": scaler.to_dict(),
    }
    return json.dumps(payload, sort_keys=True)


def bundle_from_json(
    text: str, tag_map: dict[str, str] | None = None
) -> tuple[SvmModel, FeatureConfig, MinMaxScaler]:
    try:
        payload = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ValidationError(f"model file is not valid JSON: {exc}") from None
    if not isinstance(payload, dict) or payload.get("format") != FORMAT_NAME:
        raise ValidationError("not a phrase-model file")
    if payload.get("version") != FORMAT_VERSION:
        raise ValidationError(f"unsupported model version {payload.get('version')!r}")
    for key in ("model", "config", "scaler"):
        if key not in payload:
            raise ValidationError(f"model file missing {key!r}")
    model = SvmModel.from_dict(payload["model"])
    config = config_from_dict(payload["config"], tag_map)
    scaler = MinMaxScaler.from_dict(payload["scaler"])
    if scaler.lo.shape[0] != config.length:
        raise ValidationError(
            f"scaler covers {scaler.lo.shape[0]} dimensions but the feature "
            f"configuration produces {config.length}"
        )
    return model, config, scaler


def predict_records(
    model: SvmModel,
    config: FeatureConfig,
    scaler: MinMaxScaler,
    records: list[PhraseRecord],
    store: EmbeddingStore | None = None,
) -> np.ndarray:
    """Raw decision values for the given phrases."""
    X = scaler.transform(build_matrix(records, config, store))
    return model.decision(X)
