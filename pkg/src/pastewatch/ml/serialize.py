"""Versioned model persistence (structured JSON text).

The file embeds the format tag, the model kind, the metric-catalog
version, and (for the CNN) the architecture hash, so stale or mismatched
models are rejected on load instead of producing silent garbage."""

from __future__ import annotations

import json
from dataclasses import asdict

import numpy as np

from ..errors import CorruptModel, SchemaMismatch
from .baselines import BASELINE_KINDS, make_baseline
from .cnn import CnnSpec, ModelParams

FORMAT = "pastewatch-model-v1"


def save_model(model, kind: str, path, catalog_version: str = "v1"):
    if kind == "cnn":
        assert isinstance(model, ModelParams)
        payload = {
            "format": FORMAT, "kind": "cnn",
            "catalog_version": model.catalog_version,
            "spec": asdict(model.spec), "spec_hash": model.spec_hash,
            "arrays": {k: v.tolist() for k, v in model.arrays.items()},
        }
    elif kind in BASELINE_KINDS:
        payload = {
            "format": FORMAT, "kind": kind,
            "catalog_version": catalog_version,
            "state": model.state(),
        }
    else:
        raise ValueError(f"unknown model kind {kind!r}")
    with open(path, "w", encoding="utf-8") as fh:
        json.dump(payload, fh)


def load_model(path, catalog_version: str = "v1"):
    """Returns (kind, model). Raises CorruptModel on unreadable files and
    SchemaMismatch on catalog/format disagreements."""
    try:
        with open(path, encoding="utf-8") as fh:
            payload = json.load(fh)
    except (OSError, json.JSONDecodeError, UnicodeDecodeError) as exc:
        raise CorruptModel(f"cannot read model file: {exc}") from exc
    if not isinstance(payload, dict) or payload.get("format") != FORMAT:
        raise CorruptModel("not a pastewatch model file")
    if payload.get("catalog_version") != catalog_version:
        raise SchemaMismatch(
            f"model was trained against catalog "
            f"{payload.get('catalog_version')!r}, expected "
            f"{catalog_version!r}")
    kind = payload.get("kind")
    try:
        if kind == "cnn":
            spec = CnnSpec(**payload["spec"])
            if payload["spec_hash"] != spec.hash():
                raise SchemaMismatch("architecture hash mismatch")
            arrays = {k: np.asarray(v) for k, v in payload["arrays"].items()}
            return kind, ModelParams(spec=spec, arrays=arrays,
                                     catalog_version=payload[
                                         "catalog_version"])
        if kind in BASELINE_KINDS:
            return kind, make_baseline(kind).load_state(payload["state"])
    except SchemaMismatch:
        raise
    except (KeyError, TypeError, ValueError) as exc:
        raise CorruptModel(f"malformed model payload: {exc}") from exc
    raise CorruptModel(f"unknown model kind {kind!r}")
