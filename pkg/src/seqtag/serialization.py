"""Versioned JSON model files for both taggers.

Arrays are stored as ``{"shape": [...], "data": [...]}`` with row-major
data; Python's float repr makes the decimal text round-trip exactly.
"""

from __future__ import annotations

import json

import numpy as np

from seqtag.crf.model import CrfModel
from seqtag.neural.config import NeuralConfig
from seqtag.neural.model import NeuralModel, init_params

FORMAT_VERSION = 1


class ModelFormatError(ValueError):
    """A model file that cannot be loaded; ``field`` names the offending entry."""

    def __init__(self, field: str, message: str):
        super().__init__(f"{field}: {message}")
        self.field = field


def _encode(arr) -> dict:
    arr = np.asarray(arr, dtype=float)
    if not np.all(np.isfinite(arr)):
        raise ValueError("cannot serialise non-finite weights")
    return {"shape": list(arr.shape), "data": arr.ravel().tolist()}


def _decode(obj, field: str, shape=None) -> np.ndarray:
    try:
        declared = tuple(int(d) for d in obj["shape"])
        arr = np.array(obj["data"], dtype=float)
    except (KeyError, TypeError, ValueError) as exc:
        raise ModelFormatError(field, f"bad array encoding ({exc})") from None
    if arr.ndim != 1 or arr.size != int(np.prod(declared)):
        raise ModelFormatError(field, f"{arr.size} values do not fill shape {list(declared)}")
    if shape is not None and declared != tuple(shape):
        raise ModelFormatError(field, f"shape {list(declared)} != expected {list(shape)}")
    return arr.reshape(declared)


def _require(doc: dict, field: str):
    if field not in doc:
        raise ModelFormatError(field, "missing")
    return doc[field]


def _index(doc, field) -> dict:
    idx = _require(doc, field)
    if not isinstance(idx, dict) or sorted(idx.values()) != list(range(len(idx))):
        raise ModelFormatError(field, "must map names to ids 0..n-1")
    return {str(k): int(v) for k, v in idx.items()}


def crf_to_dict(model: CrfModel) -> dict:
    meta = model.metadata or {}
    return {
        "format_version": FORMAT_VERSION,
        "model_type": "crf",
        "label_index": model.label_index,
        "feature_index": model.feature_index,
        "unary_weights": _encode(model.unary_weights),
        "transition_weights": _encode(model.transition_weights),
        "train_config": meta.get("train_config", {}),
        "seed": meta.get("seed"),
    }


def crf_from_dict(doc: dict) -> CrfModel:
    labels = _index(doc, "label_index")
    feats = _index(doc, "feature_index")
    F, L = len(feats), len(labels)
    unary = _decode(_require(doc, "unary_weights"), "unary_weights", (F, L))
    trans = _decode(_require(doc, "transition_weights"), "transition_weights", (L + 1, L))
    meta = {"train_config": doc.get("train_config", {}), "seed": doc.get("seed")}
    return CrfModel(feats, labels, unary, trans, meta)


def neural_to_dict(model: NeuralModel) -> dict:
    return {
        "format_version": FORMAT_VERSION,
        "model_type": "neural",
        "config": model.config.as_dict(),
        "vocab_index": model.vocab_index,
        "char_index": model.char_index,
        "label_index": model.label_index,
        "parameters": {k: _encode(v) for k, v in model.params.items()},
    }


def neural_from_dict(doc: dict) -> NeuralModel:
    try:
        config = NeuralConfig(**_require(doc, "config"))
    except TypeError as exc:
        raise ModelFormatError("config", str(exc)) from None
    vocab = _index(doc, "vocab_index")
    chars = _index(doc, "char_index")
    labels = _index(doc, "label_index")
    # a throwaway initialisation gives the expected name -> shape table
    expected = init_params(config, len(vocab), len(chars), len(labels), np.random.default_rng(0))
    stored = _require(doc, "parameters")
    params = {}
    for name, ref in expected.items():
        if name not in stored:
            raise ModelFormatError(f"parameters.{name}", "missing")
        params[name] = _decode(stored[name], f"parameters.{name}", ref.shape)
    extra = set(stored) - set(expected)
    if extra:
        raise ModelFormatError("parameters", f"unexpected tensors {sorted(extra)}")
    return NeuralModel(config, vocab, chars, labels, params)


def model_to_dict(model) -> dict:
    if isinstance(model, CrfModel):
        return crf_to_dict(model)
    if isinstance(model, NeuralModel):
        return neural_to_dict(model)
    raise TypeError(f"cannot serialise {type(model).__name__}")


def model_from_dict(doc) -> CrfModel | NeuralModel:
    if not isinstance(doc, dict):
        raise ModelFormatError("document", "expected a JSON object")
    version = _require(doc, "format_version")
    if version != FORMAT_VERSION:
        raise ModelFormatError("format_version",
                               f"unsupported version {version!r} (expected {FORMAT_VERSION})")
    kind = doc.get("model_type")
    if kind == "crf":
        return crf_from_dict(doc)
    if kind == "neural":
        return neural_from_dict(doc)
    raise ModelFormatError("model_type", f"unknown model type {kind!r}")


def dumps(model) -> str:
    return json.dumps(model_to_dict(model), allow_nan=False, ensure_ascii=False)


def loads(text: str):
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ModelFormatError("document", f"not valid JSON, file truncated? ({exc})") from None
    return model_from_dict(doc)


def save_model(model, path) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        fh.write(dumps(model))


def load_model(path):
    with open(path, encoding="utf-8") as fh:
        return loads(fh.read())
