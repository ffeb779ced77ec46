"""Feature vectors for phrase classification and regression.

The vector is a fixed concatenation of blocks, each enabled by a flag:

    [unigram bag | POS one-hot per position | sentiment label per position
     | sentiment score per position | emb concatenated | emb average
     | emb element-max]

Vocabulary order, tagset order, and embedding dimension are frozen inside
a FeatureConfig so train and test rows always line up.  Scaling to [-1, 1]
is fit on training rows only; constant dimensions map to zero.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Iterable, Sequence

import numpy as np

from .embeddings import EmbeddingStore
from .errors import ArgumentError, ValidationError
from .lexicon import PhraseRecord
from .postags import COARSE_TAGS, coarsen

FLAG_NAMES = ("uni", "pos", "label", "score", "emb-conc", "emb-avg", "emb-max")
EMB_FLAGS = ("emb-conc", "emb-avg", "emb-max")


def parse_flags(spec: str) -> frozenset[str]:
    """Parse a comma-separated flag list such as "pos,score,uni"."""
    flags = frozenset(part.strip() for part in spec.split(",") if part.strip())
    unknown = flags - frozenset(FLAG_NAMES)
    if unknown:
        raise ArgumentError(
            f"unknown feature flags: {', '.join(sorted(unknown))} "
            f"(known: {', '.join(FLAG_NAMES)})"
        )
    if not flags:
        raise ArgumentError("no feature flags given")
    return flags


@dataclass(frozen=True)
class FeatureConfig:
    n: int
    flags: frozenset[str]
    vocabulary: tuple[str, ...] = ()
    tagset: tuple[str, ...] = COARSE_TAGS
    emb_dim: int = 0
    tag_map: dict[str, str] | None = field(default=None, compare=False)

    def __post_init__(self):
        unknown = self.flags - frozenset(FLAG_NAMES)
        if unknown:
            raise ArgumentError(f"unknown feature flags: {sorted(unknown)}")
        if self.wants_embeddings and self.emb_dim <= 0:
            raise ArgumentError("embedding flags need a positive emb_dim")

    @property
    def wants_embeddings(self) -> bool:
        return any(f in self.flags for f in EMB_FLAGS)

    @property
    def length(self) -> int:
        total = 0
        if "uni" in self.flags:
            total += len(self.vocabulary)
        if "pos" in self.flags:
            total += self.n * len(self.tagset)
        if "label" in self.flags:
            total += self.n
        if "score" in self.flags:
            total += self.n
        if "emb-conc" in self.flags:
            total += self.n * self.emb_dim
        if "emb-avg" in self.flags:
            total += self.emb_dim
        if "emb-max" in self.flags:
            total += self.emb_dim
        return total


def vocabulary_of(records: Iterable[PhraseRecord]) -> tuple[str, ...]:
    """Sorted distinct constituent tokens of the given records."""
    return tuple(sorted({tok for rec in records for tok in rec.term}))


def make_config(
    records: Sequence[PhraseRecord],
    flags: frozenset[str],
    store: EmbeddingStore | None = None,
    tag_map: dict[str, str] | None = None,
) -> FeatureConfig:
    """Freeze a configuration from training records (vocabulary source)."""
    if not records:
        raise ArgumentError("cannot build a feature config from no records")
    lengths = {len(rec.term) for rec in records}
    if len(lengths) != 1:
        raise ValidationError(f"mixed phrase lengths {sorted(lengths)}")
    n = lengths.pop()
    wants_emb = any(f in flags for f in EMB_FLAGS)
    if wants_emb and store is None:
        raise ArgumentError("embedding flags set but no embedding store given")
    return FeatureConfig(
        n=n,
        flags=frozenset(flags),
        vocabulary=vocabulary_of(records) if "uni" in flags else (),
        emb_dim=store.dim if wants_emb else 0,
        tag_map=tag_map,
    )


def build(
    record: PhraseRecord,
    config: FeatureConfig,
    store: EmbeddingStore | None = None,
) -> np.ndarray:
    """One unscaled feature row in the frozen block order."""
    if len(record.term) != config.n:
        raise ValidationError(
            f"record {record.text!r} has {len(record.term)} tokens, config wants {config.n}"
        )
    if config.wants_embeddings and store is None:
        raise ArgumentError("config uses embeddings but no store was given")
    parts: list[np.ndarray] = []
    if "uni" in config.flags:
        bag = np.zeros(len(config.vocabulary))
        present = set(record.term)
        for idx, token in enumerate(config.vocabulary):
            if token in present:
                bag[idx] = 1.0
        parts.append(bag)
    if "pos" in config.flags:
        onehot = np.zeros(config.n * len(config.tagset))
        for pos_idx, tag in enumerate(record.pos_tags):
            coarse = coarsen(tag, config.tag_map)
            if coarse in config.tagset:
                onehot[pos_idx * len(config.tagset) + config.tagset.index(coarse)] = 1.0
        parts.append(onehot)
    if "label" in config.flags:
        parts.append(
            np.array([1.0 if s >= 0 else -1.0 for s in record.constituent_scores])
        )
    if "score" in config.flags:
        parts.append(np.array(record.constituent_scores, dtype=np.float64))
    if config.wants_embeddings:
        vecs = [store.lookup(tok) for tok in record.term]
        if "emb-conc" in config.flags:
            parts.append(np.concatenate(vecs))
        if "emb-avg" in config.flags:
            parts.append(np.mean(vecs, axis=0))
        if "emb-max" in config.flags:
            parts.append(np.max(vecs, axis=0))
    row = np.concatenate(parts) if parts else np.zeros(0)
    return row.astype(np.float64, copy=False)


def build_matrix(
    records: Sequence[PhraseRecord],
    config: FeatureConfig,
    store: EmbeddingStore | None = None,
) -> np.ndarray:
    if not records:
        return np.zeros((0, config.length))
    rows = np.vstack([build(rec, config, store) for rec in records])
    if not np.all(np.isfinite(rows)):
        raise ValidationError("non-finite feature values")
    return rows


class MinMaxScaler:
    """Per-dimension linear map of the training range onto [-1, 1]."""

    def __init__(self):
        self.lo: np.ndarray | None = None
        self.hi: np.ndarray | None = None

    def fit(self, X: np.ndarray) -> "MinMaxScaler":
        if X.shape[0] == 0:
            raise ArgumentError("cannot fit a scaler on an empty matrix")
        self.lo = X.min(axis=0)
        self.hi = X.max(axis=0)
        return self

    def transform(self, X: np.ndarray) -> np.ndarray:
        if self.lo is None or self.hi is None:
            raise ArgumentError("scaler not fitted")
        X = np.atleast_2d(np.asarray(X, dtype=np.float64))
        if X.shape[1] != self.lo.shape[0]:
            raise ArgumentError(
                f"scaler fitted on {self.lo.shape[0]} dimensions, got {X.shape[1]}"
            )
        span = self.hi - self.lo
        out = np.zeros_like(X, dtype=np.float64)
        varying = span > 0
        out[:, varying] = 2.0 * (X[:, varying] - self.lo[varying]) / span[varying] - 1.0
        return out

    def fit_transform(self, X: np.ndarray) -> np.ndarray:
        return self.fit(X).transform(X)

    def to_dict(self) -> dict:
        if self.lo is None or self.hi is None:
            raise ArgumentError("scaler not fitted")
        return {"lo": self.lo.tolist(), "hi": self.hi.tolist()}

    @classmethod
    def from_dict(cls, obj: dict) -> "MinMaxScaler":
        scaler = cls()
        scaler.lo = np.asarray(obj["lo"], dtype=np.float64)
        scaler.hi = np.asarray(obj["hi"], dtype=np.float64)
        if scaler.lo.shape != scaler.hi.shape:
            raise ValidationError("scaler lo/hi lengths differ")
        return scaler


def config_to_dict(config: FeatureConfig) -> dict:
    return {
        "n": config.n,
        "flags": sorted(config.flags),
        "vocabulary": list(config.vocabulary),
        "tagset": list(config.tagset),
        "emb_dim": config.emb_dim,
    }


def config_from_dict(obj: dict, tag_map: dict[str, str] | None = None) -> FeatureConfig:
    return FeatureConfig(
        n=int(obj["n"]),
        flags=frozenset(obj["flags"]),
        vocabulary=tuple(obj["vocabulary"]),
        tagset=tuple(obj["tagset"]),
        emb_dim=int(obj["emb_dim"]),
        tag_map=tag_map,
    )
