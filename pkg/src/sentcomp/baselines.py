"""Deterministic rule predictors over phrase records.

Each rule emits a real-valued score whose sign (with zero counting as
positive) is the predicted phrase polarity, so the same predictor serves
both the binary and the regression task.
"""

from __future__ import annotations

from typing import Sequence

import numpy as np

from .errors import ArgumentError
from .lexicon import PhraseRecord
from .postags import coarsen

BASELINE_KINDS = ("majority", "last-unigram", "most-polar", "pos-rule")


def last_unigram(record: PhraseRecord) -> float:
    """Score of the final constituent."""
    return record.constituent_scores[-1]


def most_polar(record: PhraseRecord) -> float:
    """Score of the constituent with the largest magnitude.

    Ties on magnitude go to the rightmost constituent.
    """
    best = record.constituent_scores[0]
    for score in record.constituent_scores[1:]:
        if abs(score) >= abs(best):
            best = score
    return best


def pos_rule(record: PhraseRecord, tag_map: dict[str, str] | None = None) -> float:
    """Last adjective's score, else last verb's, else the most polar one."""
    tags = [coarsen(t, tag_map) for t in record.pos_tags]
    for wanted in ("adj", "verb"):
        for idx in range(len(tags) - 1, -1, -1):
            if tags[idx] == wanted:
                return record.constituent_scores[idx]
    return most_polar(record)


class RuleBaseline:
    """A named rule with the same fit/predict surface as the learners.

    Only the majority rule uses training data (its modal polarity, ties
    resolving to positive); the other rules ignore fit entirely.
    """

    def __init__(self, kind: str, tag_map: dict[str, str] | None = None):
        if kind not in BASELINE_KINDS:
            raise ArgumentError(
                f"unknown baseline {kind!r} (known: {', '.join(BASELINE_KINDS)})"
            )
        self.kind = kind
        self.tag_map = tag_map
        self._majority: float | None = None

    def fit(self, train_records: Sequence[PhraseRecord]) -> "RuleBaseline":
        if self.kind == "majority":
            if not train_records:
                raise ArgumentError("majority baseline needs training records")
            n_pos = sum(1 for r in train_records if r.label > 0)
            self._majority = 1.0 if n_pos >= len(train_records) - n_pos else -1.0
        return self

    def predict(self, records: Sequence[PhraseRecord]) -> np.ndarray:
        if self.kind == "majority":
            if self._majority is None:
                raise ArgumentError("majority baseline not fitted")
            return np.full(len(records), self._majority)
        if self.kind == "last-unigram":
            return np.array([last_unigram(r) for r in records])
        if self.kind == "most-polar":
            return np.array([most_polar(r) for r in records])
        return np.array([pos_rule(r, self.tag_map) for r in records])
