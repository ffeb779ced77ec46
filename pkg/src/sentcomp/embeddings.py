"""Loading word vectors from whitespace-separated text files.

Supports the common text layout with one token and its components per
line, an optional leading "count dim" header, and transparent gzip.
Lookups of unknown tokens return a zero vector and bump a miss counter.
"""

from __future__ import annotations

import gzip
import threading
from typing import Iterable

import numpy as np

from .errors import ParseError

_OPENERS = {True: gzip.open, False: open}


class EmbeddingStore:
    def __init__(self, vectors: dict[str, np.ndarray], dim: int):
        self.dim = dim
        self._vectors = vectors
        self._zero = np.zeros(dim, dtype=np.float64)
        self._zero.setflags(write=False)
        self._misses = 0
        self._lock = threading.Lock()

    def __len__(self) -> int:
        return len(self._vectors)

    def __contains__(self, token: str) -> bool:
        return token in self._vectors

    @property
    def misses(self) -> int:
        with self._lock:
            return self._misses

    def lookup(self, token: str) -> np.ndarray:
        """Vector for a token; unknown tokens yield zeros and are counted."""
        vec = self._vectors.get(token)
        if vec is None:
            with self._lock:
                self._misses += 1
            return self._zero
        return vec

    def coverage(self, tokens: Iterable[str]) -> float:
        """Fraction of the given distinct tokens that have vectors."""
        tokens = set(tokens)
        if not tokens:
            return 0.0
        return sum(1 for t in tokens if t in self._vectors) / len(tokens)


def _is_header(fields: list[str]) -> bool:
    if len(fields) != 2:
        return False
    try:
        int(fields[0]), int(fields[1])
    except ValueError:
        return False
    return True


def load_text_vectors(path) -> EmbeddingStore:
    """Read a text vector file, validating dimensionality on every line."""
    path_str = str(path)
    opener = _OPENERS[path_str.endswith(".gz")]
    vectors: dict[str, np.ndarray] = {}
    dim: int | None = None
    with opener(path_str, "rt", encoding="utf-8") as fh:
        first_data_line = 1
        for line_no, line in enumerate(fh, start=1):
            fields = line.split()
            if not fields:
                continue
            if line_no == first_data_line and _is_header(fields):
                continue
            token, comps = fields[0], fields[1:]
            if not comps:
                raise ParseError(path, line_no, f"no components for {token!r}")
            if dim is None:
                dim = len(comps)
            elif len(comps) != dim:
                raise ParseError(
                    path, line_no, f"expected {dim} components, found {len(comps)}"
                )
            if token in vectors:
                raise ParseError(path, line_no, f"duplicate token {token!r}")
            try:
                vec = np.array([float(c) for c in comps], dtype=np.float64)
            except ValueError:
                raise ParseError(path, line_no, "non-numeric component") from None
            if not np.all(np.isfinite(vec)):
                raise ParseError(path, line_no, "non-finite component")
            vec.setflags(write=False)
            vectors[token] = vec
    if dim is None:
        raise ParseError(path, 1, "no vectors found")
    return EmbeddingStore(vectors, dim)
