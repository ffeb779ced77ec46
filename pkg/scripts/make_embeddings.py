#!/usr/bin/env python3
"""Generate deterministic 100-dim token vectors for the fixture lexicon.

Every unigram in data/scl_opp.tsv gets a vector built from three blocks:

  * dims 0-5    scaled copies of the token's leaning bit (the same stable
                hash bit scripts/build_dataset.py uses for placement), so
                embeddings carry the identity signal the fixture plants;
  * dims 6-11   scaled copies of the token's polarity sign from the lexicon;
  * dims 12 onward reproducible per-token noise, hashing the token string into
                a private RNG stream.

Magnitude bands are deliberately absent: vectors never reveal how strong a
token's score is, only its sign, leaning, and identity.  Roughly one token
in twenty-five is dropped so loaders see realistic out-of-vocabulary gaps
while coverage stays well above nine tokens in ten.

Writes data/embeddings_100d.txt.gz (word2vec-style text format, gzipped).
"""

from __future__ import annotations

import gzip
import hashlib
import sys
from pathlib import Path

import numpy as np

ROOT = Path(__file__).resolve().parent.parent
sys.path.insert(0, str(ROOT / "src"))

from sentcomp.embeddings import load_text_vectors  # noqa: E402
from sentcomp.lexicon import load_scl  # noqa: E402

DIM = 100
OUT_PATH = ROOT / "data" / "embeddings_100d.txt.gz"
LEAN_WEIGHTS = np.array([0.9, 0.7, 0.8, 0.6, 0.5, 0.75])
SIGN_WEIGHTS = np.array([0.85, 0.65, 0.75, 0.55, 0.9, 0.6])
SKIP_MODULUS = 25


def stable_digest(token: str) -> bytes:
    return hashlib.blake2b(token.encode("utf-8"), digest_size=8).digest()


def vector_for(token: str, score: float) -> np.ndarray | None:
    digest = stable_digest(token)
    if digest[2] % SKIP_MODULUS == 0:
        return None
    rng = np.random.default_rng(int.from_bytes(digest, "big"))
    vec = np.empty(DIM)
    lean = 1.0 if digest[0] % 2 == 0 else -1.0
    sign = 1.0 if score >= 0 else -1.0
    vec[0:6] = lean * LEAN_WEIGHTS + rng.normal(0.0, 0.15, 6)
    vec[6:12] = sign * SIGN_WEIGHTS + rng.normal(0.0, 0.15, 6)
    vec[12:] = rng.normal(0.0, 0.4, DIM - 12)
    return vec


def main() -> None:
    lexicon = load_scl(ROOT / "data" / "scl_opp.tsv")
    singles = lexicon.with_length(1)
    rows = []
    for entry in singles:
        vec = vector_for(entry.text, entry.score)
        if vec is not None:
            rows.append((entry.text, vec))
    with gzip.open(OUT_PATH, "wt", encoding="utf-8") as fh:
        fh.write(f"{len(rows)} {DIM}\n")
        for token, vec in rows:
            comps = " ".join(f"{v:.4f}" for v in vec)
            fh.write(f"{token} {comps}\n")

    store = load_text_vectors(OUT_PATH)
    tokens = [e.text for e in singles]
    cov = store.coverage(tokens)
    assert store.dim == DIM
    assert cov >= 0.9, cov
    print(f"wrote {OUT_PATH}: {len(rows)} vectors, dim {DIM}, "
          f"coverage {cov:.3f} over {len(tokens)} tokens")


if __name__ == "__main__":
    main()
