"""Phrase lexicon I/O and opposing-polarity candidate extraction.

The lexicon file format is two tab-separated columns: a lowercase term of
one to three space-separated tokens, and a real-valued sentiment score in
[-1, 1].  Scores at or above zero count as positive.  Score strings are
kept verbatim so that a load/save cycle reproduces the file exactly.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Iterable, Iterator

from .errors import ArgumentError, ParseError, ValidationError

MAX_TERM_TOKENS = 3


def polarity_of(score: float) -> str:
    """Binary polarity with the tie resolved toward positive."""
    return "positive" if score >= 0 else "negative"


def _check_token(token: str, path, line_no: int) -> None:
    if not token:
        raise ParseError(path, line_no, "empty token in term")
    if any(ch in token for ch in "\t\n\r"):
        raise ParseError(path, line_no, "token contains tab or newline")


@dataclass(frozen=True)
class LexiconEntry:
    term: tuple[str, ...]
    score: float
    raw_score: str

    @property
    def text(self) -> str:
        return " ".join(self.term)

    @property
    def polarity(self) -> str:
        return polarity_of(self.score)

    def __len__(self) -> int:
        return len(self.term)


class Lexicon:
    """An ordered collection of scored terms with unique term strings."""

    def __init__(self, entries: Iterable[LexiconEntry] = ()):
        self.entries: list[LexiconEntry] = []
        self._by_text: dict[str, LexiconEntry] = {}
        for entry in entries:
            self.add(entry)

    def add(self, entry: LexiconEntry) -> None:
        if entry.text in self._by_text:
            raise ValidationError(f"duplicate term {entry.text!r}")
        self.entries.append(entry)
        self._by_text[entry.text] = entry

    def __len__(self) -> int:
        return len(self.entries)

    def __iter__(self) -> Iterator[LexiconEntry]:
        return iter(self.entries)

    def __contains__(self, text: str) -> bool:
        return text in self._by_text

    def get(self, text: str) -> LexiconEntry | None:
        return self._by_text.get(text)

    def counts_by_length(self) -> dict[int, int]:
        counts: dict[int, int] = {}
        for entry in self.entries:
            counts[len(entry)] = counts.get(len(entry), 0) + 1
        return counts

    def with_length(self, n: int) -> list[LexiconEntry]:
        return [e for e in self.entries if len(e) == n]

    def unigram_score(self, token: str) -> float:
        entry = self._by_text.get(token)
        if entry is None or len(entry) != 1:
            raise ValidationError(f"no unigram entry for token {token!r}")
        return entry.score


def load_scl(path) -> Lexicon:
    """Load a term/score TSV, validating every line.

    Raises ParseError naming the offending line for missing tabs,
    non-numeric or out-of-range scores, and terms longer than three tokens.
    """
    lexicon = Lexicon()
    with open(path, encoding="utf-8") as fh:
        for line_no, line in enumerate(fh, start=1):
            line = line.rstrip("\n")
            if not line:
                continue
            if "\t" not in line:
                raise ParseError(path, line_no, "expected term<TAB>score")
            term_str, _, score_str = line.partition("\t")
            if "\t" in score_str:
                raise ParseError(path, line_no, "more than two columns")
            tokens = tuple(term_str.lower().split())
            if not tokens:
                raise ParseError(path, line_no, "empty term")
            if len(tokens) > MAX_TERM_TOKENS:
                raise ParseError(
                    path, line_no, f"term has {len(tokens)} tokens (max {MAX_TERM_TOKENS})"
                )
            for token in tokens:
                _check_token(token, path, line_no)
            score_str = score_str.strip()
            try:
                score = float(score_str)
            except ValueError:
                raise ParseError(path, line_no, f"non-numeric score {score_str!r}") from None
            if math.isnan(score) or not -1.0 <= score <= 1.0:
                raise ParseError(path, line_no, f"score {score_str} outside [-1, 1]")
            try:
                lexicon.add(LexiconEntry(tokens, score, score_str))
            except ValidationError as exc:
                raise ParseError(path, line_no, str(exc)) from None
    return lexicon


def save_scl(lexicon: Lexicon, path) -> None:
    """Write the lexicon back out, preserving original score strings."""
    with open(path, "w", encoding="utf-8") as fh:
        for entry in lexicon:
            fh.write(f"{entry.text}\t{entry.raw_score}\n")


def load_pos_file(path) -> dict[str, tuple[str, ...]]:
    """Load a term -> part-of-speech-tags TSV (tags space separated)."""
    table: dict[str, tuple[str, ...]] = {}
    with open(path, encoding="utf-8") as fh:
        for line_no, line in enumerate(fh, start=1):
            line = line.rstrip("\n")
            if not line:
                continue
            if "\t" not in line:
                raise ParseError(path, line_no, "expected term<TAB>tags")
            term_str, _, tag_str = line.partition("\t")
            term = " ".join(term_str.lower().split())
            tags = tuple(tag_str.split())
            if not term:
                raise ParseError(path, line_no, "empty term")
            if not tags:
                raise ParseError(path, line_no, "no tags given")
            if term in table:
                raise ParseError(path, line_no, f"duplicate term {term!r}")
            table[term] = tags
    return table


@dataclass(frozen=True)
class PhraseRecord:
    """A multi-token lexicon entry joined with tags and constituent scores."""

    term: tuple[str, ...]
    pos_tags: tuple[str, ...]
    constituent_scores: tuple[float, ...]
    score: float

    @property
    def text(self) -> str:
        return " ".join(self.term)

    @property
    def polarity(self) -> str:
        return polarity_of(self.score)

    @property
    def label(self) -> int:
        return 1 if self.score >= 0 else -1


def phrase_records(
    lexicon: Lexicon,
    pos_table: dict[str, tuple[str, ...]],
    n: int | None = None,
) -> list[PhraseRecord]:
    """Assemble records for every phrase entry (optionally one length only).

    Every constituent token must itself be a unigram entry; a missing token
    or a tag sequence of the wrong length is a validation error naming the
    phrase.
    """
    if n is not None and n not in (2, 3):
        raise ArgumentError(f"phrase length must be 2 or 3, got {n}")
    records = []
    for entry in lexicon:
        if len(entry) < 2 or (n is not None and len(entry) != n):
            continue
        tags = pos_table.get(entry.text)
        if tags is None:
            raise ValidationError(f"no part-of-speech tags for phrase {entry.text!r}")
        if len(tags) != len(entry.term):
            raise ValidationError(
                f"phrase {entry.text!r} has {len(entry.term)} tokens "
                f"but {len(tags)} tags"
            )
        scores = tuple(lexicon.unigram_score(tok) for tok in entry.term)
        records.append(PhraseRecord(entry.term, tags, scores, entry.score))
    return records


class PolarityLexicon:
    """A named list of tokens labelled positive or negative."""

    def __init__(self, name: str, labels: dict[str, str]):
        for token, label in labels.items():
            if label not in ("positive", "negative"):
                raise ValidationError(f"{name}: bad label {label!r} for {token!r}")
        self.name = name
        self.labels = {token.lower(): label for token, label in labels.items()}

    @classmethod
    def load(cls, path, name: str | None = None) -> "PolarityLexicon":
        labels: dict[str, str] = {}
        with open(path, encoding="utf-8") as fh:
            for line_no, line in enumerate(fh, start=1):
                line = line.rstrip("\n")
                if not line or line.startswith("#"):
                    continue
                parts = line.split("\t")
                if len(parts) != 2:
                    raise ParseError(path, line_no, "expected token<TAB>label")
                token, label = parts[0].strip().lower(), parts[1].strip().lower()
                if label not in ("positive", "negative"):
                    raise ParseError(path, line_no, f"bad label {label!r}")
                labels[token] = label
        import os

        stem = os.path.splitext(os.path.basename(str(path)))[0]
        return cls(name or stem, labels)


def consolidate_labels(lexicons: Iterable[PolarityLexicon]) -> dict[str, str]:
    """Merge polarity lists; tokens with conflicting labels are dropped."""
    merged: dict[str, str] = {}
    conflicted: set[str] = set()
    for lex in lexicons:
        for token, label in lex.labels.items():
            if token in conflicted:
                continue
            seen = merged.get(token)
            if seen is None:
                merged[token] = label
            elif seen != label:
                del merged[token]
                conflicted.add(token)
    return merged


def extract_opposing_candidates(
    corpus_lines: Iterable[str],
    lexicons: Iterable[PolarityLexicon],
    n: int,
) -> list[tuple[str, ...]]:
    """Scan a tokenised corpus for n-grams holding both polarities.

    A candidate window must contain at least one consolidated-positive and
    one consolidated-negative token.  Returns distinct n-grams sorted
    lexicographically.
    """
    if n not in (2, 3):
        raise ArgumentError(f"window length must be 2 or 3, got {n}")
    labels = consolidate_labels(lexicons)
    found: set[tuple[str, ...]] = set()
    for line in corpus_lines:
        tokens = line.lower().split()
        for start in range(len(tokens) - n + 1):
            window = tuple(tokens[start : start + n])
            window_labels = {labels.get(tok) for tok in window}
            if "positive" in window_labels and "negative" in window_labels:
                found.add(window)
    return sorted(found)
