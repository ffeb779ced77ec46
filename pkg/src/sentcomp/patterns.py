"""Mining sentiment composition patterns from scored phrases.

A pattern's left side is the phrase's sequence of (polarity, coarse POS)
slots; constituents whose own score magnitude falls below a neutrality
threshold keep only their POS (e.g. determiners).  The right side is the
phrase polarity that the pattern most often produces, reported with its
occurrence rate and support.
"""

from __future__ import annotations

from collections import Counter
from dataclasses import dataclass
from typing import Iterable, Sequence

from .errors import ArgumentError
from .lexicon import PhraseRecord
from .postags import coarsen

DEFAULT_MIN_SUPPORT = 10
DEFAULT_MIN_RATE = 0.5


@dataclass(frozen=True, order=True)
class Slot:
    """One constituent position: signed ("pos adj") or neutral ("det")."""

    polarity: str | None
    pos: str

    def __str__(self) -> str:
        return self.pos if self.polarity is None else f"{self.polarity} {self.pos}"


@dataclass(frozen=True)
class Scp:
    lhs: tuple[Slot, ...]
    rhs: str
    support: int
    matched: int

    @property
    def rate(self) -> float:
        return self.matched / self.support

    @property
    def lhs_text(self) -> str:
        return " + ".join(str(slot) for slot in self.lhs)


def slots_for(
    record: PhraseRecord,
    neutral_threshold: float = 0.0,
    tag_map: dict[str, str] | None = None,
) -> tuple[Slot, ...]:
    """Derive the (polarity, POS) slot sequence of one phrase."""
    out = []
    for tag, score in zip(record.pos_tags, record.constituent_scores):
        pos = coarsen(tag, tag_map)
        if abs(score) < neutral_threshold:
            out.append(Slot(None, pos))
        else:
            out.append(Slot("pos" if score >= 0 else "neg", pos))
    return tuple(out)


def lhs_statistics(
    records: Iterable[PhraseRecord],
    neutral_threshold: float = 0.0,
    tag_map: dict[str, str] | None = None,
) -> dict[tuple[Slot, ...], Counter]:
    """Count phrase polarities per left-hand side."""
    stats: dict[tuple[Slot, ...], Counter] = {}
    for record in records:
        lhs = slots_for(record, neutral_threshold, tag_map)
        stats.setdefault(lhs, Counter())[record.polarity] += 1
    return stats


def mine(
    records: Sequence[PhraseRecord],
    min_support: int = DEFAULT_MIN_SUPPORT,
    min_rate: float = DEFAULT_MIN_RATE,
    neutral_threshold: float = 0.0,
    tag_map: dict[str, str] | None = None,
) -> list[Scp]:
    """Emit one pattern per qualifying lhs, paired with its majority polarity.

    A lhs qualifies when it has at least min_support phrases and its
    majority polarity covers at least min_rate of them.  An exact tie
    resolves toward positive, mirroring the zero-score tie rule.  Patterns
    come back sorted by their lhs rendering.
    """
    if min_support < 1:
        raise ArgumentError("min_support must be at least 1")
    if not 0.0 <= min_rate <= 1.0:
        raise ArgumentError("min_rate must lie in [0, 1]")
    if neutral_threshold < 0:
        raise ArgumentError("neutral_threshold must be non-negative")
    out = []
    for lhs, votes in lhs_statistics(records, neutral_threshold, tag_map).items():
        support = sum(votes.values())
        if support < min_support:
            continue
        pos_n, neg_n = votes.get("positive", 0), votes.get("negative", 0)
        rhs, matched = ("positive", pos_n) if pos_n >= neg_n else ("negative", neg_n)
        if matched / support < min_rate:
            continue
        out.append(Scp(lhs, rhs, support, matched))
    out.sort(key=lambda scp: scp.lhs_text)
    return out


TSV_HEADER = "lhs\trhs\toccurrence_rate\tsupport"


def to_tsv(scps: Sequence[Scp]) -> str:
    lines = [TSV_HEADER]
    for scp in scps:
        lines.append(f"{scp.lhs_text}\t{scp.rhs}\t{scp.rate:.2f}\t{scp.support}")
    return "\n".join(lines) + "\n"


def report(scps: Sequence[Scp]) -> str:
    """Aligned plain-text table of mined patterns."""
    headers = ("lhs", "rhs", "rate", "support")
    rows = [(scp.lhs_text, scp.rhs, f"{scp.rate:.2f}", str(scp.support)) for scp in scps]
    widths = [
        max(len(headers[col]), *(len(r[col]) for r in rows)) if rows else len(headers[col])
        for col in range(4)
    ]
    lines = [
        "  ".join(h.ljust(widths[i]) for i, h in enumerate(headers)).rstrip(),
    ]
    for row in rows:
        lines.append("  ".join(cell.ljust(widths[i]) for i, cell in enumerate(row)).rstrip())
    return "\n".join(lines) + "\n"
