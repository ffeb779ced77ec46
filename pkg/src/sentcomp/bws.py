"""Best-worst scaling: 4-tuples, counting scores, and annotator agreement.

Terms are packed into 4-item tuples so that every term occurs a balanced
number of times.  Annotators pick the best and worst item of each tuple;
a term's score is the fraction of its answered tuples where it was chosen
best minus the fraction where it was chosen worst, which lands in [-1, 1].
"""

from __future__ import annotations

import json
import math
import os
from collections import Counter
from dataclasses import dataclass
from datetime import datetime
from typing import Iterable, Sequence

import numpy as np

from .errors import ArgumentError, ParseError, ValidationError

TUPLE_SIZE = 4
DEFAULT_APPEARANCES = 8


@dataclass(frozen=True)
class BwsTuple:
    id: str
    items: tuple[str, str, str, str]

    def __post_init__(self):
        if len(self.items) != TUPLE_SIZE:
            raise ValidationError(f"tuple {self.id}: expected {TUPLE_SIZE} items")
        if len(set(self.items)) != TUPLE_SIZE:
            raise ValidationError(f"tuple {self.id}: repeated item")


@dataclass(frozen=True)
class BwsResponse:
    tuple_id: str
    annotator: str
    best: str
    worst: str
    timestamp: str

    def __post_init__(self):
        if not self.tuple_id or not self.annotator:
            raise ValidationError("response missing tuple id or annotator")
        if self.best == self.worst:
            raise ValidationError(
                f"response for {self.tuple_id} by {self.annotator}: best equals worst"
            )
        _check_timestamp(self.timestamp)


def _check_timestamp(ts: str) -> None:
    try:
        datetime.fromisoformat(ts.replace("Z", "+00:00"))
    except ValueError:
        raise ValidationError(f"bad timestamp {ts!r}") from None


def generate_tuples(
    terms: Sequence[str],
    k: int = DEFAULT_APPEARANCES,
    seed: int = 0,
) -> list[BwsTuple]:
    """Pack terms into ceil(k*N/4) 4-tuples, each term in k or k+1 of them.

    Tuples never repeat an item and no two tuples hold the same item set.
    Deterministic for a given seed.  Raises ArgumentError when the request
    is unsatisfiable (fewer than four distinct terms, or more tuples than
    distinct 4-subsets exist).
    """
    terms = list(terms)
    if len(set(terms)) != len(terms):
        raise ArgumentError("terms must be distinct")
    n = len(terms)
    if n < TUPLE_SIZE:
        raise ArgumentError(f"need at least {TUPLE_SIZE} distinct terms, got {n}")
    if k < 1:
        raise ArgumentError("k must be at least 1")
    n_tuples = math.ceil(k * n / TUPLE_SIZE)
    if n_tuples > math.comb(n, TUPLE_SIZE):
        raise ArgumentError(
            f"{n_tuples} distinct tuples requested but only "
            f"{math.comb(n, TUPLE_SIZE)} distinct 4-subsets of {n} terms exist"
        )
    rng = np.random.default_rng(seed)
    for _ in range(60):
        slots = _balanced_slots(n, k, n_tuples, rng)
        grid = _repair(slots.reshape(n_tuples, TUPLE_SIZE), rng)
        if grid is not None:
            width = max(4, len(str(n_tuples - 1)))
            return [
                BwsTuple(f"t{row_idx:0{width}d}", tuple(terms[i] for i in row))
                for row_idx, row in enumerate(grid.tolist())
            ]
    raise ArgumentError("could not arrange distinct tuples; try another seed or more terms")


def _balanced_slots(n: int, k: int, n_tuples: int, rng) -> np.ndarray:
    slots = np.repeat(np.arange(n), k)
    pad = n_tuples * TUPLE_SIZE - slots.size
    if pad:
        slots = np.concatenate([slots, rng.choice(n, size=pad, replace=False)])
    rng.shuffle(slots)
    return slots


def _repair(grid: np.ndarray, rng, max_passes: int = 400) -> np.ndarray | None:
    """Swap slots between rows until all rows are duplicate-free and distinct."""
    n_tuples = grid.shape[0]
    for _ in range(max_passes):
        seen: dict[frozenset, int] = {}
        bad: list[int] = []
        for idx in range(n_tuples):
            row = frozenset(grid[idx].tolist())
            if len(row) < TUPLE_SIZE or row in seen:
                bad.append(idx)
            else:
                seen[row] = idx
        if not bad:
            return grid
        for idx in bad:
            other = int(rng.integers(n_tuples))
            if other == idx:
                other = (other + 1) % n_tuples
            a = int(rng.integers(TUPLE_SIZE))
            b = int(rng.integers(TUPLE_SIZE))
            grid[idx, a], grid[other, b] = grid[other, b], grid[idx, a]
    return None


@dataclass(frozen=True)
class ScoreRow:
    term: str
    best: int
    worst: int
    appearances: int
    score: float


class BwsScoreTable:
    """Per-term counting scores, ordered by term for stable serialisation."""

    def __init__(self, rows: list[ScoreRow], n_responses: int):
        self.rows = sorted(rows, key=lambda r: r.term)
        self.n_responses = n_responses

    def __iter__(self):
        return iter(self.rows)

    def __len__(self):
        return len(self.rows)

    def score_of(self, term: str) -> float:
        for row in self.rows:
            if row.term == term:
                return row.score
        raise KeyError(term)

    def to_json(self) -> str:
        payload = {
            "responses": self.n_responses,
            "terms": [
                {
                    "term": r.term,
                    "best": r.best,
                    "worst": r.worst,
                    "appearances": r.appearances,
                    "score": r.score,
                }
                for r in self.rows
            ],
        }
        return json.dumps(payload, sort_keys=True, separators=(",", ":"))

    def to_tsv(self) -> str:
        ranked = sorted(self.rows, key=lambda r: (-r.score, r.term))
        return "".join(f"{r.term}\t{r.score:.6f}\n" for r in ranked)


def _index_tuples(tuples: Iterable[BwsTuple]) -> dict[str, BwsTuple]:
    by_id: dict[str, BwsTuple] = {}
    for t in tuples:
        if t.id in by_id:
            raise ValidationError(f"duplicate tuple id {t.id!r}")
        by_id[t.id] = t
    return by_id


def validate_responses(
    tuples: Iterable[BwsTuple], responses: Sequence[BwsResponse]
) -> dict[str, BwsTuple]:
    """Check responses against the tuple collection; returns the tuple index.

    Rejects unknown tuple ids, answers naming items outside the tuple, and
    duplicate (tuple, annotator) submissions, identifying the offender.
    """
    by_id = _index_tuples(tuples)
    seen: set[tuple[str, str]] = set()
    for pos, resp in enumerate(responses):
        where = f"response {pos} ({resp.annotator} on {resp.tuple_id})"
        tup = by_id.get(resp.tuple_id)
        if tup is None:
            raise ValidationError(f"{where}: unknown tuple id")
        if resp.best not in tup.items or resp.worst not in tup.items:
            raise ValidationError(f"{where}: answer not among tuple items")
        key = (resp.tuple_id, resp.annotator)
        if key in seen:
            raise ValidationError(f"{where}: duplicate answer for this tuple")
        seen.add(key)
    return by_id


def score(tuples: Sequence[BwsTuple], responses: Sequence[BwsResponse]) -> BwsScoreTable:
    """Counting scores over every term occurring in an answered tuple.

    A term's appearances are the answered tuples containing it, counted
    once per response; terms never shown in an answered tuple are absent
    from the table.
    """
    by_id = validate_responses(tuples, responses)
    best: Counter = Counter()
    worst: Counter = Counter()
    appearances: Counter = Counter()
    for resp in responses:
        tup = by_id[resp.tuple_id]
        best[resp.best] += 1
        worst[resp.worst] += 1
        for item in tup.items:
            appearances[item] += 1
    rows = [
        ScoreRow(term, best[term], worst[term], seen, (best[term] - worst[term]) / seen)
        for term, seen in appearances.items()
    ]
    return BwsScoreTable(rows, len(responses))


def agreement(tuples: Sequence[BwsTuple], responses: Sequence[BwsResponse]) -> float:
    """Fraction of answers matching their tuple's majority answer.

    Computed over best and worst slots pooled; when several options tie at
    the top of a slot, every response choosing any of them counts as a
    match.  Requires at least one response.
    """
    if not responses:
        raise ArgumentError("agreement needs at least one response")
    validate_responses(tuples, responses)
    by_tuple_best: dict[str, Counter] = {}
    by_tuple_worst: dict[str, Counter] = {}
    for resp in responses:
        by_tuple_best.setdefault(resp.tuple_id, Counter())[resp.best] += 1
        by_tuple_worst.setdefault(resp.tuple_id, Counter())[resp.worst] += 1
    matched = 0
    for votes_by_tuple in (by_tuple_best, by_tuple_worst):
        for votes in votes_by_tuple.values():
            top = max(votes.values())
            matched += sum(count for count in votes.values() if count == top)
    return matched / (2 * len(responses))


def save_tuples(tuples: Iterable[BwsTuple], path) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        for t in tuples:
            fh.write(json.dumps({"id": t.id, "items": list(t.items)}) + "\n")


def load_tuples(path) -> list[BwsTuple]:
    tuples: list[BwsTuple] = []
    ids: set[str] = set()
    with open(path, encoding="utf-8") as fh:
        for line_no, line in enumerate(fh, start=1):
            line = line.strip()
            if not line:
                continue
            try:
                obj = json.loads(line)
            except json.JSONDecodeError as exc:
                raise ParseError(path, line_no, f"bad JSON: {exc.msg}") from None
            if not isinstance(obj, dict) or "id" not in obj or "items" not in obj:
                raise ParseError(path, line_no, "expected object with id and items")
            items = obj["items"]
            if (
                not isinstance(items, list)
                or len(items) != TUPLE_SIZE
                or not all(isinstance(i, str) for i in items)
            ):
                raise ParseError(path, line_no, f"items must be {TUPLE_SIZE} strings")
            try:
                tup = BwsTuple(str(obj["id"]), tuple(items))
            except ValidationError as exc:
                raise ParseError(path, line_no, str(exc)) from None
            if tup.id in ids:
                raise ParseError(path, line_no, f"duplicate tuple id {tup.id!r}")
            ids.add(tup.id)
            tuples.append(tup)
    return tuples


_RESPONSE_KEYS = ("tuple_id", "annotator", "best", "worst", "timestamp")


def response_to_json(resp: BwsResponse) -> str:
    return json.dumps(
        {key: getattr(resp, key) for key in _RESPONSE_KEYS},
        sort_keys=True,
        separators=(",", ":"),
    )


def load_responses(path) -> list[BwsResponse]:
    responses: list[BwsResponse] = []
    with open(path, encoding="utf-8") as fh:
        for line_no, line in enumerate(fh, start=1):
            line = line.strip()
            if not line:
                continue
            try:
                obj = json.loads(line)
            except json.JSONDecodeError as exc:
                raise ParseError(path, line_no, f"bad JSON: {exc.msg}") from None
            if not isinstance(obj, dict):
                raise ParseError(path, line_no, "expected a JSON object")
            missing = [key for key in _RESPONSE_KEYS if key not in obj]
            if missing:
                raise ParseError(path, line_no, f"missing fields: {', '.join(missing)}")
            try:
                responses.append(
                    BwsResponse(*(str(obj[key]) for key in _RESPONSE_KEYS))
                )
            except ValidationError as exc:
                raise ParseError(path, line_no, str(exc)) from None
    return responses


def append_response(resp: BwsResponse, path) -> None:
    """Append one response to a JSONL log, flushed to disk before returning."""
    with open(path, "a", encoding="utf-8") as fh:
        fh.write(response_to_json(resp) + "\n")
        fh.flush()
        os.fsync(fh.fileno())
