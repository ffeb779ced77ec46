"""Cross-validated evaluation of rule baselines and SVM systems.

Runs are repeated stratified k-fold splits (stratification applies to the
binary task only).  Every (repeat, fold) metric is retained so reports can
show both the plain mean over runs and exact pooled values, and so paired
significance tests can line runs up between systems.
"""

from __future__ import annotations

import math
from collections import defaultdict
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field, replace
from typing import Sequence

import numpy as np
from scipy import special as _special

from .baselines import BASELINE_KINDS, RuleBaseline
from .embeddings import EmbeddingStore
from .errors import ArgumentError, SentcompError, ValidationError
from .features import MinMaxScaler, build_matrix, make_config, parse_flags
from .lexicon import PhraseRecord
from .svm import svm_train, svr_train

DEFAULT_SEED = 7
DEFAULT_FOLDS = 10
DEFAULT_REPEATS = 10
TASKS = ("binary", "regression")


class UndefinedCorrelationError(SentcompError):
    """Pearson correlation is undefined when either side has no variance."""


def pearson(x: Sequence[float], y: Sequence[float]) -> float:
    """Pearson correlation in double precision."""
    x = np.asarray(x, dtype=np.float64).ravel()
    y = np.asarray(y, dtype=np.float64).ravel()
    if x.shape != y.shape or x.size < 2:
        raise ArgumentError("pearson needs two equal-length vectors of size >= 2")
    dx = x - x.mean()
    dy = y - y.mean()
    sx = float(dx @ dx)
    sy = float(dy @ dy)
    if sx == 0.0 or sy == 0.0:
        raise UndefinedCorrelationError("zero variance input")
    return float((dx @ dy) / math.sqrt(sx * sy))


def accuracy(pred: np.ndarray, gold: np.ndarray) -> tuple[float, int]:
    """Fraction and count of matching labels."""
    pred = np.asarray(pred).ravel()
    gold = np.asarray(gold).ravel()
    if pred.shape != gold.shape or pred.size == 0:
        raise ArgumentError("accuracy needs equal-length non-empty vectors")
    correct = int(np.sum(pred == gold))
    return correct / pred.size, correct


@dataclass(frozen=True)
class CvPlan:
    folds: int = DEFAULT_FOLDS
    repeats: int = DEFAULT_REPEATS
    seed: int = DEFAULT_SEED
    stratified: bool = True

    def __post_init__(self):
        if self.folds < 2:
            raise ArgumentError("need at least 2 folds")
        if self.repeats < 1:
            raise ArgumentError("need at least 1 repeat")


def fold_indices(
    n_items: int,
    plan: CvPlan,
    repeat: int,
    labels: np.ndarray | None = None,
) -> list[np.ndarray]:
    """Test-fold index arrays for one repeat.

    With labels given (and the plan stratified), each class is spread
    across folds as evenly as possible while total fold sizes still differ
    by at most one.  Deterministic in (seed, repeat).
    """
    if n_items < plan.folds:
        raise ArgumentError(f"{n_items} items cannot fill {plan.folds} folds")
    rng = np.random.default_rng(np.random.SeedSequence([plan.seed, repeat]))
    folds: list[list[int]] = [[] for _ in range(plan.folds)]
    if labels is None or not plan.stratified:
        order = rng.permutation(n_items)
        for pos, idx in enumerate(order):
            folds[pos % plan.folds].append(int(idx))
    else:
        labels = np.asarray(labels).ravel()
        loads = np.zeros(plan.folds, dtype=np.int64)
        for value in sorted(set(labels.tolist())):
            members = np.flatnonzero(labels == value)
            if members.size < plan.folds:
                raise ArgumentError(
                    f"class {value!r} has {members.size} members, fewer than "
                    f"{plan.folds} folds"
                )
            members = members[rng.permutation(members.size)]
            base, extra = divmod(members.size, plan.folds)
            # Folds currently lightest take the remainder, keeping totals even.
            order_by_load = np.lexsort((np.arange(plan.folds), loads))
            take = {int(f): base for f in range(plan.folds)}
            for f in order_by_load[:extra]:
                take[int(f)] += 1
            cursor = 0
            for f in range(plan.folds):
                count = take[f]
                folds[f].extend(int(i) for i in members[cursor : cursor + count])
                loads[f] += count
                cursor += count
    return [np.array(sorted(f), dtype=np.int64) for f in folds]


@dataclass(frozen=True)
class SystemSpec:
    """A named system: one of the rule baselines or an SVM feature set."""

    name: str
    kind: str  # "baseline" | "svm"
    baseline: str | None = None
    flags: frozenset[str] = frozenset()
    C: float = 1.0
    gamma: object = "auto"
    epsilon: float = 0.1

    def with_hyperparams(self, C=None, gamma=None, epsilon=None) -> "SystemSpec":
        return replace(
            self,
            C=self.C if C is None else C,
            gamma=self.gamma if gamma is None else gamma,
            epsilon=self.epsilon if epsilon is None else epsilon,
        )


_BASELINE_ALIASES = {
    "majority": "majority",
    "last": "last-unigram",
    "last-unigram": "last-unigram",
    "most-polar": "most-polar",
    "pos-rule": "pos-rule",
}


def parse_system(spec: str) -> SystemSpec:
    """Parse "majority" or "svm:pos+score+uni" style system names."""
    spec = spec.strip()
    if spec in _BASELINE_ALIASES:
        kind = _BASELINE_ALIASES[spec]
        return SystemSpec(name=kind, kind="baseline", baseline=kind)
    if spec.startswith("svm:"):
        flags = parse_flags(spec[len("svm:") :].replace("+", ","))
        name = "svm:" + "+".join(f for f in ("uni", "pos", "label", "score",
                                             "emb-conc", "emb-avg", "emb-max")
                                 if f in flags)
        return SystemSpec(name=name, kind="svm", flags=flags)
    raise ArgumentError(
        f"unknown system {spec!r}; expected one of "
        f"{', '.join(sorted(set(_BASELINE_ALIASES)))} or svm:<flag+flag+...>"
    )


@dataclass(frozen=True)
class RunResult:
    system: str
    order: int
    task: str
    repeat: int
    fold: int
    n_test: int
    value: float | None
    numerator: float | None = None
    failed: bool = False
    message: str = ""


def _fit_predict(
    system: SystemSpec,
    train: list[PhraseRecord],
    test: list[PhraseRecord],
    task: str,
    store: EmbeddingStore | None,
    tag_map: dict[str, str] | None,
) -> np.ndarray:
    """Train on the fold and return raw predictions for the test rows."""
    if system.kind == "baseline":
        rule = RuleBaseline(system.baseline, tag_map).fit(train)
        return rule.predict(test)
    config = make_config(train, system.flags, store, tag_map)
    X_train = build_matrix(train, config, store)
    X_test = build_matrix(test, config, store)
    scaler = MinMaxScaler().fit(X_train)
    X_train = scaler.transform(X_train)
    X_test = scaler.transform(X_test)
    if task == "binary":
        y = np.array([r.label for r in train], dtype=np.float64)
        model = svm_train(X_train, y, C=system.C, gamma=system.gamma)
        return model.predict_labels(X_test).astype(np.float64)
    y = np.array([r.score for r in train], dtype=np.float64)
    model = svr_train(
        X_train, y, C=system.C, gamma=system.gamma, epsilon=system.epsilon
    )
    return model.decision(X_test)


def run_cv(
    records: Sequence[PhraseRecord],
    system: SystemSpec,
    plan: CvPlan = CvPlan(),
    task: str = "binary",
    store: EmbeddingStore | None = None,
    tag_map: dict[str, str] | None = None,
    threads: int = 1,
) -> list[RunResult]:
    """Cross-validate one system; returns one result per (repeat, fold).

    Failing runs (undefined correlation) are recorded rather than raised.
    Deterministic for a given plan regardless of thread count.
    """
    if task not in TASKS:
        raise ArgumentError(f"unknown task {task!r}")
    records = list(records)
    orders = {len(r.term) for r in records}
    if len(orders) != 1:
        raise ValidationError(f"records mix phrase lengths {sorted(orders)}")
    order = orders.pop()
    labels = np.array([r.label for r in records])
    gold_scores = np.array([r.score for r in records])
    strat = labels if (task == "binary" and plan.stratified) else None

    jobs = []
    for repeat in range(plan.repeats):
        folds = fold_indices(len(records), plan, repeat, strat)
        for fold_no, test_idx in enumerate(folds):
            jobs.append((repeat, fold_no, test_idx))

    def one_run(job) -> RunResult:
        repeat, fold_no, test_idx = job
        test_mask = np.zeros(len(records), dtype=bool)
        test_mask[test_idx] = True
        train = [r for r, held in zip(records, test_mask) if not held]
        test = [records[i] for i in test_idx]
        base = dict(
            system=system.name, order=order, task=task,
            repeat=repeat, fold=fold_no, n_test=len(test),
        )
        try:
            preds = _fit_predict(system, train, test, task, store, tag_map)
            if task == "binary":
                pred_labels = np.where(preds >= 0, 1, -1)
                value, correct = accuracy(pred_labels, labels[test_idx])
                return RunResult(**base, value=value, numerator=correct)
            value = pearson(preds, gold_scores[test_idx])
            return RunResult(**base, value=value)
        except UndefinedCorrelationError as exc:
            return RunResult(**base, value=None, failed=True, message=str(exc))

    if threads > 1:
        with ThreadPoolExecutor(max_workers=threads) as pool:
            results = list(pool.map(one_run, jobs))
    else:
        results = [one_run(job) for job in jobs]
    results.sort(key=lambda r: (r.repeat, r.fold))
    return results


def mean_metric(runs: Sequence[RunResult]) -> float | None:
    """Arithmetic mean over successful runs (None when all failed)."""
    values = [r.value for r in runs if not r.failed]
    if not values:
        return None
    return float(np.mean(values))


def pooled_metric(runs: Sequence[RunResult]) -> float | None:
    """Size-weighted mean: exact dataset-level accuracy per repeat.

    Only meaningful for count-based metrics; falls back to None when
    numerators are absent.
    """
    ok = [r for r in runs if not r.failed and r.numerator is not None]
    if not ok:
        return None
    per_repeat: dict[int, list[RunResult]] = defaultdict(list)
    for r in ok:
        per_repeat[r.repeat].append(r)
    repeat_values = [
        sum(r.numerator for r in rs) / sum(r.n_test for r in rs)
        for rs in per_repeat.values()
    ]
    return float(np.mean(repeat_values))


def paired_significance(
    runs_a: Sequence[RunResult], runs_b: Sequence[RunResult]
) -> tuple[float, float]:
    """Paired t-test over per-run metric differences; returns (t, p).

    Runs must line up (same plan, same order).  Zero-variance differences
    give p = 1 when the means agree and p = 0 otherwise.
    """
    paired = [
        (a.value, b.value)
        for a, b in zip(runs_a, runs_b)
        if not a.failed and not b.failed
    ]
    if len(runs_a) != len(runs_b) or not all(
        (a.repeat, a.fold) == (b.repeat, b.fold) for a, b in zip(runs_a, runs_b)
    ):
        raise ArgumentError("paired test needs runs from the same plan")
    if len(paired) < 2:
        raise ArgumentError("paired test needs at least two successful runs")
    diffs = np.array([a - b for a, b in paired], dtype=np.float64)
    n = diffs.size
    mean = float(diffs.mean())
    sd = float(diffs.std(ddof=1))
    if sd == 0.0:
        return (0.0 if mean == 0.0 else math.inf, 1.0 if mean == 0.0 else 0.0)
    t = mean / (sd / math.sqrt(n))
    df = n - 1
    p = float(_special.betainc(df / 2.0, 0.5, df / (df + t * t)))
    return t, p


class EvalReport:
    """Accumulates runs across systems/orders/tasks and renders tables."""

    def __init__(self):
        self.runs: list[RunResult] = []

    def add(self, runs: Sequence[RunResult]) -> None:
        self.runs.extend(runs)

    def runs_for(self, system: str, order: int, task: str) -> list[RunResult]:
        return [
            r for r in self.runs
            if r.system == system and r.order == order and r.task == task
        ]

    @property
    def systems(self) -> list[str]:
        seen: list[str] = []
        for r in self.runs:
            if r.system not in seen:
                seen.append(r.system)
        return seen

    @property
    def orders(self) -> list[int]:
        return sorted({r.order for r in self.runs})

    def summary(self) -> dict:
        out: dict = {"systems": []}
        for system in self.systems:
            row: dict = {"system": system, "metrics": {}}
            for order in self.orders:
                for task in TASKS:
                    runs = self.runs_for(system, order, task)
                    if not runs:
                        continue
                    row["metrics"][f"{task}-{order}"] = {
                        "mean": mean_metric(runs),
                        "pooled": pooled_metric(runs),
                        "runs": len(runs),
                        "failed": sum(1 for r in runs if r.failed),
                    }
            out["systems"].append(row)
        return out

    def to_tsv(self) -> str:
        """Results table: one row per system, accuracy then correlation."""
        orders = self.orders
        header = ["system"]
        header += [f"acc-{o}gr" for o in orders]
        header += [f"r-{o}gr" for o in orders]
        lines = ["\t".join(header)]
        for system in self.systems:
            cells = [system]
            for task, fmt, scale in (("binary", "{:.1f}", 100.0), ("regression", "{:.3f}", 1.0)):
                for order in orders:
                    runs = self.runs_for(system, order, task)
                    mean = mean_metric(runs) if runs else None
                    cells.append("-" if mean is None else fmt.format(mean * scale))
            lines.append("\t".join(cells))
        return "\n".join(lines) + "\n"

    def runs_csv(self) -> str:
        lines = ["system,order,task,repeat,fold,n_test,value,failed"]
        for r in self.runs:
            value = "" if r.value is None else f"{r.value:.10g}"
            lines.append(
                f"{r.system},{r.order},{r.task},{r.repeat},{r.fold},"
                f"{r.n_test},{value},{int(r.failed)}"
            )
        return "\n".join(lines) + "\n"
