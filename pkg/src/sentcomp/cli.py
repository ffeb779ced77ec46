"""Command-line front end.

Subcommands cover the full pipeline: candidate extraction from a corpus,
tuple generation, best-worst scoring and agreement, pattern mining,
cross-validated evaluation, whole-lexicon prediction, and the annotation
service.  Output files are written atomically (temp file + rename); logs go
to stderr so stdout stays machine-readable.

Exit codes: 0 on success, 1 on any expected failure (bad arguments, unreadable
or malformed inputs), 2 on an unexpected internal error.
"""

from __future__ import annotations

import argparse
import json
import logging
import os
import sys
import tempfile
from pathlib import Path

import numpy as np

from . import bws, lexicon, patterns, service
from .baselines import RuleBaseline
from .bundle import bundle_from_json, bundle_to_json, predict_records
from .embeddings import load_text_vectors
from .errors import ArgumentError, SentcompError, ValidationError
from .evaluation import (
    DEFAULT_FOLDS,
    DEFAULT_REPEATS,
    DEFAULT_SEED,
    CvPlan,
    EvalReport,
    SystemSpec,
    parse_system,
    run_cv,
)
from .features import MinMaxScaler, build_matrix, make_config
from .postags import load_tag_map
from .svm import svm_train, svr_train

log = logging.getLogger("sentcomp")


class _Parser(argparse.ArgumentParser):
    """argparse that reports usage problems as ordinary expected failures."""

    def error(self, message):
        raise ArgumentError(message)


def atomic_write(path: str | Path, text: str) -> None:
    """Write text so readers never observe a half-written file."""
    path = Path(path)
    fd, tmp = tempfile.mkstemp(
        dir=str(path.parent) or ".", prefix=f".{path.name}.", suffix=".tmp"
    )
    try:
        with os.fdopen(fd, "w", encoding="utf-8") as fh:
            fh.write(text)
            fh.flush()
            os.fsync(fh.fileno())
        os.replace(tmp, path)
    except BaseException:
        try:
            os.unlink(tmp)
        except OSError:
            pass
        raise


def _emit(text: str, out: str | None) -> None:
    if out is None or out == "-":
        sys.stdout.write(text)
    else:
        atomic_write(out, text)
        log.info("wrote %s", out)


def _load_records(args):
    lex = lexicon.load_scl(args.lexicon)
    pos_table = lexicon.load_pos_file(args.pos)
    return lexicon.phrase_records(lex, pos_table, getattr(args, "n", None))


def _load_tag_map(args):
    return load_tag_map(args.tag_map) if getattr(args, "tag_map", None) else None


# -- subcommand bodies -------------------------------------------------------


def cmd_extract(args) -> int:
    lexicons = [lexicon.PolarityLexicon.load(p) for p in args.lexicons]
    with open(args.corpus, encoding="utf-8") as fh:
        candidates = lexicon.extract_opposing_candidates(fh, lexicons, args.n)
    _emit("".join(" ".join(c) + "\n" for c in candidates), args.out)
    log.info("%d candidate %d-grams", len(candidates), args.n)
    return 0


def cmd_tuples(args) -> int:
    with open(args.terms, encoding="utf-8") as fh:
        terms = [line.strip() for line in fh if line.strip()]
    tuples = bws.generate_tuples(terms, k=args.k, seed=args.seed)
    lines = [
        json.dumps({"id": t.id, "items": list(t.items)}, sort_keys=True)
        for t in tuples
    ]
    _emit("\n".join(lines) + "\n", args.out)
    log.info("%d tuples for %d terms", len(tuples), len(terms))
    return 0


def cmd_score_bws(args) -> int:
    tuples = bws.load_tuples(args.tuples)
    responses = bws.load_responses(args.responses)
    if not responses:
        raise ValidationError(f"no responses in {args.responses}")
    bws.validate_responses(tuples, responses)
    table = bws.score(tuples, responses)
    text = table.to_json() if args.format == "json" else table.to_tsv()
    _emit(text, args.out)
    return 0


def cmd_agreement(args) -> int:
    tuples = bws.load_tuples(args.tuples)
    responses = bws.load_responses(args.responses)
    bws.validate_responses(tuples, responses)
    value = bws.agreement(tuples, responses)
    sys.stdout.write(f"{value:.4f}\n")
    return 0


def cmd_mine_patterns(args) -> int:
    records = _load_records(args)
    scps = patterns.mine(
        records,
        min_support=args.min_support,
        min_rate=args.min_rate,
        neutral_threshold=args.neutral_threshold,
        tag_map=_load_tag_map(args),
    )
    text = patterns.to_tsv(scps) if args.format == "tsv" else patterns.report(scps)
    _emit(text, args.out)
    log.info("%d patterns from %d phrases", len(scps), len(records))
    return 0


def _system_specs(args) -> list[SystemSpec]:
    specs = []
    for name in args.systems.split(","):
        spec = parse_system(name)
        if spec.kind == "svm":
            spec = spec.with_hyperparams(C=args.C, gamma=args.gamma, epsilon=args.epsilon)
        specs.append(spec)
    if not specs:
        raise ArgumentError("no systems given")
    return specs


def _maybe_store(args, specs):
    needs = any(
        spec.kind == "svm" and any(f.startswith("emb") for f in spec.flags)
        for spec in specs
    )
    if not needs:
        return None
    if not args.embeddings:
        raise ArgumentError("embedding features need --embeddings FILE")
    store = load_text_vectors(args.embeddings)
    log.info("loaded %d vectors (dim %d)", len(store), store.dim)
    return store


def cmd_eval(args) -> int:
    lex = lexicon.load_scl(args.lexicon)
    pos_table = lexicon.load_pos_file(args.pos)
    orders = (args.n,) if args.n is not None else (2, 3)
    specs = _system_specs(args)
    store = _maybe_store(args, specs)
    tag_map = _load_tag_map(args)
    plan = CvPlan(folds=args.folds, repeats=args.repeats, seed=args.seed)
    tasks = ("binary", "regression") if args.task == "both" else (args.task,)
    report = EvalReport()
    for spec in specs:
        for order in orders:
            records = lexicon.phrase_records(lex, pos_table, n=order)
            for task in tasks:
                log.info("evaluating %s on %s (%d-grams)", spec.name, task, order)
                report.add(
                    run_cv(records, spec, plan, task, store, tag_map,
                           threads=args.threads)
                )
    _emit(report.to_tsv(), args.out)
    if args.runs_csv:
        atomic_write(args.runs_csv, report.runs_csv())
        log.info("wrote %s", args.runs_csv)
    if args.json:
        atomic_write(args.json, json.dumps(report.summary(), indent=2) + "\n")
        log.info("wrote %s", args.json)
    return 0


def cmd_predict(args) -> int:
    records = _load_records(args)
    tag_map = _load_tag_map(args)
    if bool(args.model) == bool(args.system):
        raise ArgumentError("pass exactly one of --model or --system")
    if args.model:
        with open(args.model, encoding="utf-8") as fh:
            model, config, scaler = bundle_from_json(fh.read(), tag_map)
        store = None
        if config.wants_embeddings:
            if not args.embeddings:
                raise ArgumentError("this model needs --embeddings FILE")
            store = load_text_vectors(args.embeddings)
        raw = predict_records(model, config, scaler, records, store)
    else:
        spec = parse_system(args.system).with_hyperparams(
            C=args.C, gamma=args.gamma, epsilon=args.epsilon
        )
        store = _maybe_store(args, [spec])
        if spec.kind == "baseline":
            if args.save_model:
                raise ArgumentError("only svm systems can be serialized")
            rule = RuleBaseline(spec.baseline, tag_map).fit(records)
            raw = rule.predict(records)
        else:
            config = make_config(records, spec.flags, store, tag_map)
            scaler = MinMaxScaler()
            X = scaler.fit_transform(build_matrix(records, config, store))
            if args.task == "binary":
                y = np.array([r.label for r in records], dtype=np.float64)
                model = svm_train(X, y, C=spec.C, gamma=spec.gamma)
            else:
                y = np.array([r.score for r in records])
                model = svr_train(
                    X, y, C=spec.C, gamma=spec.gamma, epsilon=spec.epsilon
                )
            raw = model.decision(X)
            if args.save_model:
                atomic_write(args.save_model, bundle_to_json(model, config, scaler))
                log.info("wrote %s", args.save_model)
    lines = ["term\tgold\tpredicted\tpredicted_polarity"]
    for record, value in zip(records, raw):
        pol = "positive" if value >= 0 else "negative"
        lines.append(f"{record.text}\t{record.score:.6f}\t{float(value):.6f}\t{pol}")
    _emit("\n".join(lines) + "\n", args.out)
    return 0


def cmd_serve(args) -> int:
    tuples = bws.load_tuples(args.tuples)
    svc = service.CampaignService(
        tuples, args.log, quota=args.quota, ui_dir=args.ui
    )
    service.serve_forever(svc, args.host, args.port)
    return 0


# -- parser wiring ------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(
        prog="sentcomp",
        description="Sentiment composition of opposing-polarity phrases.",
    )
    parser.add_argument("-v", "--verbose", action="store_true", help="chatty logging")
    parser.add_argument("--config", default=None,
                        help="JSON file of option defaults (flags still win)")
    sub = parser.add_subparsers(dest="command", metavar="COMMAND")
    sub.required = True

    p = sub.add_parser("extract", help="find opposing-polarity n-grams in a corpus")
    p.add_argument("--corpus", required=True, help="tokenised text, one sentence per line")
    p.add_argument("--lexicons", required=True, nargs="+",
                   help="token<TAB>polarity files to consolidate")
    p.add_argument("--n", type=int, required=True, choices=(2, 3))
    p.add_argument("--out", default=None, help="output file (default stdout)")
    p.set_defaults(func=cmd_extract)

    p = sub.add_parser("tuples", help="build best-worst tuples from a term list")
    p.add_argument("--terms", required=True, help="one term per line")
    p.add_argument("--k", "--appearances", dest="k", type=int,
                   default=bws.DEFAULT_APPEARANCES,
                   help="target appearances per term (default %(default)s)")
    p.add_argument("--seed", type=int, default=DEFAULT_SEED)
    p.add_argument("--out", default=None)
    p.set_defaults(func=cmd_tuples)

    p = sub.add_parser("score-bws", help="turn responses into counting scores")
    p.add_argument("--tuples", required=True)
    p.add_argument("--responses", required=True)
    p.add_argument("--format", choices=("json", "tsv"), default="tsv")
    p.add_argument("--out", default=None)
    p.set_defaults(func=cmd_score_bws)

    p = sub.add_parser("agreement", help="majority agreement of responses")
    p.add_argument("--tuples", required=True)
    p.add_argument("--responses", required=True)
    p.set_defaults(func=cmd_agreement)

    p = sub.add_parser("mine-patterns", help="mine composition patterns")
    p.add_argument("--lexicon", required=True, help="term<TAB>score file")
    p.add_argument("--pos", required=True, help="term<TAB>space-joined-tags file")
    p.add_argument("--n", type=int, default=None, choices=(2, 3),
                   help="restrict to one phrase length")
    p.add_argument("--min-support", type=int, default=patterns.DEFAULT_MIN_SUPPORT)
    p.add_argument("--min-rate", type=float, default=patterns.DEFAULT_MIN_RATE)
    p.add_argument("--neutral-threshold", type=float, default=0.0,
                   help="|score| below this is a neutral slot")
    p.add_argument("--tag-map", default=None, help="fine<TAB>coarse tag file")
    p.add_argument("--format", choices=("tsv", "text"), default="tsv")
    p.add_argument("--out", default=None)
    p.set_defaults(func=cmd_mine_patterns)

    p = sub.add_parser("eval", help="cross-validated comparison of systems")
    p.add_argument("--lexicon", required=True)
    p.add_argument("--pos", required=True)
    p.add_argument("--n", type=int, default=None, choices=(2, 3),
                   help="phrase length (default: both orders)")
    p.add_argument("--systems", required=True,
                   help="comma list, e.g. majority,most-polar,svm:pos+score+uni")
    p.add_argument("--task", choices=("binary", "regression", "both"), default="binary")
    p.add_argument("--folds", type=int, default=DEFAULT_FOLDS)
    p.add_argument("--repeats", type=int, default=DEFAULT_REPEATS)
    p.add_argument("--seed", type=int, default=DEFAULT_SEED)
    p.add_argument("--embeddings", default=None, help="word vectors, token then values")
    p.add_argument("--tag-map", default=None)
    p.add_argument("--C", type=float, default=1.0)
    p.add_argument("--gamma", default="auto")
    p.add_argument("--epsilon", type=float, default=0.1)
    p.add_argument("--threads", type=int, default=1)
    p.add_argument("--out", default=None, help="summary table (default stdout)")
    p.add_argument("--runs-csv", default=None, help="per-run metrics")
    p.add_argument("--json", default=None, help="summary with pooled means")
    p.set_defaults(func=cmd_eval)

    p = sub.add_parser("predict", help="score phrases with a fitted or serialized model")
    p.add_argument("--lexicon", required=True)
    p.add_argument("--pos", required=True)
    p.add_argument("--n", type=int, default=None, choices=(2, 3))
    p.add_argument("--system", default=None,
                   help="system to fit on the full set (exclusive with --model)")
    p.add_argument("--model", default=None,
                   help="serialized model JSON to apply (exclusive with --system)")
    p.add_argument("--save-model", dest="save_model", default=None,
                   help="write the fitted model as JSON (svm systems only)")
    p.add_argument("--task", choices=("binary", "regression"), default="regression")
    p.add_argument("--embeddings", default=None)
    p.add_argument("--tag-map", default=None)
    p.add_argument("--C", type=float, default=1.0)
    p.add_argument("--gamma", default="auto")
    p.add_argument("--epsilon", type=float, default=0.1)
    p.add_argument("--out", default=None)
    p.set_defaults(func=cmd_predict)

    p = sub.add_parser("serve", help="run the annotation campaign service")
    p.add_argument("--tuples", required=True)
    p.add_argument("--log", required=True, help="append-only response JSONL")
    p.add_argument("--quota", type=int, default=bws.DEFAULT_APPEARANCES)
    p.add_argument("--host", default="127.0.0.1")
    p.add_argument("--port", type=int, default=8765)
    p.add_argument("--ui", default=None, help="static files directory")
    p.set_defaults(func=cmd_serve)

    parser.sub_map = dict(sub.choices)
    return parser


def _scan_for_config(argv: list[str]) -> tuple[str | None, str | None]:
    """Find the --config path and the subcommand without a full parse."""
    config = None
    command = None
    i = 0
    while i < len(argv):
        tok = argv[i]
        if tok == "--config":
            if i + 1 >= len(argv):
                raise ArgumentError("--config expects a file path")
            config = argv[i + 1]
            i += 2
            continue
        if tok.startswith("--config="):
            config = tok.split("=", 1)[1]
        elif not tok.startswith("-"):
            command = tok
            break
        i += 1
    return config, command


def _apply_config(parser: argparse.ArgumentParser, argv: list[str]) -> None:
    """Overlay JSON config values as subcommand defaults (flags still win)."""
    config_path, command = _scan_for_config(argv)
    if config_path is None:
        return
    try:
        obj = json.loads(Path(config_path).read_text(encoding="utf-8"))
    except json.JSONDecodeError as exc:
        raise ArgumentError(f"config {config_path}: invalid JSON ({exc})") from exc
    if not isinstance(obj, dict):
        raise ArgumentError(f"config {config_path}: expected a JSON object")
    sub_map = getattr(parser, "sub_map", {})
    if command is None or command not in sub_map:
        raise ArgumentError("--config requires a subcommand on the command line")
    sp = sub_map[command]
    by_dest = {a.dest: a for a in sp._actions if a.dest not in ("help", "func")}
    overrides = {}
    for key, value in obj.items():
        dest = str(key).replace("-", "_")
        action = by_dest.get(dest)
        if action is None:
            raise ArgumentError(f"config {config_path}: unknown key {key!r} "
                                f"for command {command!r}")
        if isinstance(action, argparse._StoreTrueAction):
            if not isinstance(value, bool):
                raise ArgumentError(f"config {config_path}: {key!r} must be a boolean")
        elif action.type is not None and value is not None:
            values = value if action.nargs in ("+", "*") else [value]
            if not isinstance(values, list):
                raise ArgumentError(f"config {config_path}: {key!r} must be a list")
            try:
                values = [action.type(v) for v in values]
            except (TypeError, ValueError) as exc:
                raise ArgumentError(
                    f"config {config_path}: bad value for {key!r}: {value!r}"
                ) from exc
            value = values if action.nargs in ("+", "*") else values[0]
        if action.choices is not None and value not in action.choices:
            raise ArgumentError(f"config {config_path}: {key!r} must be one of "
                                f"{sorted(action.choices)}")
        overrides[dest] = value
        action.required = False
    sp.set_defaults(**overrides)


def main(argv: list[str] | None = None) -> int:
    logging.basicConfig(
        stream=sys.stderr, format="%(levelname)s %(name)s: %(message)s"
    )
    try:
        parser = build_parser()
        argv = list(sys.argv[1:]) if argv is None else list(argv)
        _apply_config(parser, argv)
        args = parser.parse_args(argv)
        log.setLevel(logging.DEBUG if args.verbose else logging.INFO)
        return args.func(args)
    except SentcompError as exc:
        log.error("%s", exc)
        return 1
    except FileNotFoundError as exc:
        log.error("%s", exc)
        return 1
    except KeyboardInterrupt:
        return 1
    except Exception:
        log.exception("unexpected error")
        return 2


if __name__ == "__main__":
    sys.exit(main())
