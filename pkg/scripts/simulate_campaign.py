#!/usr/bin/env python3
"""Simulate an annotation campaign over a tuples file.

Each simulated annotator carries the same latent value per term (hash-derived
by default, or taken from a term<TAB>value file) and answers every tuple:
with probability 1 - noise they pick the latent argmax as best and the latent
argmin as worst, otherwise a random distinct pair.  Responses either go to a
JSONL file compatible with `sentcomp score-bws`, or are POSTed one by one to
a live annotation service.

Examples:
    python3 scripts/simulate_campaign.py --tuples t.jsonl --out resp.jsonl
    python3 scripts/simulate_campaign.py --tuples t.jsonl \
        --url http://127.0.0.1:8765 --annotators 8
"""

from __future__ import annotations

import argparse
import hashlib
import json
import sys
import urllib.request
from datetime import datetime, timedelta, timezone
from pathlib import Path

import numpy as np

ROOT = Path(__file__).resolve().parent.parent
sys.path.insert(0, str(ROOT / "src"))

from sentcomp import bws  # noqa: E402

EPOCH = datetime(2026, 1, 5, 9, 0, 0, tzinfo=timezone.utc)


def hash_latent(term: str) -> float:
    digest = hashlib.blake2b(term.encode("utf-8"), digest_size=8).digest()
    return int.from_bytes(digest[:4], "big") / 2**31 - 1.0


def load_latent(path: str) -> dict[str, float]:
    table = {}
    for line in Path(path).read_text(encoding="utf-8").splitlines():
        if line.strip():
            term, _, value = line.partition("\t")
            table[term.strip()] = float(value)
    return table


def choose(items, latent, noise, rng) -> tuple[str, str]:
    if rng.random() < noise:
        best, worst = rng.choice(len(items), size=2, replace=False)
        return items[int(best)], items[int(worst)]
    values = [latent(item) for item in items]
    return items[int(np.argmax(values))], items[int(np.argmin(values))]


def post_json(url: str, payload: dict) -> dict:
    req = urllib.request.Request(
        url, data=json.dumps(payload).encode("utf-8"),
        headers={"Content-Type": "application/json"}, method="POST",
    )
    with urllib.request.urlopen(req) as resp:
        return json.loads(resp.read().decode("utf-8"))


def get_json(url: str) -> dict:
    with urllib.request.urlopen(url) as resp:
        return json.loads(resp.read().decode("utf-8"))


def run_offline(tuples, args, latent, rng) -> list[bws.BwsResponse]:
    responses = []
    for who in range(args.annotators):
        annotator = f"sim{who:02d}"
        for tup in tuples:
            best, worst = choose(list(tup.items), latent, args.noise, rng)
            if best == worst:
                continue
            stamp = (EPOCH + timedelta(seconds=len(responses))).isoformat()
            responses.append(
                bws.BwsResponse(tup.id, annotator, best, worst, stamp)
            )
    with open(args.out, "w", encoding="utf-8") as fh:
        for resp in responses:
            fh.write(bws.response_to_json(resp) + "\n")
    return responses


def run_live(args, latent, rng) -> int:
    base = args.url.rstrip("/")
    sent = 0
    for who in range(args.annotators):
        annotator = f"sim{who:02d}"
        while True:
            task = get_json(f"{base}/api/next?annotator={annotator}")
            if task.get("done"):
                break
            best, worst = choose(task["items"], latent, args.noise, rng)
            while best == worst:
                best, worst = choose(task["items"], latent, 1.0, rng)
            post_json(f"{base}/api/response", {
                "tuple_id": task["tuple_id"], "annotator": annotator,
                "best": best, "worst": worst,
            })
            sent += 1
    return sent


def main() -> int:
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--tuples", required=True, help="tuples JSONL file")
    ap.add_argument("--annotators", type=int, default=8)
    ap.add_argument("--noise", type=float, default=0.2,
                    help="probability of a random answer (default 0.2)")
    ap.add_argument("--seed", type=int, default=7)
    ap.add_argument("--latent", default=None,
                    help="term<TAB>value file overriding the hash latent")
    ap.add_argument("--out", default=None, help="responses JSONL to write")
    ap.add_argument("--url", default=None, help="live service base URL")
    args = ap.parse_args()
    if bool(args.out) == bool(args.url):
        ap.error("pass exactly one of --out or --url")

    tuples = bws.load_tuples(args.tuples)
    rng = np.random.default_rng(args.seed)
    if args.latent:
        table = load_latent(args.latent)
        latent = lambda term: table[term]  # noqa: E731
    else:
        latent = hash_latent

    if args.out:
        responses = run_offline(tuples, args, latent, rng)
        table = bws.score(tuples, responses)
        agreement = bws.agreement(tuples, responses)
        print(f"wrote {len(responses)} responses to {args.out}", file=sys.stderr)
        print(f"agreement {agreement:.4f} over {len(table)} scored terms",
              file=sys.stderr)
    else:
        sent = run_live(args, latent, rng)
        print(f"submitted {sent} responses to {args.url}", file=sys.stderr)
    return 0


if __name__ == "__main__":
    sys.exit(main())
