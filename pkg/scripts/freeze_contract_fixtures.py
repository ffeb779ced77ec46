#!/usr/bin/env python3
"""Freeze the JSON payloads the annotation service emits for a tiny campaign.

The browser client and the Python suite both test against the files this
script writes (frontend/tests/fixtures/), so the wire contract is pinned by
one shared set of concrete payloads rather than two descriptions that can
drift apart. tests/test_contract_fixtures.py replays the same steps
in-process and fails if the service stops matching the frozen bytes.

The campaign: the first eight unigrams of the bundled lexicon, one
appearance each (two 4-tuples), quota 2, annotators alice and bob with
pinned timestamps. Everything is deterministic; rerunning the script must
be a no-op unless the service's wire format actually changed.
"""

import json
import sys
import tempfile
from pathlib import Path

REPO = Path(__file__).resolve().parents[1]
sys.path.insert(0, str(REPO / "src"))

from sentcomp import bws, lexicon, service  # noqa: E402

FIXTURES = REPO / "frontend" / "tests" / "fixtures"

TUPLE_SEED = 11
QUOTA = 2

STAMPS = {
    ("alice", 0): "2026-02-01T12:00:00Z",
    ("alice", 1): "2026-02-01T12:01:00Z",
    ("bob", 0): "2026-02-01T12:02:00Z",
    ("bob", 1): "2026-02-01T12:03:00Z",
}


def first_unigrams(n: int) -> list[str]:
    lex = lexicon.load_scl(REPO / "data" / "scl_opp.tsv")
    terms = sorted(" ".join(e.term) for e in lex.entries if len(e.term) == 1)
    return terms[:n]


def scripted_answer(items: list[str]) -> tuple[str, str]:
    """Deterministic pick: alphabetically first is best, last is worst."""
    ranked = sorted(items)
    return ranked[0], ranked[-1]


def main() -> None:
    FIXTURES.mkdir(parents=True, exist_ok=True)
    terms = first_unigrams(2 * bws.TUPLE_SIZE)
    tuples = bws.generate_tuples(terms, k=1, seed=TUPLE_SEED)
    bws.save_tuples(tuples, FIXTURES / "tuples.jsonl")

    log_path = Path(tempfile.mkdtemp()) / "log.jsonl"
    svc = service.CampaignService(tuples, log_path, quota=QUOTA)

    payloads: dict[str, object] = {}
    payloads["campaign"] = svc.campaign_info()

    first = svc.next_for("alice")
    payloads["next_open"] = first
    best, worst = scripted_answer(first["items"])
    request = {
        "tuple_id": first["tuple_id"],
        "annotator": "alice",
        "best": best,
        "worst": worst,
        "timestamp": STAMPS[("alice", 0)],
    }
    payloads["submit_request"] = request
    payloads["submit_ok"] = svc.submit(request)
    payloads["submit_duplicate"] = svc.submit(request)
    try:
        svc.submit({**request, "best": worst, "worst": best})
    except service.ConflictError as exc:
        payloads["error_conflict"] = {"error": str(exc)}
    payloads["progress_partial"] = svc.progress()

    # Walk both annotators through the rest of the campaign.
    turn = 1
    for annotator in ("alice", "bob"):
        while True:
            nxt = svc.next_for(annotator)
            if nxt.get("done"):
                break
            b, w = scripted_answer(nxt["items"])
            svc.submit(
                {
                    "tuple_id": nxt["tuple_id"],
                    "annotator": annotator,
                    "best": b,
                    "worst": w,
                    "timestamp": STAMPS[(annotator, turn % 2)],
                }
            )
            turn += 1
    payloads["next_done"] = svc.next_for("alice")
    payloads["progress_complete"] = svc.progress()
    payloads["scores"] = json.loads(svc.score_bytes().decode("utf-8"))

    (FIXTURES / "responses.jsonl").write_bytes(log_path.read_bytes())
    for name, payload in sorted(payloads.items()):
        path = FIXTURES / f"{name}.json"
        path.write_text(json.dumps(payload, indent=2, sort_keys=True) + "\n")
        print(f"wrote {path.relative_to(REPO)}")


if __name__ == "__main__":
    main()
