"""HTTP service that runs a best-worst annotation campaign.

Standard-library HTTP stack only (ThreadingHTTPServer); state is guarded by
a single lock, and every accepted response is appended to a JSONL log with
an fsync, so a crashed campaign resumes exactly from the log.

Assignment policy: an annotator asking for work gets their open assignment
back while it is fresh (10 minutes); otherwise the eligible tuple with the
fewest stored responses, ties broken by tuple id.  A tuple is eligible when
the annotator has not answered it and it is below the response quota.
Submissions must answer the annotator's open assignment; anything stale,
foreign, or conflicting is refused with a 409, while a byte-equal duplicate
of an already-recorded answer is acknowledged without a second log entry.

Endpoints (JSON unless noted):
  GET  /api/campaign   -> campaign shape and quota
  GET  /api/next?annotator=NAME -> an assignment or {"done": true}
  POST /api/response   -> record one best-worst judgement
  GET  /api/progress   -> counts per tuple and annotator
  GET  /api/scores     -> canonical score table (same bytes as the CLI)
  GET  /<path>         -> static files when a UI directory is configured
"""

from __future__ import annotations

import json
import logging
import mimetypes
import threading
import time
from dataclasses import dataclass
from datetime import datetime, timezone
from http.server import BaseHTTPRequestHandler, ThreadingHTTPServer
from pathlib import Path
from urllib.parse import parse_qs, urlparse

from . import bws
from .errors import ArgumentError, ValidationError

log = logging.getLogger(__name__)

ASSIGNMENT_TTL_SECONDS = 600.0
MAX_BODY_BYTES = 64 * 1024
MAX_ANNOTATOR_CHARS = 100


class ConflictError(ValidationError):
    """Submission clashes with recorded state (HTTP 409)."""


def _clean_annotator(name: str) -> str:
    name = name.strip()
    if not name or len(name) > MAX_ANNOTATOR_CHARS:
        raise ValidationError("annotator name must be 1..100 characters")
    if any(ord(c) < 32 or ord(c) == 127 for c in name):
        raise ValidationError("annotator name contains control characters")
    return name


@dataclass
class Assignment:
    tuple_id: str
    expires_at: float


class CampaignService:
    """In-memory campaign state backed by an append-only response log."""

    def __init__(
        self,
        tuples: list[bws.BwsTuple],
        log_path: str | Path,
        quota: int = bws.DEFAULT_APPEARANCES,
        ui_dir: str | Path | None = None,
        clock=time.monotonic,
    ):
        if quota < 1:
            raise ArgumentError("quota must be at least 1")
        self.tuples = list(tuples)
        self.by_id = {t.id: t for t in self.tuples}
        if len(self.by_id) != len(self.tuples):
            raise ValidationError("duplicate tuple ids in campaign")
        self.quota = quota
        self.log_path = Path(log_path)
        self.ui_dir = Path(ui_dir).resolve() if ui_dir is not None else None
        self.clock = clock
        self.lock = threading.RLock()
        self.responses: list[bws.BwsResponse] = []
        self.answers: dict[tuple[str, str], bws.BwsResponse] = {}
        self.per_tuple: dict[str, int] = {t.id: 0 for t in self.tuples}
        self.per_annotator: dict[str, int] = {}
        self.assignments: dict[str, Assignment] = {}
        if self.log_path.exists():
            for response in bws.load_responses(self.log_path):
                self._absorb(response)

    def _absorb(self, response: bws.BwsResponse) -> None:
        bws.validate_responses(self.tuples, [response])
        key = (response.tuple_id, response.annotator)
        if key in self.answers:
            raise ValidationError(
                f"duplicate response for {response.annotator} on {response.tuple_id}"
            )
        self.responses.append(response)
        self.answers[key] = response
        self.per_tuple[response.tuple_id] += 1
        self.per_annotator[response.annotator] = (
            self.per_annotator.get(response.annotator, 0) + 1
        )

    # -- API operations ----------------------------------------------------

    def campaign_info(self) -> dict:
        terms = sorted({item for t in self.tuples for item in t.items})
        return {
            "tuples": len(self.tuples),
            "items_per_tuple": bws.TUPLE_SIZE,
            "quota": self.quota,
            "terms": len(terms),
        }

    def next_for(self, annotator: str) -> dict:
        annotator = _clean_annotator(annotator)
        with self.lock:
            now = self.clock()
            open_one = self.assignments.get(annotator)
            if open_one is not None:
                fresh = open_one.expires_at > now
                unanswered = (open_one.tuple_id, annotator) not in self.answers
                full = self.per_tuple[open_one.tuple_id] >= self.quota
                if fresh and unanswered and not full:
                    return self._assignment_payload(open_one.tuple_id)
                del self.assignments[annotator]
            eligible = [
                t.id
                for t in self.tuples
                if (t.id, annotator) not in self.answers
                and self.per_tuple[t.id] < self.quota
            ]
            if not eligible:
                return {"done": True}
            eligible.sort(key=lambda tid: (self.per_tuple[tid], tid))
            chosen = eligible[0]
            self.assignments[annotator] = Assignment(
                chosen, now + ASSIGNMENT_TTL_SECONDS
            )
            return self._assignment_payload(chosen)

    def _assignment_payload(self, tuple_id: str) -> dict:
        t = self.by_id[tuple_id]
        return {"tuple_id": tuple_id, "items": list(t.items), "done": False}

    def submit(self, payload: dict) -> dict:
        for field in ("tuple_id", "annotator", "best", "worst"):
            if not isinstance(payload.get(field), str) or not payload[field]:
                raise ValidationError(f"response needs a non-empty {field!r} field")
        annotator = _clean_annotator(payload["annotator"])
        timestamp = payload.get("timestamp")
        if timestamp is None:
            timestamp = datetime.now(timezone.utc).isoformat()
        response = bws.BwsResponse(
            tuple_id=payload["tuple_id"],
            annotator=annotator,
            best=payload["best"],
            worst=payload["worst"],
            timestamp=timestamp,
        )
        with self.lock:
            key = (response.tuple_id, response.annotator)
            previous = self.answers.get(key)
            if previous is not None:
                if previous.best == response.best and previous.worst == response.worst:
                    return {
                        "status": "duplicate",
                        "responses_for_tuple": self.per_tuple[response.tuple_id],
                    }
                raise ConflictError(
                    f"{annotator} already answered {response.tuple_id} differently"
                )
            if response.tuple_id not in self.by_id:
                raise ValidationError(f"unknown tuple {response.tuple_id!r}")
            open_one = self.assignments.get(annotator)
            if open_one is None or open_one.expires_at <= self.clock():
                raise ConflictError(
                    f"{annotator} has no open assignment; ask /api/next first"
                )
            if open_one.tuple_id != response.tuple_id:
                raise ConflictError(
                    f"open assignment is {open_one.tuple_id}, not {response.tuple_id}"
                )
            if self.per_tuple[response.tuple_id] >= self.quota:
                raise ConflictError(f"tuple {response.tuple_id} already has its quota")
            bws.validate_responses(self.tuples, [response])
            bws.append_response(response, self.log_path)
            self._absorb(response)
            self.assignments.pop(annotator, None)
            return {
                "status": "ok",
                "responses_for_tuple": self.per_tuple[response.tuple_id],
            }

    def progress(self) -> dict:
        with self.lock:
            needed = self.quota * len(self.tuples)
            done = sum(
                1 for tid, n in self.per_tuple.items() if n >= self.quota
            )
            return {
                "responses": len(self.responses),
                "needed": needed,
                "tuples_done": done,
                "tuples": len(self.tuples),
                "annotators": dict(sorted(self.per_annotator.items())),
                "complete": len(self.responses) >= needed and done == len(self.tuples),
            }

    def score_bytes(self) -> bytes:
        with self.lock:
            table = bws.score(self.tuples, self.responses)
        return table.to_json().encode("utf-8")


class _Handler(BaseHTTPRequestHandler):
    service: CampaignService  # set on the subclass made by make_server
    protocol_version = "HTTP/1.1"

    def log_message(self, fmt, *args):
        log.info("%s %s", self.address_string(), fmt % args)

    def _send_json(self, status: int, payload: dict | bytes) -> None:
        body = payload if isinstance(payload, bytes) else json.dumps(payload).encode()
        self.send_response(status)
        self.send_header("Content-Type", "application/json")
        self.send_header("Content-Length", str(len(body)))
        self.end_headers()
        self.wfile.write(body)

    def _send_error_json(self, status: int, message: str) -> None:
        self._send_json(status, {"error": message})

    def do_GET(self):
        try:
            parsed = urlparse(self.path)
            route = parsed.path
            if route == "/api/campaign":
                self._send_json(200, self.service.campaign_info())
            elif route == "/api/next":
                query = parse_qs(parsed.query)
                names = query.get("annotator", [])
                if len(names) != 1:
                    raise ValidationError("pass exactly one annotator=NAME parameter")
                self._send_json(200, self.service.next_for(names[0]))
            elif route == "/api/progress":
                self._send_json(200, self.service.progress())
            elif route == "/api/scores":
                self._send_json(200, self.service.score_bytes())
            elif route.startswith("/api/"):
                self._send_error_json(404, f"no such endpoint {route}")
            else:
                self._serve_static(route)
        except ConflictError as exc:
            self._send_error_json(409, str(exc))
        except (ValidationError, ArgumentError) as exc:
            self._send_error_json(400, str(exc))
        except Exception:
            log.exception("GET %s failed", self.path)
            self._send_error_json(500, "internal error")

    def do_POST(self):
        try:
            route = urlparse(self.path).path
            if route != "/api/response":
                self._send_error_json(404, f"no such endpoint {route}")
                return
            length = self.headers.get("Content-Length")
            if length is None or not length.isdigit():
                self._send_error_json(411, "Content-Length required")
                return
            length = int(length)
            if length > MAX_BODY_BYTES:
                self._send_error_json(413, "request body too large")
                return
            raw = self.rfile.read(length)
            try:
                payload = json.loads(raw.decode("utf-8"))
            except (UnicodeDecodeError, json.JSONDecodeError) as exc:
                raise ValidationError(f"request body is not valid JSON: {exc}")
            if not isinstance(payload, dict):
                raise ValidationError("request body must be a JSON object")
            self._send_json(200, self.service.submit(payload))
        except ConflictError as exc:
            self._send_error_json(409, str(exc))
        except (ValidationError, ArgumentError) as exc:
            self._send_error_json(400, str(exc))
        except Exception:
            log.exception("POST %s failed", self.path)
            self._send_error_json(500, "internal error")

    def _serve_static(self, route: str) -> None:
        root = self.service.ui_dir
        if root is None:
            self._send_error_json(404, "no UI configured; API lives under /api/")
            return
        relative = route.lstrip("/") or "index.html"
        target = (root / relative).resolve()
        if root not in target.parents and target != root:
            self._send_error_json(404, "not found")
            return
        if target.is_dir():
            target = target / "index.html"
        if not target.is_file():
            self._send_error_json(404, "not found")
            return
        ctype = mimetypes.guess_type(str(target))[0] or "application/octet-stream"
        body = target.read_bytes()
        self.send_response(200)
        self.send_header("Content-Type", ctype)
        self.send_header("Content-Length", str(len(body)))
        self.end_headers()
        self.wfile.write(body)


def make_server(
    service: CampaignService, host: str = "127.0.0.1", port: int = 8765
) -> ThreadingHTTPServer:
    """Bind a threading HTTP server for the campaign (port 0 picks a free one)."""
    handler = type("CampaignHandler", (_Handler,), {"service": service})
    return ThreadingHTTPServer((host, port), handler)


def serve_forever(service: CampaignService, host: str, port: int) -> None:
    server = make_server(service, host, port)
    real_port = server.server_address[1]
    log.info("annotation service on http://%s:%d/ (quota %d)", host, real_port, service.quota)
    try:
        server.serve_forever()
    except KeyboardInterrupt:
        log.info("shutting down")
    finally:
        server.server_close()
