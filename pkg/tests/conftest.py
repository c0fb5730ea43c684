"""Shared fixtures: a fixture vocabulary, claim builders, and stub HTTP services."""

from __future__ import annotations

import json
import threading
from http.server import BaseHTTPRequestHandler, ThreadingHTTPServer
from pathlib import Path
from typing import Any, Callable

import pytest

from clozecheck import Vocab
from clozecheck.dataset import dumps_record

FIXTURE_TOKENS = [
    "[PAD]",
    "[UNK]",
    "[CLS]",
    "[SEP]",
    "[MASK]",
    ".",
    ",",
    "a",
    "an",
    "and",
    "appeared",
    "berlin",
    "born",
    "capital",
    "cat",
    "city",
    "film",
    "france",
    "germany",
    "great",
    "grew",
    "he",
    "in",
    "is",
    "kill",
    "london",
    "loves",
    "movie",
    "of",
    "paris",
    "sat",
    "she",
    "tara",
    "the",
    "to",
    "up",
    "view",
    "was",
    "##n",
    "##s",
]


@pytest.fixture(scope="session")
def vocab() -> Vocab:
    return Vocab.from_tokens(FIXTURE_TOKENS)


@pytest.fixture
def vocab_file(tmp_path: Path) -> Path:
    path = tmp_path / "vocab.txt"
    path.write_text("\n".join(FIXTURE_TOKENS) + "\n", encoding="utf-8")
    return path


def write_claims(path: Path, records: list[dict[str, Any]]) -> Path:
    path.write_text("".join(dumps_record(r) + "\n" for r in records), encoding="utf-8")
    return path


@pytest.fixture
def make_claims_file(tmp_path: Path) -> Callable[[list[dict[str, Any]]], Path]:
    def _make(records: list[dict[str, Any]], name: str = "claims.jsonl") -> Path:
        return write_claims(tmp_path / name, records)

    return _make


class StubServer:
    """Tiny threaded HTTP stub; ``respond(path, body) -> (status, payload)``."""

    def __init__(self, respond: Callable[[str, dict], tuple[int, dict]], fail_first: int = 0) -> None:
        self.respond = respond
        self.fail_remaining = fail_first
        self.requests: list[tuple[str, dict]] = []
        self._lock = threading.Lock()

        stub = self

        class Handler(BaseHTTPRequestHandler):
            def do_POST(self) -> None:
                length = int(self.headers.get("Content-Length", "0"))
                body = json.loads(self.rfile.read(length) or b"{}")
                with stub._lock:
                    stub.requests.append((self.path, body))
                    must_fail = stub.fail_remaining > 0
                    if must_fail:
                        stub.fail_remaining -= 1
                if must_fail:
                    self.send_response(500)
                    self.end_headers()
                    return
                status, payload = stub.respond(self.path, body)
                data = json.dumps(payload).encode("utf-8")
                self.send_response(status)
                self.send_header("Content-Type", "application/json")
                self.send_header("Content-Length", str(len(data)))
                self.end_headers()
                self.wfile.write(data)

            def log_message(self, *args) -> None:  # keep test output quiet
                pass

        self._httpd = ThreadingHTTPServer(("127.0.0.1", 0), Handler)
        self._thread = threading.Thread(target=self._httpd.serve_forever, daemon=True)
        self._thread.start()

    @property
    def endpoint(self) -> str:
        host, port = self._httpd.server_address[:2]
        return f"http://{host}:{port}/"

    def close(self) -> None:
        self._httpd.shutdown()
        self._httpd.server_close()


@pytest.fixture
def start_stub():
    servers: list[StubServer] = []

    def _start(respond: Callable[[str, dict], tuple[int, dict]], fail_first: int = 0) -> StubServer:
        server = StubServer(respond, fail_first=fail_first)
        servers.append(server)
        return server

    yield _start
    for server in servers:
        server.close()


def mlm_responder(answers: dict[str, str], mutate: Callable[[dict], dict] | None = None):
    """Stub masked-LM responder: answer map keyed by wire id, score 1.0 first.

    When a query asks for top_k > 1, filler candidates with strictly
    decreasing scores pad the list to exactly top_k.
    """

    def respond(path: str, body: dict) -> tuple[int, dict]:
        results = []
        for query in body.get("queries", []):
            top_k = query.get("top_k", 1)
            candidates = [{"token": answers[query["id"]], "score": 1.0}]
            for i in range(top_k - 1):
                candidates.append({"token": f"filler{i}", "score": round(0.9 - 0.1 * i, 4)})
            results.append(
                {"id": query["id"], "mask_position": query["mask_position"], "candidates": candidates}
            )
        payload = {"results": results}
        if mutate is not None:
            payload = mutate(payload)
        return 200, payload

    return respond


def ner_responder(entities_by_text: dict[str, list[dict[str, Any]]]):
    """Stub NER responder: maps exact claim text to an entity list."""

    def respond(path: str, body: dict) -> tuple[int, dict]:
        return 200, {"entities": entities_by_text.get(body.get("text", ""), [])}

    return respond


def pytest_terminal_summary(terminalreporter, exitstatus, config) -> None:
    """One pass/fail line per acceptance criterion at the end of the run."""
    lines = []
    for status in ("passed", "failed", "error"):
        for report in terminalreporter.stats.get(status, []):
            if "test_acceptance" in getattr(report, "nodeid", ""):
                name = report.nodeid.split("::")[-1]
                lines.append((name, status.upper()))
    if lines:
        terminalreporter.section("acceptance criteria")
        for name, status in sorted(lines):
            terminalreporter.write_line(f"{'PASS' if status == 'PASSED' else 'FAIL'}  {name}")
