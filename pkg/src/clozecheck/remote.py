"""Shared HTTP plumbing for the remote tagger and the remote answer backend."""

from __future__ import annotations

import time
from typing import Any

import requests

from .errors import DataError, TransportError

DEFAULT_TIMEOUT = 10.0
DEFAULT_RETRIES = 3
DEFAULT_BACKOFF = 0.5


def post_json(
    endpoint: str,
    payload: dict[str, Any],
    *,
    timeout: float = DEFAULT_TIMEOUT,
    retries: int = DEFAULT_RETRIES,
    backoff: float = DEFAULT_BACKOFF,
) -> dict[str, Any]:
    """POST a JSON body and return the decoded JSON response.

    Connection failures, timeouts, and 5xx responses are retried up to
    ``retries`` extra attempts with exponential backoff, then surface as
    TransportError. A 4xx response or an undecodable body is a DataError:
    retrying identical bad data cannot help.
    """
    attempts = retries + 1
    last_failure: Exception | None = None
    for attempt in range(attempts):
        if attempt:
            time.sleep(backoff * (2 ** (attempt - 1)))
        try:
            response = requests.post(endpoint, json=payload, timeout=timeout)
        except (requests.ConnectionError, requests.Timeout) as exc:
            last_failure = exc
            continue
        if 500 <= response.status_code < 600:
            last_failure = TransportError(f"{endpoint} returned {response.status_code}")
            continue
        if response.status_code != 200:
            raise DataError(f"{endpoint} rejected request with status {response.status_code}: {response.text[:200]}")
        try:
            body = response.json()
        except ValueError as exc:
            raise DataError(f"{endpoint} returned a non-JSON body") from exc
        if not isinstance(body, dict):
            raise DataError(f"{endpoint} returned a non-object JSON body")
        return body
    raise TransportError(f"{endpoint} unreachable after {attempts} attempts: {last_failure}")
