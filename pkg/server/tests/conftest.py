"""Server test fixtures: a tiny offline checkpoint and an in-thread uvicorn runner."""

from __future__ import annotations

import socket
import threading
import time
from pathlib import Path

import pytest
import uvicorn

# Keep every test run fully offline; the fixture checkpoint is local.
import os

os.environ.setdefault("HF_HUB_OFFLINE", "1")
os.environ.setdefault("TRANSFORMERS_OFFLINE", "1")

CHECKPOINT_TOKENS = [
    "[PAD]",
    "[UNK]",
    "[CLS]",
    "[SEP]",
    "[MASK]",
    ".",
    "a",
    "berlin",
    "capital",
    "city",
    "france",
    "germany",
    "great",
    "is",
    "of",
    "paris",
    "the",
]


@pytest.fixture(scope="session")
def tiny_checkpoint(tmp_path_factory) -> Path:
    """A seeded, randomly-initialized masked LM saved locally; loads offline."""
    import torch
    from tokenizers import Tokenizer
    from tokenizers.models import WordPiece
    from transformers import BertConfig, BertForMaskedLM, PreTrainedTokenizerFast

    directory = tmp_path_factory.mktemp("checkpoint")
    vocab = {token: index for index, token in enumerate(CHECKPOINT_TOKENS)}
    tokenizer = PreTrainedTokenizerFast(
        tokenizer_object=Tokenizer(WordPiece(vocab, unk_token="[UNK]")),
        unk_token="[UNK]",
        mask_token="[MASK]",
        cls_token="[CLS]",
        sep_token="[SEP]",
        pad_token="[PAD]",
    )
    tokenizer.save_pretrained(directory)
    config = BertConfig(
        vocab_size=len(CHECKPOINT_TOKENS),
        hidden_size=32,
        num_hidden_layers=2,
        num_attention_heads=2,
        intermediate_size=64,
        max_position_embeddings=64,
    )
    torch.manual_seed(20240817)
    BertForMaskedLM(config).save_pretrained(directory)
    return directory


class UvicornThread:
    """Run an ASGI app on an ephemeral port in a background thread."""

    def __init__(self, app) -> None:
        self._config = uvicorn.Config(app, host="127.0.0.1", port=0, log_level="warning")
        self._server = uvicorn.Server(self._config)
        self._thread = threading.Thread(target=self._server.run, daemon=True)

    def __enter__(self) -> str:
        self._thread.start()
        deadline = time.monotonic() + 15
        while not self._server.started:
            if time.monotonic() > deadline:
                raise RuntimeError("server did not start in time")
            time.sleep(0.02)
        sock: socket.socket = self._server.servers[0].sockets[0]
        host, port = sock.getsockname()[:2]
        return f"http://{host}:{port}"

    def __exit__(self, *exc_info) -> None:
        self._server.should_exit = True
        self._thread.join(timeout=10)


@pytest.fixture
def serve():
    active: list[UvicornThread] = []

    def _serve(app) -> str:
        runner = UvicornThread(app)
        active.append(runner)
        return runner.__enter__()

    yield _serve
    for runner in active:
        runner.__exit__(None, None, None)
