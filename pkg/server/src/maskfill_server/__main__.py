"""Run the fill-mask server: ``maskfill-server --model <checkpoint> [--port N]``."""

from __future__ import annotations

import argparse
import os

import uvicorn

from .app import ServerConfig, create_app


def main(argv: list[str] | None = None) -> None:
    parser = argparse.ArgumentParser(prog="maskfill-server", description=__doc__)
    parser.add_argument(
        "--model",
        default=os.environ.get("MASKFILL_MODEL", ""),
        help="pretrained checkpoint identifier or local path (env: MASKFILL_MODEL)",
    )
    parser.add_argument("--host", default=os.environ.get("MASKFILL_HOST", "127.0.0.1"))
    parser.add_argument("--port", type=int, default=int(os.environ.get("MASKFILL_PORT", "8765")))
    parser.add_argument("--max-batch", type=int, default=64, help="largest accepted /predict batch")
    parser.add_argument("--top-k-cap", type=int, default=50, help="upper bound on per-query top_k")
    args = parser.parse_args(argv)
    if not args.model:
        parser.error("--model (or MASKFILL_MODEL) is required")
    config = ServerConfig(
        model_id=args.model,
        host=args.host,
        port=args.port,
        max_batch_size=args.max_batch,
        top_k_cap=args.top_k_cap,
    )
    uvicorn.run(create_app(config), host=config.host, port=config.port)


if __name__ == "__main__":
    main()
