"""Run the service: ``python -m genservice`` or the ``genservice`` script."""

from __future__ import annotations

import argparse
import os

import uvicorn

from .app import create_app
from .service import GenerationService


def main() -> None:
    parser = argparse.ArgumentParser(prog="genservice", description=__doc__)
    parser.add_argument("--host", default=os.environ.get("GENSERVICE_HOST", "127.0.0.1"))
    parser.add_argument("--port", type=int, default=int(os.environ.get("GENSERVICE_PORT", "9100")))
    parser.add_argument(
        "--model-id",
        default=os.environ.get("GENSERVICE_MODEL", "builtin:tiny"),
        help="builtin:tiny or hf:<path-or-id>",
    )
    parser.add_argument("--dropout-p", type=float, default=0.1,
                        help="dropout probability of the builtin model")
    parser.add_argument("--queue-limit", type=int, default=4,
                        help="max in-flight requests before responding 429")
    args = parser.parse_args()

    service = GenerationService(
        model_id=args.model_id, dropout_p=args.dropout_p, queue_limit=args.queue_limit
    )
    app = create_app(service)
    uvicorn.run(app, host=args.host, port=args.port)


if __name__ == "__main__":
    main()
