"""Export command: embed a request file into a vector store + manifest.

    wic-export --requests requests.jsonl --model hash:768 --out vectors.bin --batch 32

Exit codes: 0 ok, 1 runtime failure (including malformed request lines,
listed with their line numbers), 2 usage error, 3 model load failure.
"""

from __future__ import annotations

import argparse
import json
import logging
import os
import sys
from typing import Sequence

from . import store
from .encoders import ModelLoadError, Request, load_encoder

logger = logging.getLogger("wicexport")

EXIT_OK = 0
EXIT_RUNTIME = 1
EXIT_USAGE = 2
EXIT_MODEL = 3


class RequestFileError(Exception):
    def __init__(self, problems: list[str]):
        super().__init__("malformed request lines: " + "; ".join(problems))
        self.problems = problems


def load_requests(path: str) -> list[Request]:
    """Parse the request file; any malformed line aborts the whole job."""
    requests = []
    problems = []
    with open(path, "r", encoding="utf-8") as fh:
        for lineno, line in enumerate(fh, start=1):
            line = line.strip()
            if not line:
                continue
            try:
                d = json.loads(line)
                request = Request(
                    request_id=str(d["request_id"]),
                    text=d["text"],
                    start=int(d["start"]),
                    end=int(d["end"]),
                )
                if not (0 <= request.start < request.end <= len(request.text)):
                    raise ValueError(f"span ({request.start}, {request.end}) out of bounds")
            except (KeyError, TypeError, ValueError, json.JSONDecodeError) as exc:
                problems.append(f"line {lineno}: {exc}")
                continue
            requests.append(request)
    if problems:
        raise RequestFileError(problems)
    return requests


def run_export(requests_path: str, model_id: str, out_path: str, batch_size: int) -> int:
    requests = load_requests(requests_path)
    encoder = load_encoder(model_id)

    existing: dict[bytes, object] = {}
    if os.path.exists(out_path):
        dim, existing = store.read_store(out_path)
        if dim != encoder.dim:
            raise store.StoreError(f"existing store dim {dim} != model dim {encoder.dim}")

    unique: dict[bytes, Request] = {}
    for request in requests:
        unique.setdefault(request.digest, request)
    missing = [unique[h] for h in sorted(unique) if h not in existing]
    logger.info(
        "%d requests, %d unique, %d already stored, %d to embed",
        len(requests),
        len(unique),
        len(unique) - len(missing),
        len(missing),
    )

    if missing:
        vectors = encoder.encode(missing, batch_size)
        merged = dict(existing)
        for request, vector in zip(missing, vectors):
            merged[request.digest] = vector
        store.write_store(out_path, encoder.dim, merged)
    elif not os.path.exists(out_path):
        store.write_store(out_path, encoder.dim, {})

    manifest_path = out_path + ".manifest.json"
    store.write_manifest(
        manifest_path,
        encoder.dim,
        {r.request_id: r.digest for r in requests},
        meta={
            "model": model_id,
            "batch_size": batch_size,
            "target_marking": "span wrapped in <t>...</t> before encoding (hash encoder ignores it)",
            "truncation": encoder.truncation_note,
            "determinism": encoder.determinism_note,
        },
    )
    logger.info("wrote %s and %s", out_path, manifest_path)
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="wic-export", description=__doc__)
    parser.add_argument("--requests", required=True, help="JSONL: request_id, text, start, end")
    parser.add_argument("--model", required=True, help="hash:DIM or a sentence-transformers model name/path")
    parser.add_argument("--out", required=True, help="vector store output path")
    parser.add_argument("--batch", type=int, default=32)
    return parser


def main(argv: Sequence[str] | None = None) -> int:
    logging.basicConfig(level=logging.INFO, format="%(levelname)s %(name)s: %(message)s")
    args = build_parser().parse_args(argv)
    if args.batch < 1:
        logger.error("batch size must be >= 1")
        return EXIT_USAGE
    try:
        return run_export(args.requests, args.model, args.out, args.batch)
    except ModelLoadError as exc:
        logger.error("%s", exc)
        return EXIT_MODEL
    except RequestFileError as exc:
        for problem in exc.problems:
            logger.error("%s", problem)
        return EXIT_RUNTIME
    except Exception as exc:
        logger.error("%s", exc)
        return EXIT_RUNTIME


if __name__ == "__main__":
    sys.exit(main())
