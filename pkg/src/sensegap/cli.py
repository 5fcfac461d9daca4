"""Command-line entry points for the full workflow.

ingest -> stats -> sample -> embed -> select -> predict -> candidates ->
instances -> aggregate. Every command writes canonical (byte-stable) outputs
plus a run manifest with config hash, input hashes and seed; timestamps go to
a sidecar log only, so reruns with identical inputs are byte-identical.

Options may come from a declarative JSON config file (--config FILE, keys =
long option names with dashes or underscores); explicit flags override
config fields, which override built-in defaults. The effective config is
echoed into the output directory.

Exit codes: 0 ok, 1 runtime failure, 2 usage error.
"""

from __future__ import annotations

import argparse
import hashlib
import json
import logging
import os
import sys
from typing import Mapping, Sequence

import numpy as np

from . import annotation, corpus, detector, evaluation, inventory, representation, vectorstore
from .seeds import substream_seed

logger = logging.getLogger("sensegap")

EXIT_OK = 0
EXIT_RUNTIME = 1
EXIT_USAGE = 2


class UsageError(Exception):
    pass


def _require(args, *names: str) -> None:
    missing = []
    for name in names:
        if getattr(args, name.replace("-", "_"), None) in (None, [], ""):
            missing.append("--" + name)
    if missing:
        raise UsageError(f"missing required arguments: {', '.join(missing)}")


def _sha256_file(path: str) -> str:
    h = hashlib.sha256()
    with open(path, "rb") as fh:
        for chunk in iter(lambda: fh.read(1 << 16), b""):
            h.update(chunk)
    return h.hexdigest()


def _read_text(path: str) -> str:
    with open(path, "r", encoding="utf-8") as fh:
        return fh.read()


def _canonical_json(doc) -> str:
    return json.dumps(doc, ensure_ascii=False, sort_keys=True, indent=2) + "\n"


class RunContext:
    """Output directory plus provenance bookkeeping for one command."""

    def __init__(self, command: str, out_dir: str, seed: int | None, config: dict):
        self.command = command
        self.out_dir = out_dir
        self.seed = seed
        self.config = {k: v for k, v in config.items() if k != "func"}
        self.inputs: dict[str, str] = {}
        self.outputs: dict[str, str] = {}
        os.makedirs(out_dir, exist_ok=True)
        if self.config.get("config"):
            self.track_input(self.config["config"])
        handler = logging.FileHandler(os.path.join(out_dir, "run.log"), encoding="utf-8")
        handler.setFormatter(logging.Formatter("%(asctime)s %(levelname)s %(name)s: %(message)s"))
        logging.getLogger().addHandler(handler)
        self._log_handler = handler

    def track_input(self, path: str) -> str:
        if not os.path.exists(path):
            raise UsageError(f"input path does not exist: {path}")
        self.inputs[path] = _sha256_file(path)
        return path

    def write_text(self, name: str, text: str) -> str:
        path = os.path.join(self.out_dir, name)
        with open(path, "w", encoding="utf-8") as fh:
            fh.write(text)
        self.outputs[name] = hashlib.sha256(text.encode("utf-8")).hexdigest()
        return path

    def register_output(self, name: str) -> None:
        self.outputs[name] = _sha256_file(os.path.join(self.out_dir, name))

    def finalize(self) -> None:
        effective = dict(self.config)
        if self.seed is not None:
            effective["rng_seed"] = self.seed
        config_text = _canonical_json(effective)
        self.write_text("effective_config.json", config_text)
        manifest = {
            "command": self.command,
            "config_hash": hashlib.sha256(config_text.encode("utf-8")).hexdigest(),
            "inputs": self.inputs,
            "outputs": {k: v for k, v in sorted(self.outputs.items())},
            "rng_seed": self.seed,
        }
        self.write_text("run_manifest.json", _canonical_json(manifest))
        logging.getLogger().removeHandler(self._log_handler)
        self._log_handler.close()


# ---------------------------------------------------------------------------
# Shared helpers


def _load_inventory_file(ctx: RunContext, path: str) -> inventory.SenseInventory:
    ctx.track_input(path)
    return inventory.load_inventory(_read_text(path))


def _parse_provider(spec: str) -> representation.EmbeddingProvider:
    if spec == "mock":
        return representation.MockEmbeddingProvider()
    if spec.startswith("mock:"):
        return representation.MockEmbeddingProvider(dim=int(spec.split(":", 1)[1]))
    if spec.startswith("store:"):
        path = spec.split(":", 1)[1]
        dim, vectors = vectorstore.read_store(path)
        return representation.StoreBackedProvider(dim, vectors)
    raise UsageError(f"unknown provider spec {spec!r} (expected mock[:DIM] or store:PATH)")


def _parse_corpus_args(values: Sequence[str]) -> list[tuple[str, str]]:
    out = []
    for value in values:
        if "=" not in value:
            raise UsageError(f"--corpus wants TAG=PATH, got {value!r}")
        tag, path = value.split("=", 1)
        if tag not in ("modern", "historical"):
            raise UsageError(f"corpus tag must be modern or historical, got {tag!r}")
        out.append((tag, path))
    return out


def _load_lemmatizer(ctx: RunContext, path: str) -> corpus.DictLemmatizer:
    ctx.track_input(path)
    return corpus.DictLemmatizer.from_tsv(_read_text(path))


def _sense_vectors(
    inv: inventory.SenseInventory,
    headwords: Sequence[str],
    sense_mode: str,
    provider: representation.EmbeddingProvider,
    language_tag: str,
) -> dict[str, dict[str, np.ndarray]]:
    """headword -> sense_id -> vector, complete senses only, batched."""
    requests = []
    owners: list[tuple[str, str]] = []
    for headword in headwords:
        entry = inv.headwords.get(headword)
        if entry is None:
            continue
        for sense in entry.senses:
            reqs = representation.build_sense_requests(sense, headword, sense_mode, language_tag)
            if reqs is None:
                continue
            for r in reqs:
                requests.append(r)
                owners.append((headword, sense.sense_id))
    vectors = provider.embed_batch(requests) if requests else []
    grouped: dict[str, dict[str, list[np.ndarray]]] = {}
    for (headword, sense_id), vec in zip(owners, vectors):
        grouped.setdefault(headword, {}).setdefault(sense_id, []).append(vec)
    return {
        hw: {sid: representation.mean_vector(vs) for sid, vs in senses.items()}
        for hw, senses in grouped.items()
    }


def _usage_vectors(
    usages: Sequence[corpus.Usage],
    usage_mode: str,
    provider: representation.EmbeddingProvider,
) -> dict[str, np.ndarray]:
    requests = [representation.build_usage_request(u, usage_mode) for u in usages]
    vectors = provider.embed_batch(requests) if requests else []
    return {u.usage_id: v for u, v in zip(usages, vectors)}


def _similarity_table(
    usages: Sequence[corpus.Usage],
    usage_vecs: Mapping[str, np.ndarray],
    sense_vecs: Mapping[str, Mapping[str, np.ndarray]],
    similarity: str,
) -> dict[str, dict[str, float]]:
    sim = detector.similarity_fn(similarity)
    table: dict[str, dict[str, float]] = {}
    for u in usages:
        row = {}
        for sense_id, vec in sense_vecs.get(u.headword, {}).items():
            row[sense_id] = sim(usage_vecs[u.usage_id], vec)
        table[u.usage_id] = row
    return table


# ---------------------------------------------------------------------------
# Commands


def cmd_ingest(args) -> int:
    _require(args, "dump", "schema")
    if args.schema not in ("wordnet", "so"):
        raise UsageError(f"schema must be wordnet or so, got {args.schema!r}")
    ctx = RunContext("ingest", args.out, None, vars(args))
    try:
        ctx.track_input(args.dump)
        raw = _read_text(args.dump)
        if args.schema == "wordnet":
            inv = inventory.parse_wordnet_dump(raw)
        else:
            inv = inventory.parse_so_dump(raw, include_sub_entries=args.include_sub_entries)
        ctx.write_text("inventory.jsonl", inventory.serialize_inventory(inv))
        ctx.write_text("stats.json", inventory.write_stats(inventory.inventory_stats(inv)))
        logger.info("ingested %d headwords from %s", len(inv), args.dump)
        return EXIT_OK
    finally:
        ctx.finalize()


def cmd_stats(args) -> int:
    _require(args, "inventory")
    ctx = RunContext("stats", args.out, None, vars(args))
    try:
        inv = _load_inventory_file(ctx, args.inventory)
        text = inventory.write_stats(inventory.inventory_stats(inv))
        ctx.write_text("stats.json", text)
        sys.stdout.write(text)
        return EXIT_OK
    finally:
        ctx.finalize()


def cmd_sample(args) -> int:
    _require(args, "inventory", "corpus", "lemmatizer")
    ctx = RunContext("sample", args.out, args.seed, vars(args))
    try:
        inv = _load_inventory_file(ctx, args.inventory)
        lemmatizer = _load_lemmatizer(ctx, args.lemmatizer)
        combined: list[corpus.Usage] = []
        meta: dict = {"corpora": {}, "rng_seed": args.seed}
        for tag, path in _parse_corpus_args(args.corpus):
            ctx.track_input(path)
            with open(path, "r", encoding="utf-8") as fh:
                sentences = corpus.read_sentences(fh)
                found = list(
                    corpus.find_usages(sentences, inv, lemmatizer, corpus_tag=tag, language_tag=args.language)
                )
            sample = corpus.sample_random_phase1(
                found,
                inv.headwords,
                rng_seed=substream_seed(args.seed, "sample", tag),
                headword_pool=args.pool,
                stop_at_headwords_with_usage=args.target,
                max_usages_per_headword=args.max_per_headword,
            )
            combined.extend(sample.usages)
            meta["corpora"][tag] = {
                "usages_found": len(found),
                "usages_kept": len(sample.usages),
                "headwords_with_usage": len(sample.headwords_with_usage),
                "shortfall": sample.shortfall,
            }
            logger.info("corpus %s: %d usages found, %d kept", tag, len(found), len(sample.usages))
        combined.sort(key=lambda u: (u.corpus_tag, u.usage_id))
        ctx.write_text("sample.jsonl", corpus.write_usages(combined))
        ctx.write_text("sample_meta.json", _canonical_json(meta))
        return EXIT_OK
    finally:
        ctx.finalize()


def cmd_embed(args) -> int:
    _require(args, "inventory", "usages", "model")
    ctx = RunContext("embed", args.out, None, vars(args))
    try:
        inv = _load_inventory_file(ctx, args.inventory)
        ctx.track_input(args.usages)
        usages = corpus.load_usages(_read_text(args.usages))
        config = representation.ModelConfig.from_identifier(args.model)
        representation.validate_model_config(config, inv)

        requests = [representation.build_usage_request(u, config.usage_mode) for u in usages]
        for headword in sorted({u.headword for u in usages}):
            entry = inv.headwords.get(headword)
            if entry is None:
                continue
            for sense in entry.senses:
                reqs = representation.build_sense_requests(sense, headword, config.sense_mode, args.language)
                if reqs:
                    requests.extend(reqs)
        request_lines = "".join(
            json.dumps(r.to_dict(), ensure_ascii=False, sort_keys=True, separators=(",", ":")) + "\n"
            for r in requests
        )
        ctx.write_text("requests.jsonl", request_lines)
        logger.info("built %d embedding requests", len(requests))

        if not args.requests_only:
            provider = _parse_provider(args.provider)
            vectors = provider.embed_batch(requests)
            records = {r.content_hash: np.asarray(v, dtype=np.float32) for r, v in zip(requests, vectors)}
            store_path = os.path.join(args.out, "vectors.bin")
            vectorstore.write_store(store_path, provider.dim(), records)
            ctx.register_output("vectors.bin")
            manifest_path = os.path.join(args.out, "vectors_manifest.json")
            vectorstore.write_manifest(
                manifest_path,
                provider.dim(),
                {r.request_id: r.content_hash for r in requests},
                meta={"provider": args.provider, "model": args.model},
            )
            ctx.register_output("vectors_manifest.json")
        return EXIT_OK
    finally:
        ctx.finalize()


def cmd_select(args) -> int:
    _require(args, "inventory", "gold", "usages", "models")
    ctx = RunContext("select", args.out, args.seed, vars(args))
    try:
        inv = _load_inventory_file(ctx, args.inventory)
        ctx.track_input(args.gold)
        gold = evaluation.GoldAssignment.from_records(
            json.loads(line) for line in _read_text(args.gold).splitlines() if line.strip()
        )
        gold.validate_against(inv)
        ctx.track_input(args.usages)
        usages = corpus.load_usages(_read_text(args.usages))
        usages = [u for u in usages if u.usage_id in gold.usages]

        provider = representation.CachingProvider(_parse_provider(args.provider))
        eval_config = evaluation.EvalConfig(
            beta=args.beta,
            rounds=args.rounds,
            folds=args.folds,
            rng_seed=args.seed,
            masking_kind=args.masking_kind,
        )
        model_ids = [m.strip() for m in args.models.split(",") if m.strip()]
        if not model_ids:
            raise UsageError("no models requested")
        reports = []
        for ident in model_ids:
            config = representation.ModelConfig.from_identifier(ident)
            representation.validate_model_config(config, inv)
            headwords = sorted({u.headword for u in usages})
            sense_vecs = _sense_vectors(inv, headwords, config.sense_mode, provider, args.language)
            usage_vecs = _usage_vectors(usages, config.usage_mode, provider)
            table = _similarity_table(usages, usage_vecs, sense_vecs, config.similarity)
            report = evaluation.run_cross_validation(table, gold, inv, eval_config, model_identifier=ident)
            reports.append(report)
            ctx.write_text(f"cv_{ident}.json", report.to_json())
            round_tables = "\n".join(
                evaluation.render_round_table(r, model_identifier=ident) for r in report.rounds
            )
            ctx.write_text(f"cv_{ident}.txt", round_tables)
            logger.info("model %s: mean test F = %.3f", ident, report.mean_test_f)
        ctx.write_text("grid.txt", evaluation.render_grid(reports))
        grid_doc = {
            r.model_identifier: {
                "mean_test_f": r.mean_test_f,
                "std_test_f": r.std_test_f,
                "random_mean_test_f": r.baseline_mean_test_f("random_test"),
                "frequency_mean_test_f": r.baseline_mean_test_f("frequency_test"),
            }
            for r in reports
        }
        best = max(reports, key=lambda r: (r.mean_test_f, r.model_identifier))
        grid_doc["best"] = best.model_identifier
        ctx.write_text("grid.json", _canonical_json(grid_doc))
        ctx.write_text("pr_curves.csv", evaluation.write_pr_curves(reports))
        return EXIT_OK
    finally:
        ctx.finalize()


def cmd_predict(args) -> int:
    _require(args, "inventory", "corpus", "lemmatizer", "model", "threshold")
    ctx = RunContext("predict", args.out, args.seed, vars(args))
    try:
        inv = _load_inventory_file(ctx, args.inventory)
        lemmatizer = _load_lemmatizer(ctx, args.lemmatizer)
        config = representation.ModelConfig.from_identifier(args.model, threshold=args.threshold)
        representation.validate_model_config(config, inv)
        provider = representation.CachingProvider(_parse_provider(args.provider))

        all_usages: list[corpus.Usage] = []
        for tag, path in _parse_corpus_args(args.corpus):
            ctx.track_input(path)
            with open(path, "r", encoding="utf-8") as fh:
                sentences = corpus.read_sentences(fh)
                all_usages.extend(
                    corpus.find_usages(sentences, inv, lemmatizer, corpus_tag=tag, language_tag=args.language)
                )
        all_usages.sort(key=lambda u: (u.corpus_tag, u.usage_id))
        logger.info(
            "prediction sample: %d usages, %d headwords",
            len(all_usages),
            len({u.headword for u in all_usages}),
        )

        headwords = sorted({u.headword for u in all_usages})
        sense_vecs = _sense_vectors(inv, headwords, config.sense_mode, provider, args.language)
        usage_vecs = _usage_vectors(all_usages, config.usage_mode, provider)
        preds = [
            detector.predict_usage(
                u.usage_id,
                u.headword,
                usage_vecs[u.usage_id],
                sense_vecs.get(u.headword, {}),
                config.similarity,
                config.threshold,
            )
            for u in all_usages
        ]
        ctx.write_text("predictions.jsonl", detector.write_predictions(preds))

        kind = inventory.KIND_GLOSS if config.sense_mode.startswith("G") else inventory.KIND_EXAMPLES
        view = inventory.complete_senses(inv, kind)
        candidates = detector.rank_and_select(
            preds, view, max_per_headword=args.max_per_headword, sample_size=args.sample_size
        )
        usage_by_id = {u.usage_id: u for u in all_usages}
        ctx.write_text("candidates.jsonl", _candidate_lines(candidates, usage_by_id, inv))
        logger.info("selected %d candidates", len(candidates))

        candidate_usages = [usage_by_id[p.usage_id] for p in candidates]
        instances = annotation.generate_instances(candidate_usages, inv, primary_only=args.primary_only)
        instances = annotation.shuffle_instances(instances, substream_seed(args.seed, "instances"))
        ctx.write_text("instances.jsonl", annotation.write_instances(instances))
        logger.info("generated %d annotation instances", len(instances))
        return EXIT_OK
    finally:
        ctx.finalize()


def _candidate_lines(
    candidates: Sequence[detector.PredictionRecord],
    usage_by_id: Mapping[str, corpus.Usage],
    inv: inventory.SenseInventory,
) -> str:
    lines = []
    for p in candidates:
        u = usage_by_id[p.usage_id]
        entry = inv.headwords.get(p.headword)
        glosses = [s.effective_gloss for s in entry.senses if s.effective_gloss] if entry else []
        d = p.to_dict()
        d.update({"sentence": u.sentence, "start": u.start, "end": u.end, "eligible_glosses": glosses})
        lines.append(json.dumps(d, ensure_ascii=False, sort_keys=True, separators=(",", ":")))
    return "".join(line + "\n" for line in lines)


def cmd_candidates(args) -> int:
    _require(args, "inventory", "predictions", "sense_mode")
    ctx = RunContext("candidates", args.out, None, vars(args))
    try:
        inv = _load_inventory_file(ctx, args.inventory)
        ctx.track_input(args.predictions)
        preds = detector.load_predictions(_read_text(args.predictions))
        kind = inventory.KIND_GLOSS if args.sense_mode.startswith("G") else inventory.KIND_EXAMPLES
        view = inventory.complete_senses(inv, kind)
        selected = detector.rank_and_select(
            preds, view, max_per_headword=args.max_per_headword, sample_size=args.sample_size
        )
        ctx.write_text("candidates.jsonl", detector.write_predictions(selected))
        return EXIT_OK
    finally:
        ctx.finalize()


def cmd_instances(args) -> int:
    _require(args, "inventory", "usages")
    ctx = RunContext("instances", args.out, args.seed, vars(args))
    try:
        inv = _load_inventory_file(ctx, args.inventory)
        ctx.track_input(args.usages)
        usages = corpus.load_usages(_read_text(args.usages))
        instances = annotation.generate_instances(usages, inv, primary_only=args.primary_only)
        instances = annotation.shuffle_instances(instances, substream_seed(args.seed, "instances"))
        ctx.write_text("instances.jsonl", annotation.write_instances(instances))
        return EXIT_OK
    finally:
        ctx.finalize()


def cmd_aggregate(args) -> int:
    _require(args, "instances", "judgments")
    ctx = RunContext("aggregate", args.out, None, vars(args))
    try:
        ctx.track_input(args.instances)
        instances = annotation.load_instances(_read_text(args.instances))
        known_ids = {i.instance_id for i in instances}
        judgments: list[annotation.Judgment] = []
        unknown: list[str] = []
        for path in args.judgments:
            ctx.track_input(path)
            fmt = "tsv" if path.endswith(".tsv") else "jsonl"
            loaded, problems = annotation.load_judgments(_read_text(path), fmt=fmt)
            for problem in problems:
                logger.warning("%s: %s", path, problem)
            for j in loaded:
                if j.instance_id not in known_ids:
                    unknown.append(j.instance_id)
                    continue
                judgments.append(j)
        if unknown:
            logger.warning("%d judgments referenced unknown instances: %s", len(unknown), sorted(set(unknown)))

        report: dict = {"overall": annotation.summarize(instances, judgments).to_dict(), "by_corpus": {}}
        for tag in sorted({i.corpus_tag for i in instances if i.corpus_tag}):
            report["by_corpus"][tag] = annotation.summarize(instances, judgments, corpus_tag=tag).to_dict()
        report["unknown_instance_ids"] = sorted(set(unknown))
        if judgments:
            try:
                report["agreement"] = annotation.agreement_report(judgments, instances)
            except annotation.AnnotationError as exc:
                logger.warning("agreement not computable: %s", exc)
                report["agreement"] = None
        ctx.write_text("aggregate_report.json", _canonical_json(report))

        gold = annotation.build_gold_assignment(instances, judgments)
        gold_lines = "".join(
            json.dumps(r, ensure_ascii=False, sort_keys=True, separators=(",", ":")) + "\n"
            for r in gold.to_records()
        )
        ctx.write_text("gold.jsonl", gold_lines)
        return EXIT_OK
    finally:
        ctx.finalize()


# ---------------------------------------------------------------------------
# Parser


def build_parser(suppress_defaults: bool = False) -> argparse.ArgumentParser:
    """With suppress_defaults, the parsed namespace only contains options the
    user actually typed; used to decide what a config file may fill in."""

    def arg(p, *names, **kw):
        if suppress_defaults:
            kw["default"] = argparse.SUPPRESS
        p.add_argument(*names, **kw)

    parser = argparse.ArgumentParser(prog="sensegap", description=__doc__)
    sub = parser.add_subparsers(dest="command", required=True)

    def subparser(name, func, help):
        p = sub.add_parser(name, help=help)
        arg(p, "--config", help="JSON file supplying defaults for any option")
        arg(p, "--out", help="output directory")
        p.set_defaults(func=func)
        return p

    p = subparser("ingest", cmd_ingest, "parse a dictionary dump into the canonical inventory format")
    arg(p, "--dump")
    arg(p, "--schema", choices=["wordnet", "so"])
    arg(p, "--include-sub-entries", action="store_true",
        help="ingest nested SO sub-entries as additional senses")

    p = subparser("stats", cmd_stats, "descriptive statistics of an inventory")
    arg(p, "--inventory")

    p = subparser("sample", cmd_sample, "random phase-one usage sample from corpora")
    arg(p, "--inventory")
    arg(p, "--corpus", action="append", metavar="TAG=PATH")
    arg(p, "--lemmatizer", help="TSV form->lemma table")
    arg(p, "--language", default="en")
    arg(p, "--seed", type=int, default=0)
    arg(p, "--pool", type=int, default=3000)
    arg(p, "--target", type=int, default=150)
    arg(p, "--max-per-headword", type=int, default=5)

    p = subparser("embed", cmd_embed, "build embedding requests and optionally a vector store")
    arg(p, "--inventory")
    arg(p, "--usages")
    arg(p, "--model", help="model identifier, e.g. G3_COS or E4_SUB_SPR")
    arg(p, "--provider", default="mock")
    arg(p, "--language", default="en")
    arg(p, "--requests-only", action="store_true", help="only write requests.jsonl (for an external embedder)")

    p = subparser("select", cmd_select, "cross-validated model selection over a config grid")
    arg(p, "--inventory")
    arg(p, "--gold")
    arg(p, "--usages")
    arg(p, "--models", help="comma-separated identifiers")
    arg(p, "--provider", default="mock")
    arg(p, "--language", default="en")
    arg(p, "--beta", type=float, default=0.3)
    arg(p, "--rounds", type=int, default=10)
    arg(p, "--folds", type=int, default=5)
    arg(p, "--masking-kind", default=inventory.KIND_BOTH, choices=[
        inventory.KIND_GLOSS, inventory.KIND_EXAMPLES, inventory.KIND_BOTH])
    arg(p, "--seed", type=int, default=0)

    p = subparser("predict", cmd_predict, "end-to-end prediction and candidate export")
    arg(p, "--inventory")
    arg(p, "--corpus", action="append", metavar="TAG=PATH")
    arg(p, "--lemmatizer")
    arg(p, "--model")
    arg(p, "--threshold", type=float)
    arg(p, "--provider", default="mock")
    arg(p, "--language", default="en")
    arg(p, "--sample-size", type=int, default=1000)
    arg(p, "--max-per-headword", type=int, default=8)
    arg(p, "--primary-only", action="store_true")
    arg(p, "--seed", type=int, default=0)

    p = subparser("candidates", cmd_candidates, "rank and select candidates from existing predictions")
    arg(p, "--inventory")
    arg(p, "--predictions")
    arg(p, "--sense-mode")
    arg(p, "--sample-size", type=int, default=1000)
    arg(p, "--max-per-headword", type=int, default=8)

    p = subparser("instances", cmd_instances, "annotation instances for a usage file")
    arg(p, "--inventory")
    arg(p, "--usages")
    arg(p, "--primary-only", action="store_true")
    arg(p, "--seed", type=int, default=0)

    p = subparser("aggregate", cmd_aggregate, "aggregate judgments into summary, agreement and gold files")
    arg(p, "--instances")
    arg(p, "--judgments", action="append")

    return parser


def _merge_config_file(args, argv: Sequence[str]) -> None:
    """Fill namespace fields from the config file unless given on the line."""
    if not getattr(args, "config", None):
        return
    if not os.path.exists(args.config):
        raise UsageError(f"config file does not exist: {args.config}")
    with open(args.config, "r", encoding="utf-8") as fh:
        doc = json.load(fh)
    if not isinstance(doc, dict):
        raise UsageError("config file must hold a JSON object")
    explicit = build_parser(suppress_defaults=True).parse_args(argv)
    for key, value in doc.items():
        dest = key.replace("-", "_")
        if dest in ("command", "func", "config"):
            raise UsageError(f"config field {key!r} is not allowed")
        if not hasattr(args, dest):
            raise UsageError(f"unknown config field {key!r} for command {args.command!r}")
        if not hasattr(explicit, dest):
            setattr(args, dest, value)


def main(argv: Sequence[str] | None = None) -> int:
    logging.basicConfig(level=logging.INFO, format="%(levelname)s %(name)s: %(message)s")
    argv = list(sys.argv[1:] if argv is None else argv)
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        _merge_config_file(args, argv)
        _require(args, "out")
        return args.func(args)
    except UsageError as exc:
        logger.error("%s", exc)
        return EXIT_USAGE
    except Exception as exc:
        logger.error("%s", exc)
        return EXIT_RUNTIME


if __name__ == "__main__":
    sys.exit(main())
