"""Command-line entry point.

    newsver verify ARTICLE.json [flags]      one item -> verdict record on stdout
    newsver batch ITEMS.jsonl [flags]        many items -> record-per-line + run manifest
    newsver export-distill [flags]           verdicts + dataset -> SLM training records
    newsver eval [flags]                     predictions + dataset -> metrics report

Exit codes for verify: 0 REAL, 1 FAKE, 2 UNCERTAIN, 3 config error,
4 provider error, 5 input/schema error.
"""

import argparse
import json
import logging
import os
import sys
import time
from concurrent.futures import ThreadPoolExecutor
from pathlib import Path

from .config import (
    PipelineConfig,
    config_to_dict,
    load_config,
    validate_config,
    with_overrides,
)
from .errors import ConfigError, ProviderError, SchemaError
from .evalmetrics import (
    compute_classification_metrics,
    compute_las,
    compute_rev,
    compute_utility,
    load_dataset,
)
from .models import Label, NewsItem, Persona, Verdict
from .pipeline import verify_item
from .preprocess import clean_text
from .providers.base import ProviderSet
from .providers.credibility import CredibilityTable, load_credibility_table
from .providers.live import HttpLlmBackend, HttpSearchBackend, HttpVisionBackend, TokenBucket
from .providers.mock import TokenOverlapSimilarity
from .providers.replay import ReplayCache
from .verdict import parse_output, render_output

logger = logging.getLogger(__name__)

VERDICT_EXIT_CODES = {Verdict.REAL: 0, Verdict.FAKE: 1, Verdict.UNCERTAIN: 2}
EXIT_CONFIG_ERROR = 3
EXIT_PROVIDER_ERROR = 4
EXIT_INPUT_ERROR = 5


def _add_common_flags(parser: argparse.ArgumentParser) -> None:
    parser.add_argument("--config", metavar="PATH", help="JSON configuration file")
    parser.add_argument("--replay", metavar="DIR", help="serve provider responses from this cache")
    parser.add_argument("--record", metavar="DIR", help="record provider responses into this cache")
    parser.add_argument("--credibility", metavar="PATH", help="domain credibility table (TSV)")
    parser.add_argument("--rounds", type=int, metavar="N", help="override questioning rounds")
    parser.add_argument("--personas", metavar="LIST", help="comma-separated persona roster")
    parser.add_argument("--no-pkm", action="store_true", help="disable persuasion analysis")
    parser.add_argument("--no-image", action="store_true", help="disable the image path")
    parser.add_argument("--no-kg", action="store_true", help="disable triplet retrieval")
    parser.add_argument("--single-persona", action="store_true", help="first persona only")
    parser.add_argument("--evidence-only", action="store_true", help="evidence variant")
    parser.add_argument("--agentic-only", action="store_true", help="agentic variant")
    parser.add_argument("--pkm-only", action="store_true", help="persuasion variant")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="newsver", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)

    p_verify = sub.add_parser("verify", help="verify one article")
    p_verify.add_argument("article", help="article JSON file")
    _add_common_flags(p_verify)

    p_batch = sub.add_parser("batch", help="verify a JSONL batch")
    p_batch.add_argument("input", help="JSONL file of articles")
    p_batch.add_argument("--output", metavar="PATH", help="verdict lines (default: stdout)")
    p_batch.add_argument("--manifest", metavar="PATH", help="run manifest path")
    p_batch.add_argument("--jobs", type=int, default=1, metavar="N", help="parallel items")
    _add_common_flags(p_batch)

    p_export = sub.add_parser("export-distill", help="build SLM training records")
    p_export.add_argument("--verdicts", required=True, metavar="PATH", help="verdict JSONL")
    p_export.add_argument("--dataset", required=True, metavar="PATH", help="labeled dataset")
    p_export.add_argument("--format", default="delimited", metavar="FMT",
                          help="dataset format: delimited | record-per-line")
    p_export.add_argument("--output", metavar="PATH", help="training records (default: stdout)")
    p_export.add_argument("--keep-uncertain-with-gold", action="store_true",
                          help="keep UNCERTAIN items, labeled by gold")

    p_eval = sub.add_parser("eval", help="score predictions against a dataset")
    p_eval.add_argument("--preds", required=True, metavar="PATH", help="prediction JSONL")
    p_eval.add_argument("--dataset", required=True, metavar="PATH", help="labeled dataset")
    p_eval.add_argument("--format", default="delimited", metavar="FMT",
                        help="dataset format: delimited | record-per-line")
    p_eval.add_argument("--macro", action="store_true", help="macro-average the metrics")
    p_eval.add_argument("--paired", metavar="PATH",
                        help="without-justification prediction JSONL for rationale metrics")
    return parser


def build_pipeline_config(args) -> PipelineConfig:
    config = load_config(args.config) if args.config else validate_config({})
    overrides = {}
    if args.rounds is not None:
        overrides["tau"] = args.rounds
    if args.personas:
        try:
            overrides["persona_order"] = tuple(
                Persona(p.strip().upper()) for p in args.personas.split(",") if p.strip()
            )
        except ValueError as exc:
            raise ConfigError(f"--personas: {exc}") from exc
    if args.no_pkm:
        overrides["disable_pkm"] = True
    if args.no_image:
        overrides["disable_image"] = True
    if args.no_kg:
        overrides["disable_kg"] = True
    if args.single_persona:
        overrides["single_persona"] = True
    variants = [
        name
        for name, flag in (
            ("evidence-only", args.evidence_only),
            ("agentic-only", args.agentic_only),
            ("pkm-only", args.pkm_only),
        )
        if flag
    ]
    if len(variants) > 1:
        raise ConfigError(f"at most one variant flag allowed, got {variants}")
    if variants:
        overrides["variant"] = variants[0]
    return with_overrides(config, **overrides) if overrides else config


def build_providers(args) -> ProviderSet:
    if args.replay and args.record:
        raise ConfigError("--replay and --record are mutually exclusive")
    credibility = (
        load_credibility_table(args.credibility) if args.credibility else CredibilityTable({})
    )
    if args.replay:
        return ProviderSet(
            credibility=credibility, cache=ReplayCache(args.replay), mode="replay"
        )
    cache = ReplayCache(args.record) if args.record else None
    # one token bucket shared by every live backend across worker threads
    rate = os.environ.get("NEWSVER_RATE_LIMIT")
    limiter = TokenBucket(float(rate)) if rate else None
    return ProviderSet(
        llm=HttpLlmBackend(limiter=limiter),
        search=HttpSearchBackend(limiter=limiter),
        vision=HttpVisionBackend(limiter=limiter),
        similarity=TokenOverlapSimilarity(),
        credibility=credibility,
        cache=cache,
        mode="record" if cache else "live",
    )


def read_article(raw: dict) -> NewsItem:
    missing = [k for k in ("id", "headline", "body") if not str(raw.get(k) or "").strip()]
    if missing:
        raise SchemaError(f"article missing field(s): {missing}")
    gold = raw.get("gold_label")
    return NewsItem(
        id=str(raw["id"]),
        headline=str(raw["headline"]),
        body=str(raw["body"]),
        image=str(raw["image"]) if raw.get("image") else None,
        gold_label=Label(str(gold).upper()) if gold else None,
    )


def cmd_verify(args) -> int:
    config = build_pipeline_config(args)
    providers = build_providers(args)
    try:
        raw = json.loads(Path(args.article).read_text(encoding="utf-8"))
    except (OSError, json.JSONDecodeError) as exc:
        raise SchemaError(f"cannot read article {args.article}: {exc}") from exc
    record = verify_item(read_article(raw), config, providers)
    print(render_output(record))
    return VERDICT_EXIT_CODES[record.verdict]


def cmd_batch(args) -> int:
    config = build_pipeline_config(args)
    providers = build_providers(args)
    started = time.monotonic()

    articles = []
    for lineno, line in enumerate(Path(args.input).read_text(encoding="utf-8").splitlines(), 1):
        if not line.strip():
            continue
        try:
            articles.append(read_article(json.loads(line)))
        except (json.JSONDecodeError, SchemaError, ValueError) as exc:
            raise SchemaError(f"{args.input}: line {lineno}: {exc}") from exc

    def process(news: NewsItem):
        try:
            return render_output(verify_item(news, config, providers)), None
        except Exception as exc:  # recorded per item; the batch keeps going
            logger.warning("item %s failed: %s", news.id, exc)
            return None, f"{type(exc).__name__}: {exc}"

    jobs = max(1, args.jobs)
    if jobs == 1:
        results = [process(news) for news in articles]
    else:
        with ThreadPoolExecutor(max_workers=jobs) as pool:
            results = list(pool.map(process, articles))

    out_handle = open(args.output, "w", encoding="utf-8") if args.output else sys.stdout
    manifest_items = []
    succeeded = 0
    line_no = 0
    try:
        for news, (rendered, error) in zip(articles, results):
            item = {"id": news.id}
            if rendered is not None:
                out_handle.write(rendered + "\n")
                line_no += 1
                succeeded += 1
                item["status"] = "ok"
                item["verdict"] = json.loads(rendered)["verdict"]
                item["line"] = line_no
            else:
                item["status"] = "error"
                item["error"] = error
            manifest_items.append(item)
    finally:
        if args.output:
            out_handle.close()

    manifest = {
        "provider_mode": providers.mode,
        "config": config_to_dict(config),
        "input": args.input,
        "output": args.output,
        "items": manifest_items,
        "provider_calls": providers.call_counts(),
        "timing_seconds": round(time.monotonic() - started, 3),
    }
    manifest_path = args.manifest or (
        f"{args.output}.manifest.json" if args.output else "run_manifest.json"
    )
    Path(manifest_path).write_text(
        json.dumps(manifest, indent=2, ensure_ascii=False) + "\n", encoding="utf-8"
    )
    return 0 if succeeded else 1


def cmd_export_distill(args) -> int:
    dataset = {r.id: r for r in load_dataset(args.dataset, args.format)}
    lines = Path(args.verdicts).read_text(encoding="utf-8").splitlines()
    records = []
    for lineno, line in enumerate(lines, start=1):
        if not line.strip():
            continue
        try:
            records.append(parse_output(line))
        except (json.JSONDecodeError, KeyError, ValueError) as exc:
            raise SchemaError(f"{args.verdicts}: line {lineno}: {exc}") from exc

    unknown = [r.item_id for r in records if r.item_id not in dataset]
    if unknown:
        raise SchemaError(f"verdict ids missing from dataset: {unknown}")

    out_handle = open(args.output, "w", encoding="utf-8") if args.output else sys.stdout
    exported = 0
    try:
        for record in records:
            if record.verdict == Verdict.UNCERTAIN:
                if not args.keep_uncertain_with_gold:
                    continue
                label = dataset[record.item_id].label.value
            else:
                label = record.verdict.value
            source = dataset[record.item_id]
            out_handle.write(
                json.dumps(
                    {
                        "id": record.item_id,
                        "headline": source.headline,
                        "body_preprocessed": clean_text(source.body),
                        "image_summary": record.image_summary,
                        "justification": record.justification,
                        "pseudo_label": label,
                    },
                    ensure_ascii=False,
                    separators=(",", ":"),
                )
                + "\n"
            )
            exported += 1
    finally:
        if args.output:
            out_handle.close()
    logger.info("exported %d training records", exported)
    return 0


def _load_predictions(path: str) -> dict[str, dict]:
    preds = {}
    for lineno, line in enumerate(Path(path).read_text(encoding="utf-8").splitlines(), 1):
        if not line.strip():
            continue
        try:
            raw = json.loads(line)
            pred = Label(str(raw["pred"]).upper())
        except (json.JSONDecodeError, KeyError) as exc:
            raise SchemaError(f"{path}: line {lineno}: {exc}") from exc
        except ValueError as exc:
            raise SchemaError(
                f"{path}: line {lineno}: predictions must be binary REAL/FAKE"
            ) from exc
        preds[str(raw["id"])] = {"pred": pred, "logprob": raw.get("logprob_true_label")}
    return preds


def _aligned(preds: dict, dataset: list) -> tuple[list, list, list]:
    ids = [r.id for r in dataset if r.id in preds]
    if not ids:
        raise SchemaError("no prediction ids overlap the dataset")
    labels = {r.id: r.label for r in dataset}
    return (
        [preds[i]["pred"] for i in ids],
        [labels[i] for i in ids],
        ids,
    )


def cmd_eval(args) -> int:
    dataset = load_dataset(args.dataset, args.format)
    preds_with = _load_predictions(args.preds)
    p, y, ids = _aligned(preds_with, dataset)
    average = "macro" if args.macro else "binary"
    report = compute_classification_metrics(p, y, average=average)
    output = {
        "n": report.n,
        "acc": round(report.acc, 6),
        "f1": round(report.f1, 6),
        "precision": round(report.precision, 6),
        "recall": round(report.recall, 6),
    }

    if args.paired:
        preds_without = _load_predictions(args.paired)
        missing = [i for i in ids if i not in preds_without]
        if missing:
            raise SchemaError(f"paired predictions missing ids: {missing[:5]}")
        p2 = [preds_without[i]["pred"] for i in ids]
        report_without = compute_classification_metrics(p2, y, average=average)
        correct_with = [int(a == b) for a, b in zip(p, y)]
        correct_without = [int(a == b) for a, b in zip(p2, y)]
        ll_with = [preds_with[i]["logprob"] for i in ids]
        ll_without = [preds_without[i]["logprob"] for i in ids]
        if any(v is None for v in ll_with + ll_without):
            raise SchemaError("paired rationale metrics require logprob_true_label in both files")
        output["rationale"] = {
            "utility": {k: round(v, 6) for k, v in compute_utility(report, report_without).items()},
            "las": round(compute_las(correct_with, correct_without), 6),
            "rev": round(compute_rev(ll_with, ll_without), 6),
        }
    print(json.dumps(output, ensure_ascii=False))
    return 0


def main(argv: list[str] | None = None) -> int:
    logging.basicConfig(level=logging.WARNING, stream=sys.stderr)
    parser = build_parser()
    args = parser.parse_args(argv)
    handlers = {
        "verify": cmd_verify,
        "batch": cmd_batch,
        "export-distill": cmd_export_distill,
        "eval": cmd_eval,
    }
    try:
        return handlers[args.command](args)
    except ConfigError as exc:
        print(f"configuration error: {exc}", file=sys.stderr)
        return EXIT_CONFIG_ERROR
    except ProviderError as exc:
        print(f"provider error: {exc}", file=sys.stderr)
        return EXIT_PROVIDER_ERROR
    except (SchemaError, OSError, ValueError) as exc:
        print(f"input error: {exc}", file=sys.stderr)
        return EXIT_INPUT_ERROR


if __name__ == "__main__":
    sys.exit(main())
