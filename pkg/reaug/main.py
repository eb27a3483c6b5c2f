import argparse
import filecmp
import json
import sys
from pathlib import Path
from typing import Dict, List, Optional, Sequence

from .augment import AugmentPolicy, combine, load_samples, run_augment, save_run, sole, subset
from .config import RunConfig, load_config
from .datasets import compute_stats, export, flatten, load_scierc, load_spert
from .datasets.types import PseudoSample, Sample
from .errors import ConfigError, CorpusFormatError, ReaugError, ReplayMismatchError
from .fidelity import EmbeddingCache, HttpEmbeddingProvider, PrecomputedEmbeddingProvider, run_fidelity
from .llm import CompletionCache, LLMGateway
from .metrics import load_predictions, score
from .postproc import DefectLog
from .utils import disable_existing_loggers, get_logger, get_mem_info, get_time_elapsed, write_json

logger = get_logger()


def parse_args(argv: Optional[Sequence[str]] = None):
    parser = argparse.ArgumentParser(prog="reaug",
                                     description="Synthesize, filter and score LLM pseudo-samples for "
                                     "span-based relation extraction corpora")
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--config", type=str, default=None, help="Flat 'key = value' run config file")
    common.add_argument("--out", type=str, default=None, help="Output directory, overrides output_dir")
    common.add_argument("--seed", type=int, default=None)
    common.add_argument("--format", type=str, default=None, choices=["scierc", "spert", "marker"],
                        help="Export format of the written training file")
    common.add_argument("--split", type=str, default=None, choices=["train", "dev", "test", "pseudo"],
                        help="Split name of the SciERC input, overrides split")

    sub = parser.add_subparsers(dest="command", metavar="command")

    augment = sub.add_parser("augment", parents=[common], help="Synthesize pseudo-samples from a corpus")
    for p in (augment, sub.add_parser("replay-verify", parents=[common],
                                      help="Run augment and combine twice from the cache and compare the outputs")):
        p.add_argument("--input", type=str, default=None, help="SciERC file (or sample records) to augment")
        p.add_argument("--method", type=str, default=None, choices=["paraphrase", "generate"])
        p.add_argument("--mode", type=str, default=None, choices=["live", "record", "replay"],
                       help="live calls the endpoint, record also fills the cache, replay reads only the cache")
        p.add_argument("--cache", type=str, default=None, help="Completion cache file, overrides cache_path")
        p.add_argument("--concurrency", type=int, default=None, help="Parallel requests, overrides concurrency")

    combine_parser = sub.add_parser("combine", parents=[common], help="Original set followed by pseudo sets")
    combine_parser.add_argument("--input", type=str, default=None, help="Original training set")
    combine_parser.add_argument("--pseudo", type=str, nargs="+", required=True, help="pseudo.jsonl files, in order")

    subset_parser = sub.add_parser("subset", parents=[common], help="Seeded uniform subset of a pseudo set")
    subset_parser.add_argument("--pseudo", type=str, required=True)
    subset_parser.add_argument("--n", type=int, default=None, help="Number of pseudo-samples to keep")

    sole_parser = sub.add_parser("sole", parents=[common], help="Pseudo-samples alone as a training set")
    sole_parser.add_argument("--pseudo", type=str, nargs="+", required=True)

    export_parser = sub.add_parser("export", parents=[common], help="Convert samples to a backbone format")
    export_parser.add_argument("--input", type=str, default=None)

    stats_parser = sub.add_parser("stats", parents=[common], help="Sample, entity and relation counts")
    stats_parser.add_argument("--input", type=str, nargs="+", default=None)

    score_parser = sub.add_parser("score", parents=[common], help="Ent / Rel / Rel+ micro scores")
    score_parser.add_argument("--gold", type=str, required=True)
    score_parser.add_argument("--pred", type=str, required=True, help="Line-delimited prediction records")
    score_parser.add_argument("--no_symmetric", action="store_true",
                              help="Do not match Compare / Conjunction under endpoint swap")

    fidelity_parser = sub.add_parser("fidelity", parents=[common], help="Embedding closeness and 2D projection")
    fidelity_parser.add_argument("--input", type=str, default=None, help="Original samples")
    fidelity_parser.add_argument("--paraphrase", type=str, default=None, help="Paraphrase pseudo.jsonl")
    fidelity_parser.add_argument("--generate", type=str, default=None, help="Generate pseudo.jsonl")
    fidelity_parser.add_argument("--embeddings", type=str, default=None, help="Precomputed sentence vectors")
    fidelity_parser.add_argument("--n", type=int, default=None, help="Number of pairs per method")

    args = parser.parse_args(argv)
    if args.command is None:
        parser.print_usage(sys.stderr)
        parser.exit(2)
    return args


def _overrides(args) -> Dict:
    input_path = getattr(args, "input", None)
    return {
        "output_dir": args.out,
        "seed": args.seed,
        "format": args.format,
        "split": args.split,
        "input_path": input_path if isinstance(input_path, str) else None,
        "method": getattr(args, "method", None),
        "mode": getattr(args, "mode", None),
        "cache_path": getattr(args, "cache", None),
        "concurrency": getattr(args, "concurrency", None),
        "n": getattr(args, "n", None),
        "embeddings_path": getattr(args, "embeddings", None),
        "symmetric_relations": False if getattr(args, "no_symmetric", False) else None,
    }


def _first_record(path: Path):
    with open(path, "r", encoding="utf-8") as f:
        for line_number, line in enumerate(f, start=1):
            if line.strip():
                return line_number, line.strip()
    return None, ""


def read_samples(path, split: str = "train") -> List[Sample]:
    """Load a SciERC / marker file, a spert array or line-delimited sample records.

    The format is told apart by the fields of the first record.
    """
    path = Path(path)
    line_number, first = _first_record(path)
    if first.startswith("["):
        return load_spert(path)
    if not first:
        return []
    try:
        record = json.loads(first)
    except ValueError as e:
        raise CorpusFormatError(f"malformed record ({e})", line=line_number) from None
    if not isinstance(record, dict):
        raise CorpusFormatError("expected a JSON object per line", line=line_number)
    if "sentences" in record or "doc_key" in record:
        ds = load_scierc(path, split=split)
        logger.info(f"{path}: {len(ds.documents):,} documents ({ds.split})")
        return flatten(ds)
    if "tokens" in record or "id" in record:
        return load_samples(path)
    raise CorpusFormatError(f"record is neither a SciERC document nor a sample (fields {sorted(record)})",
                            line=line_number)


def _require(value, name: str):
    if value is None:
        raise ConfigError(f"{name} is required")
    return value


def _pseudo_only(samples: Sequence[Sample], path) -> List[PseudoSample]:
    for sample in samples:
        if not isinstance(sample, PseudoSample):
            raise ConfigError(f"{path} holds samples without provenance; pass a pseudo.jsonl written by augment")
    return list(samples)


def build_gateway(cfg: RunConfig, mode: Optional[str] = None) -> LLMGateway:
    return LLMGateway(url=cfg.endpoint_url,
                      mode=mode or cfg.mode,
                      cache=CompletionCache(cfg.resolved_cache_path()),
                      concurrency=cfg.concurrency,
                      max_attempts=cfg.max_transport_attempts,
                      backoff_seconds=cfg.backoff_seconds,
                      timeout=cfg.request_timeout)


def build_policy(cfg: RunConfig) -> AugmentPolicy:
    method = _require(cfg.method, "method")
    overrides = dict(temperature=cfg.temperature_for(method),
                     max_tokens=cfg.max_tokens,
                     stop_sequences=tuple(cfg.stop_sequences))
    if method == "paraphrase":
        overrides["max_semantic_retries"] = cfg.max_semantic_retries
    return AugmentPolicy.for_method(method, cfg.model_name, **overrides)


def augment_into(cfg: RunConfig, samples: Sequence[Sample], output_dir: Path,
                 gateway: LLMGateway) -> List[PseudoSample]:
    defect_log = DefectLog()
    checkpoint = output_dir / "checkpoint.jsonl" if gateway.mode != "replay" else None
    pseudo, report = run_augment(samples, build_policy(cfg), gateway, checkpoint_path=checkpoint,
                                 defect_log=defect_log)
    save_run(output_dir, pseudo, report, defect_log)
    export(pseudo, cfg.format, output_dir / "pseudo.json")
    print(report.summary())
    return pseudo


def cmd_augment(cfg: RunConfig, args) -> None:
    samples = read_samples(_require(cfg.input_path, "input_path"), split=cfg.split)
    gateway = build_gateway(cfg)
    try:
        augment_into(cfg, samples, Path(cfg.output_dir), gateway)
    finally:
        gateway.close()


def _tree(root: Path) -> List[str]:
    return sorted(str(p.relative_to(root)) for p in root.rglob("*") if p.is_file())


def cmd_replay_verify(cfg: RunConfig, args) -> None:
    samples = read_samples(_require(cfg.input_path, "input_path"), split=cfg.split)
    root = Path(cfg.output_dir)
    runs = [root / "replay_a", root / "replay_b"]
    calls = 0
    for run_dir in runs:
        gateway = build_gateway(cfg, mode="replay")
        try:
            pseudo = augment_into(cfg, samples, run_dir, gateway)
        finally:
            gateway.close()
        calls += gateway.network_calls
        export(combine(samples, [pseudo]), cfg.format, run_dir / "combined" / "train.json")
    if calls:
        raise ReplayMismatchError(f"replay issued {calls} network calls")
    left, right = _tree(runs[0]), _tree(runs[1])
    if left != right:
        raise ReplayMismatchError(f"output trees differ: {sorted(set(left) ^ set(right))}")
    _, mismatch, errors = filecmp.cmpfiles(runs[0], runs[1], left, shallow=False)
    if mismatch or errors:
        raise ReplayMismatchError(f"files differ between replay runs: {mismatch + errors}")
    print(f"replay verified: {len(left)} identical files, 0 network calls")


def cmd_combine(cfg: RunConfig, args) -> None:
    original = read_samples(_require(cfg.input_path, "input_path"), split=cfg.split)
    pseudo_sets = [_pseudo_only(read_samples(p), p) for p in args.pseudo]
    combined = combine(original, pseudo_sets)
    export(combined, cfg.format, Path(cfg.output_dir) / "train.json")
    print(compute_stats(combined).summary())


def cmd_subset(cfg: RunConfig, args) -> None:
    pseudo = _pseudo_only(read_samples(args.pseudo), args.pseudo)
    chosen = subset(pseudo, _require(cfg.n, "n"), cfg.seed)
    output_dir = Path(cfg.output_dir)
    output_dir.mkdir(parents=True, exist_ok=True)
    with open(output_dir / "pseudo.jsonl", "w", encoding="utf-8") as f:
        for sample in chosen:
            f.write(json.dumps(sample.to_dict(), ensure_ascii=False) + "\n")
    print(f"kept {len(chosen):,} of {len(pseudo):,} pseudo-samples (seed {cfg.seed})")


def cmd_sole(cfg: RunConfig, args) -> None:
    pseudo = []
    for path in args.pseudo:
        pseudo.extend(_pseudo_only(read_samples(path), path))
    samples = sole(combine([], [pseudo]))
    export(samples, cfg.format, Path(cfg.output_dir) / "train.json")
    print(compute_stats(samples).summary())


def cmd_export(cfg: RunConfig, args) -> None:
    path = _require(cfg.input_path, "input_path")
    target = Path(cfg.output_dir) / f"{Path(path).stem}.{cfg.format}.json"
    export(read_samples(path, split=cfg.split), cfg.format, target)


def cmd_stats(cfg: RunConfig, args) -> None:
    paths = args.input or [_require(cfg.input_path, "input_path")]
    total = None
    for path in paths:
        stats = compute_stats(read_samples(path, split=cfg.split))
        print(f"{path}: {stats.summary()}")
        total = stats if total is None else total + stats
    if len(paths) > 1:
        print(f"total: {total.summary()}")
    if args.out is not None:
        write_json(Path(cfg.output_dir) / "stats.json", {**total.to_dict(), "split": cfg.split})


def cmd_score(cfg: RunConfig, args) -> None:
    report = score(read_samples(args.gold), load_predictions(args.pred), symmetric_relations=cfg.symmetric_relations)
    print(report.table())
    write_json(Path(cfg.output_dir) / "score.json", report.to_dict())


def cmd_fidelity(cfg: RunConfig, args) -> None:
    originals = read_samples(_require(cfg.input_path, "input_path"), split=cfg.split)
    pseudo_sets = {}
    for group in ("paraphrase", "generate"):
        path = getattr(args, group)
        if path is not None:
            pseudo_sets[group] = _pseudo_only(read_samples(path), path)
    if not pseudo_sets:
        raise ConfigError("pass --paraphrase and/or --generate")
    if cfg.embeddings_path:
        provider = PrecomputedEmbeddingProvider(cfg.embeddings_path)
    elif cfg.embedding_url and cfg.embedding_model:
        provider = HttpEmbeddingProvider(cfg.embedding_url,
                                         cfg.embedding_model,
                                         max_attempts=cfg.max_transport_attempts,
                                         backoff_seconds=cfg.backoff_seconds,
                                         timeout=cfg.request_timeout)
    else:
        raise ConfigError("set embeddings_path, or embedding_url and embedding_model")
    output_dir = Path(cfg.output_dir)
    reports = run_fidelity(originals,
                           pseudo_sets,
                           provider,
                           output_dir,
                           n=cfg.n if cfg.n is not None else cfg.fidelity_pairs,
                           seed=args.seed,
                           cache=EmbeddingCache(output_dir / "embeddings.jsonl"))
    for group, report in reports.items():
        print(f"{group}: pairs {len(report.similarities)}, mean {report.mean:.4f}, median {report.median:.4f}, "
              f"min {report.min:.4f}")


HANDLERS = {
    "augment": cmd_augment,
    "replay-verify": cmd_replay_verify,
    "combine": cmd_combine,
    "subset": cmd_subset,
    "sole": cmd_sole,
    "export": cmd_export,
    "stats": cmd_stats,
    "score": cmd_score,
    "fidelity": cmd_fidelity,
}


def dispatch(argv: Optional[Sequence[str]] = None) -> int:
    args = parse_args(argv)
    try:
        cfg = load_config(args.config, _overrides(args))
        disable_existing_loggers()
        logger.set_level(cfg.log_level)
        if cfg.log_file:
            logger.log_to_file(cfg.log_file)
        logger.debug(f"config: {cfg.model_dump()}")
        with get_time_elapsed(logger, args.command):
            HANDLERS[args.command](cfg, args)
        logger.debug(get_mem_info(f"after {args.command}: "))
    except ReaugError as e:
        print(f"error: {e.error_class}: {e}", file=sys.stderr)
        return 1
    except ValueError as e:
        print(f"error: {ConfigError.error_class}: {e}", file=sys.stderr)
        return 1
    except OSError as e:
        print(f"error: io: {e.strerror or e}: {e.filename}", file=sys.stderr)
        return 1
    return 0


def main():
    sys.exit(dispatch())


if __name__ == "__main__":
    main()
