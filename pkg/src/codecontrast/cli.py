"""Command-line entry points for the augmentation, pre-training and evaluation pipeline.

Exit codes: 0 success, 1 the operation failed, 2 bad usage or configuration.
Every command that writes ``OUT`` also writes ``OUT.manifest.json``.

Configuration file (``--config``) is a JSON object::

    {"schema_version": 1,
     "seed": 0,
     "augment": {"n": 20, "probabilities": {"CF": 0.5, "LS": 0.25, ...}},
     "vocab": {"size": 8000},
     "train": {"steps": 2000, "batch_size": 32, ...},
     "attack": {"samples": 4, "pool": ["R", "B", ...], "probability": 0.5}}

Every section and key is optional; command-line flags take precedence.
"""

from __future__ import annotations

import argparse
import hashlib
import json
import logging
import os
import sys
import time
from dataclasses import asdict

from .augment import (DEFAULT_ORDER, DEFAULT_PROBABILITIES, augment_corpus, dissimilarity_stats,
                      load_variant_sets, read_jsonl, specs_from_mapping)
from .contrastive import TrainConfig, pretrain
from .checkpoint import read_meta
from .encoder import MAX, MEAN, load_params
from .errors import CodeContrastError, ConfigError
from .eval.clones import AttackConfig, clone_eval, export_embeddings, load_pairs, make_scorer, make_variant_pairs
from .eval.synthetic import generate_synthetic_corpus
from .tokenizer import SubwordVocab, train_vocab

CONFIG_SCHEMA_VERSION = 1
MANIFEST_SCHEMA_VERSION = 1
CONFIG_SECTIONS = ("augment", "vocab", "train", "attack")

log = logging.getLogger("codecontrast")


class UsageError(Exception):
    pass


# -- config and manifests ---------------------------------------------------------------


def load_config(path) -> dict:
    if path is None:
        return {}
    try:
        with open(path, encoding="utf-8") as f:
            cfg = json.load(f)
    except (OSError, json.JSONDecodeError) as e:
        raise ConfigError(f"cannot read config {path}: {e}") from e
    if not isinstance(cfg, dict):
        raise ConfigError("config must be a JSON object")
    version = cfg.get("schema_version", CONFIG_SCHEMA_VERSION)
    if version != CONFIG_SCHEMA_VERSION:
        raise ConfigError(f"unsupported config schema_version {version}")
    unknown = set(cfg) - {"schema_version", "seed", *CONFIG_SECTIONS}
    if unknown:
        raise ConfigError(f"unknown config keys: {sorted(unknown)}")
    return cfg


def content_hash(path) -> str:
    """Git blob hash of a file's bytes."""
    h = hashlib.sha1()
    size = os.path.getsize(path)
    h.update(f"blob {size}\0".encode())
    with open(path, "rb") as f:
        for chunk in iter(lambda: f.read(1 << 20), b""):
            h.update(chunk)
    return h.hexdigest()


def write_manifest(out_path, command: str, config: dict, seed, inputs: dict, started: float,
                   extra: dict | None = None) -> None:
    hashed = {}
    for role, p in inputs.items():
        if p is None:
            continue
        if os.path.isdir(p):
            continue
        hashed[role] = {"path": str(p), "sha1": content_hash(p)}
    manifest = {
        "schema_version": MANIFEST_SCHEMA_VERSION,
        "command": command,
        "argv": sys.argv[1:],
        "config": config,
        "seed": seed,
        "inputs": hashed,
        "output": str(out_path),
        "wall_time_sec": round(time.perf_counter() - started, 3),
    }
    if extra:
        manifest["result"] = extra
    with open(f"{out_path}.manifest.json", "w", encoding="utf-8") as f:
        json.dump(manifest, f, indent=2, sort_keys=True)
        f.write("\n")


def _emit(obj) -> None:
    sys.stdout.write(json.dumps(obj, sort_keys=True) + "\n")


def _seed(args, cfg) -> int:
    return args.seed if args.seed is not None else int(cfg.get("seed", 0))


def _require(path, what) -> None:
    if path is None or not os.path.exists(path):
        raise UsageError(f"{what} not found: {path}")


# -- commands ------------------------------------------------------------------------------


def cmd_gen(args, cfg, started):
    if args.count < 1:
        raise UsageError("--count must be at least 1")
    seed = _seed(args, cfg)
    summary = generate_synthetic_corpus(args.count, seed, args.out)
    write_manifest(args.out, "gen", {"count": args.count}, seed, {}, started, summary)
    _emit(summary)


def _augment_settings(args, cfg):
    section = dict(cfg.get("augment", {}))
    probs = dict(DEFAULT_PROBABILITIES)
    probs.update(section.get("probabilities", {}))
    order = section.get("order", list(DEFAULT_ORDER))
    n = args.n if args.n is not None else int(section.get("n", 20))
    if n < 1:
        raise UsageError("--n must be at least 1")
    try:
        specs = specs_from_mapping(probs, order)
    except (ValueError, KeyError) as e:
        raise ConfigError(f"bad augment settings: {e}") from e
    return n, order, probs, specs


def cmd_augment(args, cfg, started):
    _require(args.inp, "input corpus")
    seed = _seed(args, cfg)
    n, order, probs, specs = _augment_settings(args, cfg)
    summary = augment_corpus(args.inp, args.out, specs, n, seed, jobs=args.jobs)
    echo = {"n": n, "order": order, "probabilities": probs}
    write_manifest(args.out, "augment", echo, seed, {"corpus": args.inp}, started,
                   {k: v for k, v in summary.items() if k != "elapsed_sec"})
    _emit(summary)
    return 1 if summary["methods"] == 0 and summary["failed"] else 0


def cmd_stats(args, cfg, started):
    _require(args.inp, "augmented corpus")
    seed = _seed(args, cfg)
    report = dissimilarity_stats(load_variant_sets(args.inp), seed, args.max_pairs)
    if args.out:
        with open(args.out, "w", encoding="utf-8") as f:
            json.dump(report, f, indent=2, sort_keys=True)
            f.write("\n")
        write_manifest(args.out, "stats", {"max_pairs": args.max_pairs}, seed, {"corpus": args.inp}, started)
    _emit(report)


def _corpus_texts(path):
    for rec in read_jsonl(path):
        if "source" in rec:
            yield rec["source"]
            yield from rec.get("variants", [])
        else:
            yield rec["a"]
            yield rec["b"]


def cmd_train_vocab(args, cfg, started):
    _require(args.inp, "corpus")
    size = args.size if args.size is not None else int(cfg.get("vocab", {}).get("size", 8000))
    vocab = train_vocab(_corpus_texts(args.inp), size=size)
    vocab.save(args.out)
    write_manifest(args.out, "train-vocab", {"size": size}, None, {"corpus": args.inp}, started,
                   {"pieces": vocab.size})
    _emit({"schema_version": 1, "vocab_size": vocab.size, "out": args.out})


_TRAIN_FLAGS = {"steps": "steps", "batch_size": "batch_size", "queue_size": "queue_size", "refill": "refill",
                "lr": "lr", "temperature": "temperature", "momentum": "momentum", "pool": "pooling",
                "alpha": "alpha", "checkpoint_every": "checkpoint_every"}


def _train_config(args, cfg) -> TrainConfig:
    values = dict(cfg.get("train", {}))
    values["seed"] = _seed(args, cfg)
    for flag, key in _TRAIN_FLAGS.items():
        v = getattr(args, flag, None)
        if v is not None:
            values[key] = v
    if args.no_mask:
        values["mask_same_base"] = False
    try:
        return TrainConfig.from_dict(values).validate()
    except TypeError as e:
        raise ConfigError(str(e)) from e


def cmd_pretrain(args, cfg, started):
    _require(args.inp, "augmented corpus")
    _require(args.vocab, "vocabulary")
    tc = _train_config(args, cfg)
    result = pretrain(args.inp, args.vocab, tc, args.out_dir, resume=not args.no_resume)
    ckpt = result["checkpoint"]
    write_manifest(ckpt, "pretrain", asdict(tc), tc.seed, {"corpus": args.inp, "vocab": args.vocab}, started,
                   result)
    _emit(result)


def cmd_make_pairs(args, cfg, started):
    _require(args.inp, "corpus")
    seed = _seed(args, cfg)
    sources = [r["source"] for r in read_jsonl(args.inp)]
    if len(sources) < 2:
        raise UsageError("need at least two programs to build non-clone pairs")
    pairs = make_variant_pairs(sources, seed)
    with open(args.out, "w", encoding="utf-8") as f:
        for p in pairs:
            f.write(json.dumps(p, ensure_ascii=False, sort_keys=True) + "\n")
    summary = {"schema_version": 1, "pairs": len(pairs), "clones": sum(p["label"] for p in pairs)}
    write_manifest(args.out, "make-pairs", {}, seed, {"corpus": args.inp}, started, summary)
    _emit(summary)


def _pooling(args) -> str:
    if args.pool:
        return args.pool
    if args.checkpoint and os.path.exists(args.checkpoint):
        return read_meta(args.checkpoint).get("pooling", MEAN)
    return MEAN


def cmd_eval_clones(args, cfg, started):
    _require(args.pairs, "pairs file")
    args.pool = _pooling(args)
    seed = _seed(args, cfg)
    if args.scorer != "edit":
        _require(args.vocab, "vocabulary")
    if args.scorer == "cosine":
        _require(args.checkpoint, "checkpoint")
    vocab = SubwordVocab.load(args.vocab) if args.scorer != "edit" else None
    scorer = make_scorer(args.scorer, vocab, args.checkpoint, args.pool, seed=seed)
    attack = None
    section = dict(cfg.get("attack", {}))
    n = args.attack_n if args.attack_n is not None else section.get("samples")
    if n:
        try:
            attack = AttackConfig(samples=int(n), pool=tuple(args.attack_pool or section.get("pool", AttackConfig.pool)),
                                  probability=float(section.get("probability", AttackConfig.probability)), seed=seed)
        except ValueError as e:
            raise UsageError(str(e)) from e
    pairs, skipped = load_pairs(args.pairs)
    report, dump = clone_eval(scorer, pairs, args.pool, attack, args.attack_negatives, skipped, jobs=args.jobs)
    with open(args.out, "w", encoding="utf-8") as f:
        json.dump(report, f, indent=2, sort_keys=True)
        f.write("\n")
    if args.scores:
        with open(args.scores, "w", encoding="utf-8") as f:
            for row in dump:
                f.write(json.dumps(row, sort_keys=True) + "\n")
    echo = {"scorer": args.scorer, "pooling": args.pool, "attack": asdict(attack) if attack else None,
            "attack_negatives": args.attack_negatives}
    write_manifest(args.out, "eval-clones", echo, seed,
                   {"pairs": args.pairs, "vocab": args.vocab, "checkpoint": args.checkpoint}, started)
    _emit(report)


def cmd_embed(args, cfg, started):
    for p, what in ((args.inp, "corpus"), (args.vocab, "vocabulary"), (args.checkpoint, "checkpoint")):
        _require(p, what)
    args.pool = _pooling(args)
    rows = export_embeddings(load_params(args.checkpoint), SubwordVocab.load(args.vocab), args.inp, args.out,
                             args.pool)
    write_manifest(args.out, "embed", {"pooling": args.pool}, None,
                   {"corpus": args.inp, "vocab": args.vocab, "checkpoint": args.checkpoint}, started, {"rows": rows})
    _emit({"schema_version": 1, "rows": rows, "out": args.out})


# -- parser ------------------------------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="codecontrast", description=__doc__.split("\n")[0])
    ap.add_argument("-v", "--verbose", action="store_true")
    sub = ap.add_subparsers(dest="command", required=True)

    def add(name, fn, help_):
        p = sub.add_parser(name, help=help_)
        p.set_defaults(fn=fn)
        p.add_argument("--config", help="JSON configuration file")
        p.add_argument("--seed", type=int)
        p.add_argument("--jobs", type=int, default=1, help="worker processes; results do not depend on it")
        return p

    p = add("gen", cmd_gen, "write a synthetic corpus")
    p.add_argument("--count", type=int, required=True)
    p.add_argument("--out", required=True)

    p = add("augment", cmd_augment, "generate program variants for every corpus record")
    p.add_argument("--in", dest="inp", required=True)
    p.add_argument("--out", required=True)
    p.add_argument("--n", type=int)

    p = add("stats", cmd_stats, "variant-set histogram and token dissimilarity summary")
    p.add_argument("--in", dest="inp", required=True)
    p.add_argument("--out")
    p.add_argument("--max-pairs", type=int)

    p = add("train-vocab", cmd_train_vocab, "train a unigram subword vocabulary")
    p.add_argument("--in", dest="inp", required=True)
    p.add_argument("--out", required=True)
    p.add_argument("--size", type=int)

    p = add("pretrain", cmd_pretrain, "contrastive pre-training")
    p.add_argument("--in", dest="inp", required=True)
    p.add_argument("--vocab", required=True)
    p.add_argument("--out-dir", required=True)
    p.add_argument("--steps", type=int)
    p.add_argument("--batch-size", type=int)
    p.add_argument("--queue-size", type=int)
    p.add_argument("--refill", type=int)
    p.add_argument("--lr", type=float)
    p.add_argument("--temperature", type=float)
    p.add_argument("--momentum", type=float)
    p.add_argument("--alpha", type=float)
    p.add_argument("--pool", choices=(MEAN, MAX))
    p.add_argument("--checkpoint-every", type=int)
    p.add_argument("--no-mask", action="store_true", help="keep same-base keys as negatives")
    p.add_argument("--no-resume", action="store_true")

    p = add("make-pairs", cmd_make_pairs, "balanced clone/non-clone benchmark from fresh variants")
    p.add_argument("--in", dest="inp", required=True)
    p.add_argument("--out", required=True)

    p = add("eval-clones", cmd_eval_clones, "zero-shot (optionally adversarial) clone detection")
    p.add_argument("--pairs", required=True)
    p.add_argument("--scorer", choices=("cosine", "edit", "random"), required=True)
    p.add_argument("--pool", choices=(MEAN, MAX), help="default: as trained, else mean")
    p.add_argument("--checkpoint")
    p.add_argument("--vocab")
    p.add_argument("--attack-n", type=int)
    p.add_argument("--attack-pool", nargs="+")
    p.add_argument("--attack-negatives", action="store_true", help="also push non-clone scores up")
    p.add_argument("--out", required=True)
    p.add_argument("--scores", help="per-pair score dump (JSONL)")

    p = add("embed", cmd_embed, "export embeddings of every variant")
    p.add_argument("--in", dest="inp", required=True)
    p.add_argument("--checkpoint", required=True)
    p.add_argument("--vocab", required=True)
    p.add_argument("--pool", choices=(MEAN, MAX), help="default: as trained, else mean")
    p.add_argument("--out", required=True)
    return ap


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)  # exits with 2 on bad usage
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING,
                        format="%(asctime)s %(name)s %(message)s", stream=sys.stderr)
    if args.jobs < 1:
        parser.error("--jobs must be at least 1")
    started = time.perf_counter()
    try:
        cfg = load_config(args.config)
        return args.fn(args, cfg, started) or 0
    except UsageError as e:
        parser.print_usage(sys.stderr)
        print(f"codecontrast {args.command}: error: {e}", file=sys.stderr)
        return 2
    except ConfigError as e:
        print(f"codecontrast {args.command}: config error: {e}", file=sys.stderr)
        return 2
    except (CodeContrastError, OSError, ValueError, KeyError) as e:
        print(f"codecontrast {args.command}: {type(e).__name__}: {e}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
