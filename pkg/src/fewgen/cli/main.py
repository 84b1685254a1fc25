"""fewgen command-line interface: dataset preparation, training, generation and evaluation."""

from __future__ import annotations

import argparse
import datetime as dt
import json
import logging
import pathlib
import sys
from typing import Any, Callable, NoReturn, Sequence

from dateutil import tz

from .. import __version__
from ..canon.codefile import write_code_dump
from ..canon.corpus import canonize_dataset
from ..canon.tuples import LabelOrder
from ..errors import DATA_ERRORS, ConfigError, NumericalError, UsageError
from ..finetune.selfpaced import fine_tune, vanilla_fine_tune
from ..graphs.dataset import GraphDataset, save_dataset
from ..graphs.fields import GraphField
from ..graphs.split import split_dataset
from ..graphs.spring import synth_spring
from ..meta.reptile import meta_train
from ..metrics.report import evaluate
from ..model.checkpoint import Checkpoint, load_checkpoint, save_checkpoint
from ..model.params import ModelParams
from ..model.vocabulary import build_vocabulary
from ..parallel import resolve_workers
from ..pipeline import (
    FewShotPipeline,
    Mode,
    aux_subset_summary,
    auxiliary_corpora,
    compare_modes,
    pretrain_pooled,
    sample_aux_subsets,
)
from ..sampling.config import GENERATION_PRESETS, default_max_tuples
from ..sampling.generate import generate_graphs
from .config import RunConfig
from .paths import existing_files, load_datasets

logger = logging.getLogger(__name__)

LOG_FORMAT = "%(asctime)s %(levelname)s %(name)s: %(message)s"
CHECKPOINT_NAME = "model.ckpt"

EXIT_OK = 0
EXIT_USAGE = 1
EXIT_DATA = 2
EXIT_NUMERICAL = 3

# CLI flag dest -> dotted config key
FLAG_KEYS: dict[str, str] = {
    "seed": "seed",
    "threads": "threads",
    "embed_dim": "model.embed_dim",
    "hidden_dim": "model.hidden_dim",
    "head_dim": "model.head_dim",
    "layers": "model.num_layers",
    "lr": "train.lr",
    "batch_size": "train.batch_size",
    "dropout": "train.dropout",
    "epochs": "train.max_epochs",
    "patience": "train.patience",
    "inner_steps": "meta.inner_steps",
    "epsilon": "meta.epsilon",
    "inner_lr": "meta.inner_lr",
    "meta_iterations": "meta.max_iterations",
    "validate_every": "meta.validate_every",
    "lambda0": "selfpaced.lambda0",
    "growth": "selfpaced.growth",
    "count": "generate.count",
    "max_tuples": "generate.max_tuples",
    "repair": "generate.repair",
    "chains": "generate.chains",
    "temperature": "generate.temperature",
    "train_frac": "split.train",
    "val_frac": "split.validation",
    "test_frac": "split.test",
    "sigma": "eval.sigma",
    "clustering_bins": "eval.clustering_bins",
    "nspdk_radius": "eval.nspdk_radius",
    "nspdk_distance": "eval.nspdk_distance",
}


class _ArgumentParser(argparse.ArgumentParser):
    """Argument parser that raises UsageError instead of exiting."""

    def error(self, message: str) -> NoReturn:
        raise UsageError(f"{self.prog}: {message}")


# --- Argument groups ---
def _common_parent() -> argparse.ArgumentParser:
    parent = argparse.ArgumentParser(add_help=False)
    parent.add_argument("--config", help="JSON file of dotted configuration keys.")
    parent.add_argument(
        "--set",
        action="append",
        default=[],
        metavar="KEY=VALUE",
        help="Override one configuration key (value parsed as JSON when possible).",
    )
    parent.add_argument("--seed", type=int, help="Seed of every random phase.")
    parent.add_argument("--threads", type=int, help="Worker threads (overrides GSHOT_THREADS).")
    parent.add_argument(
        "--log-level",
        default="INFO",
        choices=["DEBUG", "INFO", "WARNING", "ERROR"],
        help="Logging level.",
    )
    parent.add_argument(
        "--unlabeled-edges",
        action="store_true",
        help="Accept edge lines without a label in dataset files.",
    )
    return parent


def _add_out(parser: argparse.ArgumentParser) -> None:
    parser.add_argument("--out", required=True, help="Output directory.")


def _add_model_args(parser: argparse.ArgumentParser) -> None:
    group = parser.add_argument_group("model and training")
    group.add_argument("--embed-dim", type=int)
    group.add_argument("--hidden-dim", type=int)
    group.add_argument("--head-dim", type=int)
    group.add_argument("--layers", type=int)
    group.add_argument("--lr", type=float)
    group.add_argument("--batch-size", type=int)
    group.add_argument("--dropout", type=float)
    group.add_argument("--epochs", type=int, help="Maximum training epochs.")
    group.add_argument("--patience", type=int)


def _add_meta_args(parser: argparse.ArgumentParser) -> None:
    group = parser.add_argument_group("meta-training")
    group.add_argument("--inner-steps", type=int)
    group.add_argument("--epsilon", type=float)
    group.add_argument("--inner-lr", type=float)
    group.add_argument("--meta-iterations", type=int)
    group.add_argument("--validate-every", type=int)


def _add_selfpaced_args(parser: argparse.ArgumentParser) -> None:
    group = parser.add_argument_group("self-paced fine-tuning")
    group.add_argument("--lambda0", type=float)
    group.add_argument("--growth", type=float)


def _add_generation_args(parser: argparse.ArgumentParser) -> None:
    group = parser.add_argument_group("generation")
    group.add_argument("--count", type=int)
    group.add_argument("--max-tuples", type=int)
    group.add_argument("--repair", choices=["strict", "lenient"])
    group.add_argument("--chains", type=int)
    group.add_argument("--temperature", type=float)


def _add_split_args(parser: argparse.ArgumentParser) -> None:
    group = parser.add_argument_group("split")
    group.add_argument("--train-frac")
    group.add_argument("--val-frac")
    group.add_argument("--test-frac")


def _add_eval_args(parser: argparse.ArgumentParser) -> None:
    group = parser.add_argument_group("evaluation")
    group.add_argument("--sigma", type=float)
    group.add_argument("--clustering-bins", type=int)
    group.add_argument("--nspdk-radius", type=int)
    group.add_argument("--nspdk-distance", type=int)


def build_parser() -> argparse.ArgumentParser:
    """The top-level parser with one subparser per command."""
    parser = _ArgumentParser(
        prog="fewgen",
        description="Few-shot labeled graph generation",
        epilog="""
Examples:
  fewgen synth --particles 5 --count 100 --seed 7 --out data
  fewgen meta-train --aux a.txt b.txt --target t.txt --out runs/meta
  fewgen fine-tune --init runs/meta/model.ckpt --target t.txt --out runs/ft
  fewgen generate --checkpoint runs/ft/model.ckpt --preset medium --out runs/gen
  fewgen evaluate --generated runs/gen/generated.txt --test runs/ft/test.txt \\
      --train runs/ft/train.txt --out runs/eval
        """,
        formatter_class=argparse.RawDescriptionHelpFormatter,
    )
    parser.add_argument("--version", action="version", version=f"fewgen {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)
    parent = _common_parent()

    p = sub.add_parser("canon", parents=[parent], help="Dataset to minimum DFS code dump.")
    p.add_argument("input")
    p.add_argument("--label-order", choices=["id", "symbol"], default="id")
    _add_out(p)
    p.set_defaults(func=cmd_canon)

    p = sub.add_parser("split", parents=[parent], help="Seeded train/val/test split.")
    p.add_argument("input")
    _add_split_args(p)
    _add_out(p)
    p.set_defaults(func=cmd_split)

    p = sub.add_parser("synth", parents=[parent], help="Synthetic spring-system graphs.")
    p.add_argument("--particles", type=int, required=True)
    p.add_argument("--count", dest="how_many", type=int, default=100)
    p.add_argument("--grid-side", type=int, default=5)
    p.add_argument("--edge-prob", type=float, default=0.5)
    _add_out(p)
    p.set_defaults(func=cmd_synth)

    for name, func, helptext in (
        ("meta-train", cmd_meta_train, "Meta-train on auxiliary datasets."),
        ("pretrain", cmd_pretrain, "Pooled training on auxiliary datasets."),
    ):
        p = sub.add_parser(name, parents=[parent], help=helptext)
        p.add_argument("--aux", nargs="+", required=True, help="Auxiliary dataset files.")
        p.add_argument("--target", nargs="*", default=[], help="Datasets sharing the vocabulary.")
        _add_model_args(p)
        if name == "meta-train":
            _add_meta_args(p)
        _add_out(p)
        p.set_defaults(func=func)

    p = sub.add_parser("fine-tune", parents=[parent], help="Fine-tune on a target dataset.")
    p.add_argument("--target", required=True)
    p.add_argument("--init", help="Checkpoint to start from; omitted trains from scratch.")
    p.add_argument("--aux", nargs="*", default=[], help="Datasets sharing the vocabulary.")
    p.add_argument("--vanilla", action="store_true", help="Fine-tune on every code.")
    p.add_argument("--train-limit", type=int, help="Keep the first N training graphs.")
    _add_model_args(p)
    _add_selfpaced_args(p)
    _add_split_args(p)
    _add_out(p)
    p.set_defaults(func=cmd_fine_tune)

    p = sub.add_parser("generate", parents=[parent], help="Sample graphs from a checkpoint.")
    p.add_argument("--checkpoint", required=True)
    p.add_argument("--preset", choices=sorted(GENERATION_PRESETS))
    _add_generation_args(p)
    _add_out(p)
    p.set_defaults(func=cmd_generate)

    p = sub.add_parser("evaluate", parents=[parent], help="Metric report of generated graphs.")
    p.add_argument("--generated", required=True)
    p.add_argument("--test", required=True)
    p.add_argument("--train", required=True)
    _add_eval_args(p)
    _add_out(p)
    p.set_defaults(func=cmd_evaluate)

    p = sub.add_parser("stats", parents=[parent], help="Dataset summary statistics.")
    p.add_argument("inputs", nargs="+")
    p.set_defaults(func=cmd_stats)

    p = sub.add_parser("compare", parents=[parent], help="Compare initialization modes.")
    p.add_argument("--aux", nargs="+", required=True)
    p.add_argument("--target", required=True)
    p.add_argument(
        "--modes", nargs="+", choices=[m.value for m in Mode], default=[m.value for m in Mode]
    )
    p.add_argument("--seeds", nargs="+", type=int)
    p.add_argument("--ablation", action="store_true", help="Add vanilla fine-tuning of meta.")
    p.add_argument("--aux-subset-size", type=int)
    p.add_argument("--aux-subsets", type=int, default=1)
    p.add_argument("--train-limit", type=int)
    _add_model_args(p)
    _add_meta_args(p)
    _add_selfpaced_args(p)
    _add_generation_args(p)
    _add_split_args(p)
    _add_eval_args(p)
    _add_out(p)
    p.set_defaults(func=cmd_compare)
    return parser


# --- Configuration and run records ---
def _parse_set(item: str) -> tuple[str, Any]:
    key, sep, raw = item.partition("=")
    if not sep:
        raise UsageError(f"--set expects KEY=VALUE, got {item!r}")
    try:
        return key, json.loads(raw)
    except json.JSONDecodeError:
        return key, raw


def resolve_config(args: argparse.Namespace) -> RunConfig:
    """Defaults, then the config file, then --set items, then explicit flags."""
    cfg = RunConfig.load(args.config) if args.config else RunConfig()
    cfg.update(dict(_parse_set(item) for item in args.set))
    cfg.update({key: getattr(args, dest) for dest, key in FLAG_KEYS.items() if hasattr(args, dest)})
    return cfg.validate()


def write_run_record(
    out: pathlib.Path,
    cfg: RunConfig,
    command: str,
    argv: Sequence[str],
) -> None:
    """Write config.json and run.json into the output directory."""
    out.mkdir(parents=True, exist_ok=True)
    (out / "config.json").write_text(cfg.to_json(), encoding="utf-8")
    record = {
        "command": command,
        "argv": list(argv),
        "version": __version__,
        "seed": cfg.seed,
        "created": dt.datetime.now(tz=tz.tzutc()).isoformat(),
    }
    (out / "run.json").write_text(json.dumps(record, indent=2) + "\n", encoding="utf-8")


def _write_text(path: pathlib.Path, text: str) -> None:
    with path.open("w", encoding="utf-8", newline="\n") as handle:
        handle.write(text)


def _workers(cfg: RunConfig) -> int:
    return resolve_workers(cfg["threads"])


def _save_partitions(out: pathlib.Path, parts: list[tuple[str, GraphDataset]]) -> None:
    """Write each nonempty partition as `<name>.txt`; empty ones have no valid file form."""
    for name, part in parts:
        if not len(part):
            logger.warning("Partition %r is empty and is not written", name)
            continue
        save_dataset(part, out / f"{name}.txt")


def _save_model(out: pathlib.Path, checkpoint: Checkpoint) -> None:
    path = save_checkpoint(checkpoint, out / CHECKPOINT_NAME)
    logger.info("Saved checkpoint %s", path)


# --- Commands ---
def cmd_canon(
    args: argparse.Namespace,
    cfg: RunConfig,
    out: pathlib.Path,
) -> int:
    """Write the minimum DFS code of every graph, one per line."""
    (dataset,) = load_datasets(args.input, args.unlabeled_edges)
    order = LabelOrder.SYMBOL if args.label_order == "symbol" else LabelOrder.ID
    corpus = canonize_dataset(dataset, _workers(cfg), order)
    _write_text(out / f"{dataset.name}.codes", write_code_dump(corpus.codes))
    return EXIT_OK


def cmd_split(
    args: argparse.Namespace,
    cfg: RunConfig,
    out: pathlib.Path,
) -> int:
    """Write the train, validation and test partitions."""
    (dataset,) = load_datasets(args.input, args.unlabeled_edges)
    _save_partitions(out, [(part.name, part) for part in split_dataset(dataset, cfg.split())])
    return EXIT_OK


def cmd_synth(
    args: argparse.Namespace,
    cfg: RunConfig,
    out: pathlib.Path,
) -> int:
    """Write a synthetic spring-system dataset."""
    dataset = synth_spring(args.particles, args.how_many, args.grid_side, args.edge_prob, cfg.seed)
    save_dataset(dataset, out / f"{dataset.name}.txt")
    return EXIT_OK


def _auxiliary_setup(args: argparse.Namespace, cfg: RunConfig):
    aux = load_datasets(args.aux, args.unlabeled_edges)
    shared = load_datasets(args.target, args.unlabeled_edges)
    vocab = build_vocabulary([*aux, *shared])
    corpora, validation = auxiliary_corpora(aux, vocab, cfg.seed, _workers(cfg))
    init = ModelParams.initialize(cfg.model(), vocab, cfg.seed)
    return init, corpora, validation


def cmd_meta_train(
    args: argparse.Namespace,
    cfg: RunConfig,
    out: pathlib.Path,
) -> int:
    """Meta-train and save the meta-parameters with the meta-training log."""
    init, corpora, validation = _auxiliary_setup(args, cfg)
    result = meta_train(corpora, cfg.meta(), cfg.train(), validation, init)
    _write_text(out / "meta_log.tsv", result.log_tsv())
    metadata = {"command": "meta-train", "iterations": len(result.log)}
    _save_model(out, Checkpoint(result.params, cfg.seed, len(result.log), metadata))
    return EXIT_OK


def cmd_pretrain(
    args: argparse.Namespace,
    cfg: RunConfig,
    out: pathlib.Path,
) -> int:
    """Pooled training and save the parameters with the epoch history."""
    init, corpora, validation = _auxiliary_setup(args, cfg)
    result = pretrain_pooled(init, corpora, validation, cfg.train())
    _write_text(out / "history.tsv", result.history_tsv())
    metadata = {"command": "pretrain"}
    _save_model(out, Checkpoint(result.params, cfg.seed, result.steps, metadata))
    return EXIT_OK


def cmd_fine_tune(
    args: argparse.Namespace,
    cfg: RunConfig,
    out: pathlib.Path,
) -> int:
    """Fine-tune and save the adapted parameters, the target partitions and the logs."""
    (target,) = load_datasets(args.target, args.unlabeled_edges)
    if args.init:
        params = load_checkpoint(existing_files(args.init)[0]).params
        vocab = params.vocab
    else:
        shared = load_datasets(args.aux, args.unlabeled_edges)
        vocab = build_vocabulary([target, *shared])
        params = ModelParams.initialize(cfg.model(), vocab, cfg.seed)
    train_set, val_set, test_set = split_dataset(vocab.adopt(target), cfg.split())
    if args.train_limit is not None:
        if args.train_limit < 1:
            raise ConfigError(f"--train-limit must be >= 1, got {args.train_limit}")
        train_set = train_set.subset(range(min(args.train_limit, len(train_set))))
    if not len(train_set):
        raise ConfigError(f"Target {target.name!r} leaves no training graphs")
    _save_partitions(out, [("train", train_set), ("val", val_set), ("test", test_set)])

    workers = _workers(cfg)
    codes = canonize_dataset(train_set, workers).codes
    val_codes = canonize_dataset(val_set, workers).codes or None
    if args.vanilla:
        result = vanilla_fine_tune(params, codes, cfg.train(), val_codes)
    else:
        result = fine_tune(params, codes, cfg.selfpaced(), val_codes)
    _write_text(out / "finetune_log.tsv", result.log_tsv())
    _write_text(out / "history.tsv", result.history_tsv())
    metadata = {
        "command": "fine-tune",
        "vanilla": args.vanilla,
        "lambda0": result.lambda0,
        "max_tuples": default_max_tuples(train_set),
    }
    _save_model(out, Checkpoint(result.params, cfg.seed, result.steps, metadata))
    return EXIT_OK


def cmd_generate(
    args: argparse.Namespace,
    cfg: RunConfig,
    out: pathlib.Path,
) -> int:
    """Sample graphs and write them with the generation report."""
    checkpoint = load_checkpoint(existing_files(args.checkpoint)[0])
    if args.preset:
        cfg.update({"generate.count": GENERATION_PRESETS[args.preset]})
    if cfg["generate.max_tuples"] is None and "max_tuples" in checkpoint.metadata:
        cfg.update({"generate.max_tuples": checkpoint.metadata["max_tuples"]})
    gc = cfg.generation()
    params = checkpoint.params
    dataset, report = generate_graphs(params, params.vocab, gc, _workers(cfg))
    save_dataset(dataset, out / "generated.txt")
    _write_text(out / "generation_report.tsv", report.to_tsv())
    # the resolved count and length cap belong in the snapshot
    _write_text(out / "config.json", cfg.to_json())
    return EXIT_OK


def cmd_evaluate(
    args: argparse.Namespace,
    cfg: RunConfig,
    out: pathlib.Path,
) -> int:
    """Write the metric report as text and JSON and print the text form."""
    (gen,) = load_datasets(args.generated, args.unlabeled_edges)
    (test,) = load_datasets(args.test, args.unlabeled_edges)
    (train,) = load_datasets(args.train, args.unlabeled_edges)
    report = evaluate(gen, test, train, cfg.evaluation(), _workers(cfg))
    _write_text(out / "metrics.txt", report.to_text())
    _write_text(out / "metrics.json", report.to_json())
    print(report.to_text(), end="")
    return EXIT_OK


def cmd_stats(
    args: argparse.Namespace,
    cfg: RunConfig,
    out: pathlib.Path | None,
) -> int:
    """Print graph count, alphabet sizes and node and edge ranges per dataset."""
    header = [
        "dataset", "graphs", "node_labels", "edge_labels",
        "nodes_min", "nodes_avg", "nodes_max", "edges_min", "edges_avg", "edges_max",
    ]
    print("\t".join(header))
    for d in load_datasets(args.inputs, args.unlabeled_edges):
        edge_labels = "0" if d.is_unlabeled else str(len(d.edge_labels))
        row = [d.name, str(len(d)), str(len(d.node_labels)), edge_labels]
        for f in (GraphField.NODES, GraphField.EDGES):
            row += [str(d.min(f)), f"{d.average(f):.2f}", str(d.max(f))]
        print("\t".join(row))
    return EXIT_OK


def _pipeline(
    args: argparse.Namespace,
    cfg: RunConfig,
    aux: list[GraphDataset],
) -> FewShotPipeline:
    (target,) = load_datasets(args.target, args.unlabeled_edges)
    return FewShotPipeline(
        auxiliary=aux,
        target=target,
        model=cfg.model(),
        train=cfg.train(),
        meta=cfg.meta(),
        selfpaced=cfg.selfpaced(),
        generation=cfg.generation(),
        evaluation=cfg.evaluation(),
        split=cfg.split(),
        train_limit=args.train_limit,
        workers=_workers(cfg),
    )


def cmd_compare(
    args: argparse.Namespace,
    cfg: RunConfig,
    out: pathlib.Path,
) -> int:
    """Compare modes over seeds, optionally over several auxiliary subsets."""
    aux = load_datasets(args.aux, args.unlabeled_edges)
    modes = [Mode(m) for m in args.modes]
    seeds = args.seeds or [cfg.seed]
    if args.aux_subset_size is None:
        comparison = compare_modes(_pipeline(args, cfg, aux), modes, seeds, args.ablation)
        _write_text(out / "comparison.tsv", comparison.to_tsv())
        _write_text(out / "comparison.json", json.dumps(comparison.to_dict(), indent=2) + "\n")
        if args.ablation:
            _write_text(out / "ablation.tsv", comparison.ablation_tsv())
        return EXIT_OK

    by_name = {d.name: d for d in aux}
    subsets = sample_aux_subsets(list(by_name), args.aux_subset_size, args.aux_subsets, cfg.seed)
    comparisons = []
    for index, subset in enumerate(subsets):
        logger.info("Auxiliary subset %d: %s", index, ", ".join(subset))
        pipeline = _pipeline(args, cfg, [by_name[name] for name in subset])
        comparison = compare_modes(pipeline, modes, seeds, args.ablation)
        _write_text(out / f"comparison-{index}.tsv", comparison.to_tsv())
        comparisons.append(comparison)
    summary = aux_subset_summary(comparisons)
    payload = {
        "subsets": [list(s) for s in subsets],
        "summary": {
            label: {n: None if s is None else {"mean": s[0], "std": s[1]} for n, s in stats.items()}
            for label, stats in summary.items()
        },
    }
    _write_text(out / "aux_subsets.json", json.dumps(payload, indent=2) + "\n")
    return EXIT_OK


Command = Callable[[argparse.Namespace, RunConfig, Any], int]


def run(argv: Sequence[str] | None = None) -> int:
    """Parse arguments, run one command and map failures to exit codes."""
    argv = list(sys.argv[1:] if argv is None else argv)
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except UsageError as exc:
        print(exc, file=sys.stderr)
        return EXIT_USAGE
    except SystemExit as exc:
        return int(exc.code or 0)
    logging.basicConfig(level=args.log_level, format=LOG_FORMAT, force=True)
    func: Command = args.func
    try:
        cfg = resolve_config(args)
        out = pathlib.Path(args.out) if getattr(args, "out", None) else None
        if out is not None:
            write_run_record(out, cfg, args.command, argv)
        return func(args, cfg, out)
    except (UsageError, ConfigError) as exc:
        logger.error("%s", exc)
        return EXIT_USAGE
    except NumericalError as exc:
        logger.error("Numerical failure: %s", exc)
        return EXIT_NUMERICAL
    except DATA_ERRORS as exc:
        logger.error("%s", exc)
        return EXIT_DATA
    except ValueError as exc:
        logger.error("%s", exc)
        return EXIT_DATA


def main() -> None:
    """Console entry point."""
    sys.exit(run())


if __name__ == "__main__":
    main()
