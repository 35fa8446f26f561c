"""pgtrain: smoke-train a classifier on a corpus of graph bundles."""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

from .bundle import BundleError, load_corpus
from .features import VocabError
from .train import TrainError, smoke_train

EXIT_OK = 0
EXIT_FAIL = 1
EXIT_IO = 2


def main(argv: list[str] | None = None) -> int:
    parser = argparse.ArgumentParser(
        prog="pgtrain",
        description="Train a relational graph classifier on a bundle corpus.")
    parser.add_argument("corpus", help="corpus directory (vocab.json + *.bundle)")
    parser.add_argument("labels", help="JSON file mapping bundle name to class id")
    parser.add_argument("-o", "--output", default="metrics.json", help="metrics output path")
    parser.add_argument("--seed", type=int, default=0, help="weight init seed")
    parser.add_argument("--epochs", type=int, default=200, help="epoch cap")
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return exc.code if isinstance(exc.code, int) else EXIT_IO

    try:
        label_map = json.loads(Path(args.labels).read_text(encoding="utf-8"))
    except (OSError, json.JSONDecodeError) as exc:
        print(f"pgtrain: cannot read labels: {exc}", file=sys.stderr)
        return EXIT_IO

    try:
        graphs = load_corpus(args.corpus)
        missing = [g.name for g in graphs if g.name not in label_map]
        if missing:
            print(f"pgtrain: no label for: {', '.join(missing)}", file=sys.stderr)
            return EXIT_IO
        labels = [int(label_map[g.name]) for g in graphs]
        metrics = smoke_train(graphs, labels, args.output,
                              seed=args.seed, max_epochs=args.epochs)
    except (BundleError, VocabError) as exc:
        print(f"pgtrain: {exc}", file=sys.stderr)
        return EXIT_IO
    except TrainError as exc:
        print(f"pgtrain: {exc}", file=sys.stderr)
        return EXIT_FAIL
    except OSError as exc:
        print(f"pgtrain: {exc}", file=sys.stderr)
        return EXIT_IO

    print(f"trained on {metrics['graphs']} graphs: "
          f"accuracy {metrics['train_accuracy']:.2f} "
          f"after {metrics['epochs_run']} epochs -> {args.output}")
    return EXIT_OK if metrics["train_accuracy"] == 1.0 else EXIT_FAIL


if __name__ == "__main__":
    sys.exit(main())
