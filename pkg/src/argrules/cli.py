"""Command-line entry point: ``argrules {learn,predict,explain,eval,export}``.

Exit codes: 0 success, 2 configuration error, 3 I/O error, 4 schema
mismatch, 5 internal invariant violation.
"""
from __future__ import annotations

import argparse
import json
import logging
import sys
from pathlib import Path

from .dataset import build_dataset, fit_schema, load_table
from .dot import export_dot
from .errors import ArgRulesError, ConfigError, DataIOError
from .experiment import EvalConfig, evaluate
from .explain import render
from .model import Model
from .search import SearchConfig


def _data_args(p, label=True):
    p.add_argument("--data", required=True, help="delimited table with a header row")
    p.add_argument("--delimiter", default=",")
    p.add_argument("--drop", action="append", default=[], metavar="COLUMN",
                   help="ignore this column (repeatable)")
    if label:
        p.add_argument("--label-column", required=True)
        p.add_argument("--positive-class", required=True)


def _learn_args(p):
    p.add_argument("--variant", choices=["base", "n", "bipolar"], default="base")
    p.add_argument("--segments", type=int, default=6)
    p.add_argument("--iterations", type=int, default=100)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--nominal", action="append", default=[], metavar="COLUMN",
                   help="treat a numeric column as nominal (repeatable)")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="argrules", description=__doc__.splitlines()[0])
    parser.add_argument("-v", "--verbose", action="store_true", help="log search progress to stderr")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("learn", help="learn a model from a labelled table")
    _data_args(p)
    _learn_args(p)
    p.add_argument("--out", required=True, help="model file to write")
    p.add_argument("--summary", action="store_true", help="print a JSON summary to stdout")

    p = sub.add_parser("predict", help="predict labels for the rows of a table")
    p.add_argument("--model", required=True)
    _data_args(p, label=False)
    p.add_argument("--format", choices=["text", "json"], default="text")

    p = sub.add_parser("explain", help="explain the prediction for one row")
    p.add_argument("--model", required=True)
    _data_args(p, label=False)
    p.add_argument("--row", type=int, default=0, help="0-based row index")
    p.add_argument("--format", choices=["text", "json", "dot"], default="text")
    p.add_argument("--mode", choices=["defended2", "defended3"], default="defended2",
                   help="defence notion for bipolar models")

    p = sub.add_parser("eval", help="repeated train/test evaluation")
    _data_args(p)
    _learn_args(p)
    p.add_argument("--runs", type=int, default=10)
    p.add_argument("--train-ratio", type=float, default=0.7)
    p.add_argument("--out", help="write the JSON report here")

    p = sub.add_parser("export", help="DOT rendering of a model's universal graph")
    p.add_argument("--model", required=True)
    p.add_argument("--out", help="write here instead of stdout")
    return parser


def _write(path, text):
    try:
        Path(path).write_text(text, encoding="utf-8")
    except OSError as exc:
        raise DataIOError(f"{path}: {exc}") from None


def cmd_learn(args) -> int:
    if args.iterations < 1:
        raise ConfigError("--iterations must be >= 1")
    table = load_table(args.data, args.label_column, args.positive_class, args.delimiter, args.drop)
    data = build_dataset(table, fit_schema(table, args.segments, args.nominal))
    model = Model.learn(data, SearchConfig(args.iterations, args.variant, args.seed), args.segments)
    model.save(args.out)
    t = model.training
    if args.summary:
        print(json.dumps({"model": args.out, **t}, sort_keys=True))
    else:
        print(f"train accuracy {t['train_accuracy']:.2f}%  edges {t['edges']}  iterations {t['iterations']}")
    return 0


def _input(args, model):
    table = load_table(args.data, model.label_column, model.positive_class, args.delimiter,
                       args.drop, allow_unlabelled=True)
    return table, model.dataset(table)


def cmd_predict(args) -> int:
    model = Model.load(args.model)
    table, data = _input(args, model)
    pred = model.predict(data)
    acc = model.accuracy(data) if table.labelled and len(data) else None
    if args.format == "json":
        print(json.dumps({"predictions": [bool(p) for p in pred], "accuracy": acc}))
    else:
        for p in pred:
            print("true" if p else "false")
        if acc is not None:
            print(f"# accuracy {acc:.2f}%", file=sys.stderr)
    return 0


def cmd_explain(args) -> int:
    model = Model.load(args.model)
    table, data = _input(args, model)
    if not 0 <= args.row < len(data):
        raise ConfigError(f"row {args.row} out of range (table has {len(data)} rows)")
    graph, expl = model.explain(data.instances[args.row].facts, args.mode)
    if args.format == "json":
        print(expl.to_json())
    elif args.format == "dot":
        sys.stdout.write(export_dot(graph, "contextual"))
    else:
        print(render(expl))
    return 0


def cmd_eval(args) -> int:
    table = load_table(args.data, args.label_column, args.positive_class, args.delimiter, args.drop)
    config = EvalConfig(args.runs, args.train_ratio, args.iterations, args.segments,
                        args.variant, args.seed, tuple(args.nominal))
    report = evaluate(table, config)
    if args.out:
        _write(args.out, report.dumps())
    for run in report.to_dict()["runs"]:
        print(f"run {run['run']}: test {run['test_accuracy']:.2f}%  train {run['train_accuracy']:.2f}%"
              f"  edges {run['edges']}")
    print(f"mean accuracy {report.summary()}")
    return 0


def cmd_export(args) -> int:
    model = Model.load(args.model)
    text = export_dot(model.matrix, "universal")
    if args.out:
        _write(args.out, text)
    else:
        sys.stdout.write(text)
    return 0


COMMANDS = {
    "learn": cmd_learn,
    "predict": cmd_predict,
    "explain": cmd_explain,
    "eval": cmd_eval,
    "export": cmd_export,
}


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING,
                        format="%(message)s", stream=sys.stderr)
    try:
        return COMMANDS[args.command](args)
    except ArgRulesError as exc:
        print(f"argrules: error: {exc}", file=sys.stderr)
        return exc.exit_code


if __name__ == "__main__":
    sys.exit(main())
