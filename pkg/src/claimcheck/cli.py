"""Command-line entry points: verify, train, evaluate, serve, metrics."""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

from .config import AppConfig
from .gbdt import GbdtParams, log_loss, prior_log_loss, train_gbdt
from .llm import LlmGateway, ProviderTranscript, ReplayProvider
from .metrics import load_feature_rows, micro_f1, rouge, run_cv
from .models import NewsArticle
from .pipeline import run_pipeline


def _cmd_verify(args: argparse.Namespace) -> int:
    config = AppConfig.load(args.config)
    payload = json.loads(Path(args.article).read_text(encoding="utf-8"))
    article = NewsArticle.from_dict(payload)
    gateway = config.build_gateway()
    if args.replay:
        gateway = LlmGateway(ReplayProvider(ProviderTranscript.load(args.replay)))
    report = run_pipeline(
        article,
        gateway,
        config.build_backends(),
        config.build_registry(),
        config.build_pipeline_config(args.mode),
    )
    text = report.to_json()
    if args.out:
        Path(args.out).write_text(text + "\n", encoding="utf-8")
    else:
        print(text)
    return 0


def _cmd_train(args: argparse.Namespace) -> int:
    rows = load_feature_rows(args.data)
    params = GbdtParams(
        n_rounds=args.rounds,
        max_depth=args.depth,
        learning_rate=args.learning_rate,
        min_leaf=args.min_leaf,
    )
    model = train_gbdt(rows, params)
    model.save(args.out)
    print(
        json.dumps(
            {
                "rows": len(rows),
                "trees": len(model.trees),
                "prior_log_loss": prior_log_loss(rows),
                "train_log_loss": log_loss(model, rows),
                "model_digest": model.digest(),
            },
            indent=2,
        )
    )
    return 0


def _cmd_evaluate(args: argparse.Namespace) -> int:
    rows = load_feature_rows(args.data)
    report = run_cv(rows, k=args.folds, seed=args.seed)
    print(report.format_table())
    if args.json_out:
        Path(args.json_out).write_text(report.to_json() + "\n", encoding="utf-8")
    return 0


def _cmd_serve(args: argparse.Namespace) -> int:
    import uvicorn

    from .service import create_app

    app = create_app(AppConfig.load(args.config))
    uvicorn.run(app, host=args.host, port=args.port)
    return 0


def _cmd_metrics(args: argparse.Namespace) -> int:
    if args.metric == "rouge":
        p, r, f1 = rouge(args.candidate, args.reference, args.variant)
        print(json.dumps({"variant": args.variant, "precision": p, "recall": r, "f1": f1}))
        return 0
    preds = [int(x) for x in args.preds.split(",")]
    golds = [int(x) for x in args.golds.split(",")]
    print(json.dumps({"micro_f1": micro_f1(preds, golds)}))
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="claimcheck", description="Retrieval-augmented news verification")
    sub = parser.add_subparsers(dest="command", required=True)

    p_verify = sub.add_parser("verify", help="verify one article file and print the report")
    p_verify.add_argument("article", help="JSON file with id/title/body fields")
    p_verify.add_argument("--config", required=True, help="config JSON path")
    p_verify.add_argument("--mode", choices=["main", "all"], default=None)
    p_verify.add_argument("--replay", default=None, help="provider transcript JSONL to replay")
    p_verify.add_argument("--out", default=None, help="write the report here instead of stdout")
    p_verify.set_defaults(func=_cmd_verify)

    p_train = sub.add_parser("train", help="train the verdict classifier")
    p_train.add_argument("--data", required=True, help="JSONL of {features, label}")
    p_train.add_argument("--out", required=True, help="model JSON output path")
    p_train.add_argument("--rounds", type=int, default=100)
    p_train.add_argument("--depth", type=int, default=4)
    p_train.add_argument("--learning-rate", type=float, default=0.1)
    p_train.add_argument("--min-leaf", type=int, default=5)
    p_train.set_defaults(func=_cmd_train)

    p_eval = sub.add_parser("evaluate", help="cross-validate the classifier on a dataset")
    p_eval.add_argument("--data", required=True, help="JSONL of {features, label}")
    p_eval.add_argument("--folds", type=int, default=5)
    p_eval.add_argument("--seed", type=int, default=0)
    p_eval.add_argument("--json-out", default=None)
    p_eval.set_defaults(func=_cmd_evaluate)

    p_serve = sub.add_parser("serve", help="run the HTTP service")
    p_serve.add_argument("--config", required=True)
    p_serve.add_argument("--host", default="127.0.0.1")
    p_serve.add_argument("--port", type=int, default=8080)
    p_serve.set_defaults(func=_cmd_serve)

    p_metrics = sub.add_parser("metrics", help="compute a metric from the command line")
    metric_sub = p_metrics.add_subparsers(dest="metric", required=True)
    p_rouge = metric_sub.add_parser("rouge")
    p_rouge.add_argument("candidate")
    p_rouge.add_argument("reference")
    p_rouge.add_argument("--variant", choices=["r1", "r2", "rl"], default="r1")
    p_rouge.set_defaults(func=_cmd_metrics)
    p_f1 = metric_sub.add_parser("f1")
    p_f1.add_argument("--preds", required=True, help="comma-separated 0/1 predictions")
    p_f1.add_argument("--golds", required=True, help="comma-separated 0/1 gold labels")
    p_f1.set_defaults(func=_cmd_metrics)

    return parser


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    return args.func(args)


if __name__ == "__main__":
    sys.exit(main())
