"""Command-line entry point.

    slm-service train --input RECORDS.jsonl --output MODEL_DIR [hyperparams]
    slm-service predict --model MODEL_DIR --input RECORDS.jsonl --output PREDS.jsonl
    slm-service serve --model MODEL_DIR [--host H] [--port N]
"""

import argparse
import logging
import sys

from .encoder import DEFAULT_ENCODER


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="slm-service", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)

    p_train = sub.add_parser("train", help="fine-tune the classifier")
    p_train.add_argument("--input", required=True, help="record-per-line training file")
    p_train.add_argument("--output", required=True, help="model artifact directory")
    p_train.add_argument("--encoder", default=DEFAULT_ENCODER,
                         help=f"encoder id or 'local-mini' (default: {DEFAULT_ENCODER})")
    p_train.add_argument("--lr", type=float, default=2e-5)
    p_train.add_argument("--batch-size", type=int, default=16)
    p_train.add_argument("--epochs", type=int, default=3)
    p_train.add_argument("--seed", type=int, default=13)
    p_train.add_argument("--max-length", type=int, default=256)

    p_predict = sub.add_parser("predict", help="batch inference")
    p_predict.add_argument("--model", required=True)
    p_predict.add_argument("--input", required=True)
    p_predict.add_argument("--output", required=True)

    p_serve = sub.add_parser("serve", help="HTTP inference service")
    p_serve.add_argument("--model", required=True)
    p_serve.add_argument("--host", default="127.0.0.1")
    p_serve.add_argument("--port", type=int, default=8100)
    return parser


def main(argv=None) -> int:
    logging.basicConfig(level=logging.INFO, stream=sys.stderr)
    args = build_parser().parse_args(argv)

    if args.command == "train":
        from .records import read_records
        from .train import DataError, TrainConfig, train

        config = TrainConfig(
            encoder=args.encoder,
            learning_rate=args.lr,
            batch_size=args.batch_size,
            epochs=args.epochs,
            seed=args.seed,
            max_length=args.max_length,
        )
        try:
            result = train(read_records(args.input), config, args.output)
        except DataError as exc:
            print(f"data error: {exc}", file=sys.stderr)
            return 2
        print(f"train accuracy {result.train_accuracy:.4f} over {result.n_records} records")
        return 0

    if args.command == "predict":
        from .predict import load_model, predict
        from .records import read_records, write_predictions

        records = read_records(args.input)
        predictions = predict(records, load_model(args.model))
        true_labels = {r.id: r.pseudo_label for r in records if r.pseudo_label}
        write_predictions(predictions, args.output, true_labels)
        print(f"wrote {len(predictions)} predictions to {args.output}")
        return 0

    if args.command == "serve":
        import uvicorn

        from .server import create_app

        uvicorn.run(create_app(args.model), host=args.host, port=args.port)
        return 0

    return 1


if __name__ == "__main__":
    sys.exit(main())
