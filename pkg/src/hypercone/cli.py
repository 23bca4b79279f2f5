"""Command-line front end: build, score, eval, adaptive-k, synth, sweep.

Reports go to stdout as one ``key=value`` pair per line; files follow the
formats in the io module. Exit codes: 0 success, 2 usage or input error
(message names the cause), 1 internal failure.
"""

from __future__ import annotations

import argparse
import sys

import numpy as np

from . import io as hio
from .adaptive import adaptive_k_record
from .contour import _ADAPTIVE_STREAM, BuildConfig, build
from .errors import HyperconeError, LabelMismatchError
from .geometry import EmbeddingSet
from .metrics import evaluate
from .scoring import score_batch
from .synth import MixtureSpec, gaussian_mixture, ring_means, shell_ood, uniform_box


def _parse_k(text: str) -> int | str:
    if text == "adaptive":
        return "adaptive"
    try:
        value = int(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"--k must be a positive integer or 'adaptive', got {text!r}")
    if value < 1:
        raise argparse.ArgumentTypeError(f"--k must be a positive integer or 'adaptive', got {text!r}")
    return value


def _parse_k_list(text: str) -> list[int]:
    items = [part for part in text.split(",") if part.strip()]
    if not items:
        raise argparse.ArgumentTypeError("--k-list must name at least one k")
    try:
        values = [int(part) for part in items]
    except ValueError:
        raise argparse.ArgumentTypeError(f"--k-list must be comma-separated integers, got {text!r}")
    if any(v < 1 for v in values):
        raise argparse.ArgumentTypeError("--k-list entries must be positive")
    return values


def _parse_center(text: str) -> np.ndarray:
    try:
        return np.asarray([float(part) for part in text.split(",")], dtype=np.float64)
    except ValueError:
        raise argparse.ArgumentTypeError(f"--center must be comma-separated floats, got {text!r}")


def _add_build_flags(parser: argparse.ArgumentParser, with_k: bool = True) -> None:
    if with_k:
        parser.add_argument("--k", type=_parse_k, default="adaptive",
                            help="neighbor count, or 'adaptive' for per-class selection")
    parser.add_argument("--tpr", type=float, default=0.95, help="calibration TPR target in (0,1)")
    parser.add_argument("--sigma", type=float, default=2.0,
                        help="std-dev multiplier of the radial boundary")
    parser.add_argument("--lambda-mode", choices=["per_observation", "pooled"],
                        default="per_observation")
    parser.add_argument("--centroid-snap", action="store_true",
                        help="snap each centroid to its nearest train observation")
    parser.add_argument("--axis-mode", choices=["data", "random"], default="data")
    parser.add_argument("--seed", type=int, default=0)


def _add_common(parser: argparse.ArgumentParser) -> None:
    parser.add_argument("--threads", type=int, default=0, help="worker threads, 0 = auto")


def _load_labeled(emb_path: str, label_path: str, what: str) -> EmbeddingSet:
    embeddings = hio.read_embeddings(emb_path)
    labels = hio.read_labels(label_path)
    if labels.shape[0] != embeddings.n:
        raise LabelMismatchError(
            f"{what}: {embeddings.n} embeddings but {labels.shape[0]} labels"
        )
    return EmbeddingSet(embeddings.data, labels)


def _config_from_args(args) -> BuildConfig:
    return BuildConfig(
        k=args.k,
        sigma_multiplier=args.sigma,
        tpr_target=args.tpr,
        centroid_snap=args.centroid_snap,
        lambda_mode=args.lambda_mode,
        axis_mode=args.axis_mode,
        seed=args.seed,
    )


def _emit(key: str, value) -> None:
    if isinstance(value, float):
        print(f"{key}={value:.17g}")
    else:
        print(f"{key}={value}")


def _cmd_build(args) -> int:
    train = _load_labeled(args.train, args.train_labels, "train")
    test = _load_labeled(args.test, args.test_labels, "test")
    result = build(train, test, _config_from_args(args), threads=args.threads)
    hio.save_model(args.model, result.model)
    _emit("model", args.model)
    _emit("labels", result.model.label_count)
    _emit("dim", result.model.dim)
    _emit("lambda", result.model.lam)
    _emit("calibration_tpr", result.calibration_tpr)
    for record in result.class_records:
        _emit(f"class_{record.label}_k", record.k)
        _emit(f"class_{record.label}_cones", record.cone_count)
    if args.adaptive_report:
        records = [r.adaptive for r in result.class_records if r.adaptive is not None]
        if records:
            _write_adaptive_csv(args.adaptive_report, records)
            _emit("adaptive_report", args.adaptive_report)
    return 0


def _cmd_score(args) -> int:
    model = hio.load_model(args.model)
    batch = hio.read_embeddings(args.input)
    results = score_batch(model, batch, threads=args.threads)
    hio.write_scores(args.out, results)
    _emit("scored", len(results))
    _emit("id_fraction", float(np.mean([r.is_id for r in results])) if results else 0.0)
    _emit("out", args.out)
    return 0


def _cmd_eval(args) -> int:
    model = hio.load_model(args.model)
    id_batch = hio.read_embeddings(args.id)
    ood_batch = hio.read_embeddings(args.ood)
    id_results = score_batch(model, id_batch, threads=args.threads)
    ood_results = score_batch(model, ood_batch, threads=args.threads)
    if args.id_scores_out:
        hio.write_scores(args.id_scores_out, id_results)
    if args.ood_scores_out:
        hio.write_scores(args.ood_scores_out, ood_results)
    report = evaluate(
        [r.score for r in id_results], [r.score for r in ood_results], tpr=args.tpr
    )
    for key, value in report.to_dict().items():
        _emit(key, value)
    _emit("model_lambda", model.lam)
    _emit("id_decision_rate", float(np.mean([r.is_id for r in id_results])))
    _emit("ood_decision_rate", float(np.mean([r.is_id for r in ood_results])))
    if args.report_csv:
        _write_report_csv(args.report_csv, [("eval", report)])
    return 0


def _write_report_csv(path: str, rows) -> None:
    header = None
    lines = []
    for tag, report in rows:
        data = report.to_dict()
        if header is None:
            header = ["tag"] + list(data)
            lines.append(",".join(header))
        lines.append(",".join([str(tag)] + [f"{v:.17g}" if isinstance(v, float) else str(v) for v in data.values()]))
    hio.atomic_write(path, ("\n".join(lines) + "\n").encode())


def _write_adaptive_csv(path: str, records) -> None:
    lines = ["label,n,d,k_upper,zeta,density_ratio,k_final,skipped_class,skipped_uniform,seed"]
    for r in records:
        lines.append(
            f"{r.label},{r.n},{r.d},{r.k_upper},{r.zeta:.17g},{r.density_ratio:.17g},"
            f"{r.k_final},{r.skipped_class},{r.skipped_uniform},{r.seed}"
        )
    hio.atomic_write(path, ("\n".join(lines) + "\n").encode())


def _cmd_adaptive_k(args) -> int:
    train = _load_labeled(args.train, args.train_labels, "train")
    records = []
    for label in train.label_universe().tolist():
        rows = train.rows_for(label)
        records.append(
            adaptive_k_record(
                rows,
                np.random.SeedSequence((args.seed, int(label), _ADAPTIVE_STREAM)),
                centroid_snap=args.centroid_snap,
                label=int(label),
                seed_echo=args.seed,
            )
        )
    _write_adaptive_csv(args.out, records)
    for record in records:
        _emit(f"class_{record.label}_k", record.k_final)
    _emit("out", args.out)
    return 0


def _cmd_synth(args) -> int:
    if args.kind == "mixture":
        means = ring_means(args.components, args.radius, args.dim)
        spec = MixtureSpec(means=means, sigma=args.sigma, n=args.n, seed=args.seed,
                           label=args.label)
        dataset = gaussian_mixture(spec)
    elif args.kind == "uniform":
        dataset = uniform_box(args.n, args.dim, args.lo, args.hi, args.seed)
    else:
        center = args.center if args.center is not None else np.zeros(args.dim)
        dataset = shell_ood(args.n, args.dim, center, args.inner, args.outer, args.seed)
    hio.write_embeddings(args.out, dataset.data, dtype=args.dtype)
    _emit("out", args.out)
    if args.labels_out:
        if dataset.labels is None:
            labels = np.full(dataset.n, args.label, dtype=np.int64)
        else:
            labels = dataset.labels
        hio.write_labels(args.labels_out, labels)
        _emit("labels_out", args.labels_out)
    _emit("n", dataset.n)
    _emit("dim", dataset.d)
    return 0


def _cmd_sweep(args) -> int:
    train = _load_labeled(args.train, args.train_labels, "train")
    test = _load_labeled(args.test, args.test_labels, "test")
    ood = hio.read_embeddings(args.ood)
    rows = []
    for k in args.k_list:
        config = BuildConfig(
            k=k, sigma_multiplier=args.sigma, tpr_target=args.tpr,
            centroid_snap=args.centroid_snap, lambda_mode=args.lambda_mode,
            axis_mode=args.axis_mode, seed=args.seed,
        )
        rows.append((str(k), _sweep_point(train, test, ood, config, args)))
    if args.include_adaptive:
        config = BuildConfig(
            k="adaptive", sigma_multiplier=args.sigma, tpr_target=args.tpr,
            centroid_snap=args.centroid_snap, lambda_mode=args.lambda_mode,
            axis_mode=args.axis_mode, seed=args.seed,
        )
        rows.append(("adaptive", _sweep_point(train, test, ood, config, args)))
    lines = ["k,fpr_at_tpr,auroc"]
    for tag, report in rows:
        lines.append(f"{tag},{report.fpr_at_tpr:.17g},{report.auroc:.17g}")
        _emit(f"k_{tag}_fpr", report.fpr_at_tpr)
        _emit(f"k_{tag}_auroc", report.auroc)
    if args.out:
        hio.atomic_write(args.out, ("\n".join(lines) + "\n").encode())
        _emit("out", args.out)
    return 0


def _sweep_point(train, test, ood, config, args):
    result = build(train, test, config, threads=args.threads)
    id_scores = [r.score for r in score_batch(result.model, test, threads=args.threads)]
    ood_scores = [r.score for r in score_batch(result.model, ood, threads=args.threads)]
    return evaluate(id_scores, ood_scores, tpr=config.tpr_target)


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="hypercone",
        description="Hypercone contours over embedding spaces for OOD detection.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p_build = sub.add_parser("build", help="construct and save a contour model")
    p_build.add_argument("--train", required=True, help="train embeddings (.npy/.csv)")
    p_build.add_argument("--train-labels", required=True)
    p_build.add_argument("--test", required=True, help="ID test embeddings used in calibration")
    p_build.add_argument("--test-labels", required=True)
    p_build.add_argument("--model", required=True, help="output model path")
    p_build.add_argument("--adaptive-report", default=None,
                         help="optional CSV of per-class adaptive-k diagnostics")
    _add_build_flags(p_build)
    _add_common(p_build)
    p_build.set_defaults(func=_cmd_build)

    p_score = sub.add_parser("score", help="score embeddings against a saved model")
    p_score.add_argument("--model", required=True)
    p_score.add_argument("--input", required=True)
    p_score.add_argument("--out", required=True, help="score CSV output path")
    _add_common(p_score)
    p_score.set_defaults(func=_cmd_score)

    p_eval = sub.add_parser("eval", help="FPR@TPR and AUROC for ID vs OOD files")
    p_eval.add_argument("--model", required=True)
    p_eval.add_argument("--id", required=True, help="ID embeddings (.npy/.csv)")
    p_eval.add_argument("--ood", required=True, help="OOD embeddings (.npy/.csv)")
    p_eval.add_argument("--tpr", type=float, default=0.95)
    p_eval.add_argument("--id-scores-out", default=None)
    p_eval.add_argument("--ood-scores-out", default=None)
    p_eval.add_argument("--report-csv", default=None)
    _add_common(p_eval)
    p_eval.set_defaults(func=_cmd_eval)

    p_ak = sub.add_parser("adaptive-k", help="per-class adaptive-k diagnostics CSV")
    p_ak.add_argument("--train", required=True)
    p_ak.add_argument("--train-labels", required=True)
    p_ak.add_argument("--out", required=True)
    p_ak.add_argument("--seed", type=int, default=0)
    p_ak.add_argument("--centroid-snap", action="store_true")
    p_ak.set_defaults(func=_cmd_adaptive_k)

    p_synth = sub.add_parser("synth", help="generate synthetic datasets")
    p_synth.add_argument("--kind", choices=["mixture", "uniform", "shell"], required=True)
    p_synth.add_argument("--n", type=int, required=True)
    p_synth.add_argument("--dim", type=int, default=2)
    p_synth.add_argument("--seed", type=int, default=0)
    p_synth.add_argument("--out", required=True)
    p_synth.add_argument("--labels-out", default=None)
    p_synth.add_argument("--label", type=int, default=0)
    p_synth.add_argument("--dtype", choices=["<f4", "<f8"], default="<f8")
    p_synth.add_argument("--components", type=int, default=5, help="mixture lobes")
    p_synth.add_argument("--radius", type=float, default=1.5, help="mixture mean ring radius")
    p_synth.add_argument("--sigma", type=float, default=0.5, help="mixture lobe std dev")
    p_synth.add_argument("--lo", type=float, default=0.0, help="uniform lower bound")
    p_synth.add_argument("--hi", type=float, default=1.0, help="uniform upper bound")
    p_synth.add_argument("--center", type=_parse_center, default=None, help="shell center")
    p_synth.add_argument("--inner", type=float, default=4.0, help="shell inner radius")
    p_synth.add_argument("--outer", type=float, default=6.0, help="shell outer radius")
    p_synth.set_defaults(func=_cmd_synth)

    p_sweep = sub.add_parser("sweep", help="rebuild per k and evaluate against an OOD file")
    p_sweep.add_argument("--train", required=True)
    p_sweep.add_argument("--train-labels", required=True)
    p_sweep.add_argument("--test", required=True)
    p_sweep.add_argument("--test-labels", required=True)
    p_sweep.add_argument("--ood", required=True)
    p_sweep.add_argument("--k-list", type=_parse_k_list, required=True,
                         help="comma-separated k values")
    p_sweep.add_argument("--include-adaptive", action="store_true")
    p_sweep.add_argument("--out", default=None, help="CSV of (k, fpr, auroc)")
    _add_build_flags(p_sweep, with_k=False)
    _add_common(p_sweep)
    p_sweep.set_defaults(func=_cmd_sweep)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:  # argparse exits 2 on usage errors already
        return int(exc.code or 0)
    try:
        return args.func(args)
    except (HyperconeError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except Exception as exc:  # pragma: no cover - internal failure path
        print(f"internal error: {exc!r}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    raise SystemExit(main())
