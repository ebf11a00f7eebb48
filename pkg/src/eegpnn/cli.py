"""Command-line front end.

Exit codes: 0 ok, 1 other pipeline error, 2 unparseable input, 3 missing
data, 4 model/feature mismatch, 64 usage error.
"""
from __future__ import annotations

import argparse
import csv
import io
import json
import os
import sys
import tempfile
from pathlib import Path

import numpy as np

from . import __version__
from .errors import (ConfigError, EEGPNNError, FeatureError, ModelMismatchError,
                     ParseError)
from .evaluation import (EXPERIMENTS, build_experiment, experiment_from_tables,
                         get_experiment, loo_cv_table)
from .features import (N_FEATURES, FeatureTable, extract_features, extract_many,
                       features_to_csv, preprocess, read_features_csv)
from .normalize import METHODS
from .normalize import apply as apply_norm
from .normalize import fit as fit_norm
from .pnn import DEFAULT_SPREAD, PnnModel, train
from .signal_io import (BONN_SAMPLE_RATE, SET_TAGS, default_synthetic_manifest,
                        corpus_from_manifest, find_set_dir, load_bonn_corpus,
                        load_bonn_dir, read_bonn_file, read_manifest,
                        shipped_manifest_path, write_corpus, write_manifest)
from .timedomain import DEFAULT_K_MAX, HfdConfig

EXIT_OK, EXIT_ERROR, EXIT_PARSE, EXIT_MISSING, EXIT_MISMATCH, EXIT_USAGE = 0, 1, 2, 3, 4, 64
DATA_ENV = "EEGPNN_DATA"
DEFAULT_SPREADS = "0.01,0.05,0.1,0.5,1.0"


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_USAGE, f"{self.prog}: error: {message}\n")


def _positive_float(s):
    try:
        v = float(s)
    except ValueError:
        raise argparse.ArgumentTypeError(f"not a number: {s!r}") from None
    if not (v > 0 and np.isfinite(v)):
        raise argparse.ArgumentTypeError(f"must be a positive number, got {s}")
    return v


def _int_at_least(lo):
    def conv(s):
        try:
            v = int(s)
        except ValueError:
            raise argparse.ArgumentTypeError(f"not an integer: {s!r}") from None
        if v < lo:
            raise argparse.ArgumentTypeError(f"must be >= {lo}, got {v}")
        return v
    return conv


def _spread_list(s):
    try:
        vals = [float(v) for v in s.split(",") if v.strip()]
    except ValueError:
        raise argparse.ArgumentTypeError(f"bad spread list {s!r}") from None
    if not vals or any(not v > 0 for v in vals):
        raise argparse.ArgumentTypeError("spreads must be a comma-separated list of positive numbers")
    return vals


def _on_off(s):
    if s.lower() in ("on", "yes", "true", "1"):
        return True
    if s.lower() in ("off", "no", "false", "0"):
        return False
    raise argparse.ArgumentTypeError(f"expected on|off, got {s!r}")


def _pipeline_args(p):
    p.add_argument("--lowpass", type=_on_off, default=True, metavar="on|off",
                   help="apply the 40 Hz brick-wall low-pass before extraction (default on)")
    p.add_argument("--k-max", type=_int_at_least(2), default=DEFAULT_K_MAX,
                   help="largest Higuchi scale (default 5)")
    p.add_argument("--sample-rate", type=_positive_float, default=BONN_SAMPLE_RATE,
                   help="sampling rate of text segment files in Hz (default 173.61)")
    p.add_argument("--threads", type=_int_at_least(1), default=1,
                   help="worker threads for feature extraction")


def _source_args(p):
    src = p.add_mutually_exclusive_group()
    src.add_argument("--data", type=Path,
                     help=f"Bonn corpus root with one directory per set (default ${DATA_ENV})")
    src.add_argument("--synthetic", nargs="?", const="shipped", metavar="MANIFEST",
                     help="use a synthetic corpus manifest (the shipped one if no path)")
    src.add_argument("--features", nargs="+", type=Path, metavar="CSV",
                     help="feature CSVs from `extract`; the label column holds the set tag")
    _pipeline_args(p)


def build_parser():
    parser = _Parser(prog="eegpnn", description="EEG features + probabilistic neural network.")
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = parser.add_subparsers(dest="command", parser_class=_Parser)
    sub.required = True

    p = sub.add_parser("extract", help="write the 38-feature CSV of one set")
    p.add_argument("--set", dest="set_tag", required=True, choices=SET_TAGS)
    src = p.add_mutually_exclusive_group(required=True)
    src.add_argument("--in", dest="in_dir", type=Path, help="directory of segment text files")
    src.add_argument("--manifest", help="synthetic manifest ('shipped' for the bundled one)")
    p.add_argument("--out", type=Path, required=True)
    _pipeline_args(p)

    for name, helptext in (("cv", "leave-one-out cross-validation of one experiment"),
                           ("sweep", "LOO-CV accuracy over a list of spreads"),
                           ("train", "train a model on every segment of one experiment")):
        p = sub.add_parser(name, help=helptext)
        p.add_argument("--experiment", type=int, required=True, choices=sorted(EXPERIMENTS))
        p.add_argument("--norm", choices=METHODS, default="zscore")
        p.add_argument("--out", type=Path, required=name != "cv")
        _source_args(p)
        if name == "sweep":
            p.add_argument("--spreads", type=_spread_list, default=_spread_list(DEFAULT_SPREADS))
        else:
            p.add_argument("--spread", type=_positive_float, default=DEFAULT_SPREAD)

    p = sub.add_parser("classify", help="classify one segment file with a saved model")
    p.add_argument("--model", type=Path, required=True)
    p.add_argument("--segment", type=Path, required=True)

    p = sub.add_parser("synth", help="write a synthetic corpus in Bonn directory layout")
    p.add_argument("--out", type=Path, required=True)
    p.add_argument("--seed", type=int, default=None,
                   help="regenerate the manifest from this seed instead of using the shipped one")
    return parser


# --------------------------------------------------------------------------
# helpers


def _write_atomic(path: Path, text: str):
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    fd, tmp = tempfile.mkstemp(dir=path.parent, prefix=f".{path.name}.")
    try:
        with os.fdopen(fd, "w", encoding="utf-8", newline="") as fh:
            fh.write(text)
        os.replace(tmp, path)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise


def _manifest(arg):
    return read_manifest(shipped_manifest_path() if arg in (None, "shipped") else arg)


def _cfg(args):
    return HfdConfig(args.k_max)


def _experiment_table(args):
    exp = get_experiment(args.experiment)
    if args.features:
        tables = {}
        for path in args.features:
            if not path.is_file():
                raise ConfigError(f"feature file not found: {path}")
            t = read_features_csv(path)
            for tag in sorted(set(t.labels)):
                if tag not in SET_TAGS:
                    raise ParseError(f"label {tag!r} is not a set tag", path)
                idx = [i for i, lab in enumerate(t.labels) if lab == tag]
                part = FeatureTable(t.X[idx], [tag] * len(idx), [t.source_ids[i] for i in idx])
                if tag in tables:
                    prev = tables[tag]
                    part = FeatureTable(np.vstack([prev.X, part.X]), prev.labels + part.labels,
                                        prev.source_ids + part.source_ids)
                tables[tag] = part
        return exp, experiment_from_tables(exp, tables), None
    if args.synthetic:
        corpus = corpus_from_manifest(_manifest(args.synthetic))
    else:
        root = args.data or (Path(os.environ[DATA_ENV]) if os.environ.get(DATA_ENV) else None)
        if root is None:
            raise ConfigError(f"no data source: pass --data, --synthetic or --features, or set ${DATA_ENV}")
        if not root.is_dir():
            raise ConfigError(f"data directory not found: {root}")
        missing = [t for t in exp.sets if find_set_dir(root, t) is None]
        if missing:
            raise ConfigError(f"experiment {exp.id} needs sets {missing}, not found under {root}")
        corpus = load_bonn_corpus(root, exp.sets, args.sample_rate)
    n_samples = corpus[exp.sets[0]][0].n_samples if corpus.get(exp.sets[0]) else None
    return exp, build_experiment(exp, corpus, args.lowpass, _cfg(args), args.threads), n_samples


def _pipeline_meta(args, exp, n_samples=None):
    meta = {"experiment": exp.id, "k_max": args.k_max, "sample_rate_hz": args.sample_rate}
    if not args.features:
        meta["lowpass"] = args.lowpass
    if n_samples is not None:
        meta["n_samples"] = n_samples
    return meta


# --------------------------------------------------------------------------
# commands


def cmd_extract(args):
    if args.manifest:
        corpus = corpus_from_manifest(_manifest(args.manifest))
        segments = corpus.get(args.set_tag, [])
    else:
        if not args.in_dir.is_dir():
            raise ConfigError(f"input directory not found: {args.in_dir}")
        segments = load_bonn_dir(args.in_dir, args.set_tag, args.sample_rate)
    X = extract_many(segments, _cfg(args), lowpass=args.lowpass, threads=args.threads)
    table = FeatureTable(X, [args.set_tag] * len(segments), [s.source_id for s in segments])
    _write_atomic(args.out, features_to_csv(table))
    print(f"wrote {len(table)} rows to {args.out}")
    return EXIT_OK


def cmd_cv(args):
    exp, table, _ = _experiment_table(args)
    report = loo_cv_table(table, exp, args.spread, args.norm)
    d = report.to_dict()
    d["pipeline"] = _pipeline_meta(args, exp)
    if args.out:
        _write_atomic(args.out, json.dumps(d, indent=1) + "\n")
    print(f"experiment {exp.id} ({exp.name}): accuracy {report.accuracy:.4f} "
          f"on {report.n_samples} samples, spread {args.spread:g}, "
          f"median classify time {report.median_fold_time * 1e3:.3f} ms")
    return EXIT_OK


def sweep_csv(rows):
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(["spread", "accuracy"])
    for s, acc in rows:
        w.writerow([format(s, ".17g"), format(acc, ".17g")])
    return buf.getvalue()


def cmd_sweep(args):
    exp, table, _ = _experiment_table(args)
    reports = [loo_cv_table(table, exp, s, args.norm) for s in args.spreads]
    rows = [(r.spread, r.accuracy) for r in reports]
    plot = {"experiment": exp.id, "spread": [r[0] for r in rows], "accuracy": [r[1] for r in rows],
            "pipeline": _pipeline_meta(args, exp)}
    _write_atomic(args.out, sweep_csv(rows))
    _write_atomic(args.out.with_suffix(".json"), json.dumps(plot, indent=1) + "\n")
    for s, acc in rows:
        print(f"spread {s:g}: accuracy {acc:.4f}")
    return EXIT_OK


def cmd_train(args):
    exp, table, n_samples = _experiment_table(args)
    stats = fit_norm(table.X, args.norm)
    model = train(apply_norm(stats, table.X), table.labels, len(exp.class_sets), args.spread, stats,
                  class_names=exp.class_names, metadata=_pipeline_meta(args, exp, n_samples))
    _write_atomic(args.out, json.dumps(model.to_dict(), indent=1) + "\n")
    print(f"trained on {model.n_stored} segments ({exp.name}), wrote {args.out}")
    return EXIT_OK


def cmd_classify(args):
    if not args.model.is_file():
        raise ConfigError(f"model file not found: {args.model}")
    if not args.segment.is_file():
        raise ConfigError(f"segment file not found: {args.segment}")
    model = PnnModel.load(args.model)
    if model.n_features != N_FEATURES:
        raise ModelMismatchError(f"model has {model.n_features} features, the pipeline produces {N_FEATURES}")
    meta = model.metadata
    seg = read_bonn_file(args.segment, meta.get("sample_rate_hz", BONN_SAMPLE_RATE))
    expected = meta.get("n_samples")
    if expected is not None and seg.n_samples != expected:
        raise ParseError(f"segment has {seg.n_samples} samples, model was trained on {expected}",
                         args.segment)
    seg = preprocess(seg, bool(meta.get("lowpass", True)))
    v = extract_features(seg, HfdConfig(meta.get("k_max", DEFAULT_K_MAX)))
    winner, tr = model.classify_raw(v)
    names = model.class_names or tuple(str(k) for k in range(model.n_classes))
    share = tr.relative_scores / tr.relative_scores.sum()
    print(f"class {winner} {names[winner]}")
    for k, name in enumerate(names):
        print(f"  {name}: score {tr.scores[k]:.6g} share {share[k]:.6f}")
    return EXIT_OK


def cmd_synth(args):
    manifest = (default_synthetic_manifest(seed=args.seed) if args.seed is not None
                else _manifest("shipped"))
    corpus = corpus_from_manifest(manifest)
    write_corpus(corpus, args.out)
    write_manifest(manifest, Path(args.out) / "manifest.json")
    print(f"wrote {sum(len(v) for v in corpus.values())} segments under {args.out}")
    return EXIT_OK


COMMANDS = {"extract": cmd_extract, "cv": cmd_cv, "sweep": cmd_sweep, "train": cmd_train,
            "classify": cmd_classify, "synth": cmd_synth}


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return COMMANDS[args.command](args)
    except ParseError as exc:
        return _fail(exc, EXIT_PARSE)
    except FeatureError as exc:
        return _fail(exc, EXIT_ERROR)
    except ModelMismatchError as exc:
        return _fail(exc, EXIT_MISMATCH)
    except (ConfigError, FileNotFoundError) as exc:
        return _fail(exc, EXIT_MISSING)
    except OSError as exc:
        return _fail(exc, EXIT_PARSE)
    except EEGPNNError as exc:
        return _fail(exc, EXIT_ERROR)


def _fail(exc, code):
    print(f"eegpnn: error: {exc}", file=sys.stderr)
    return code


if __name__ == "__main__":
    sys.exit(main())
