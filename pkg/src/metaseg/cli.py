"""Command-line interface.

Exit status: 0 on success, 1 when input fails validation (or a check
fails), 2 on usage errors.
"""

from __future__ import annotations

import argparse
import json
import math
import sys

import numpy as np

from . import __version__
from .checks import GRAD_TOL, gradcheck, oracle_check
from .corpus_io import dumps_corpus, generate_synthetic, load_corpus
from .errors import SegmentationIncomplete, ValidationError
from .grammar import default_grammar, read_grammar
from .gumbel import sample_many
from .intervals import build_table
from .metrics import DEFAULT_DTH, summarize
from .segmenter import corpus_stats, segment

METRIC_NAMES = ("SR", "GC", "PLW-SR", "PLW-GC", "PC", "LS", "CLS")
GLOBAL_DEFAULTS = {"grammar": None, "seed": 0, "format": "tsv"}


def _grammar(args):
    if args.grammar is None:
        return default_grammar()
    try:
        return read_grammar(args.grammar)
    except OSError as exc:
        raise ValidationError(f"cannot read grammar {args.grammar}: {exc.strerror or exc}")


def _emit(out, lines):
    for line in lines:
        out.write(line + "\n")


def _emit_json(out, obj):
    out.write(json.dumps(obj, indent=1) + "\n")


def _segment_all(g, corpus):
    segs = []
    for i, ep in enumerate(corpus):
        try:
            segs.append(segment(g, ep.letters))
        except SegmentationIncomplete as exc:
            raise SegmentationIncomplete(exc.index, trajectory_index=i) from None
    return segs


def cmd_segment(args, out):
    g = _grammar(args)
    corpus = load_corpus(args.corpus)
    segs = _segment_all(g, corpus)
    stats = corpus_stats(g, [ep.letters for ep in corpus]) if args.stats else None
    if args.format == "json":
        obj = {
            "segmentations": [
                {"id": ep.id, "segments": s.to_json(g)} for ep, s in zip(corpus, segs)
            ]
        }
        if stats is not None:
            obj["stats"] = stats.to_json(g)
        _emit_json(out, obj)
    else:
        _emit(out, (f"{ep.id}\t{s.format(g)}" for ep, s in zip(corpus, segs)))
        if stats is not None:
            _emit(out, stats.lines(g))
    return 0


def cmd_table(args, out):
    g = _grammar(args)
    if (args.letters is None) == (args.corpus is None):
        raise _Usage("table needs exactly one of CORPUS or --letters")
    if args.letters is not None:
        items = [(None, args.letters)]
    else:
        items = [(ep.id, ep.letters) for ep in load_corpus(args.corpus)]
    tables = [(ep_id, build_table(g, letters)) for ep_id, letters in items]
    if args.format == "json":
        _emit_json(
            out,
            [
                {
                    "id": ep_id,
                    "length": t.length,
                    "entries": [
                        {"meta": g[m].name, "start": s, "end": e} for m, s, e in t.sorted_entries()
                    ],
                }
                for ep_id, t in tables
            ],
        )
    else:
        for ep_id, t in tables:
            if ep_id is not None:
                out.write(f"# {ep_id}\n")
            _emit(out, t.lines(g))
    return 0


def cmd_stats(args, out):
    g = _grammar(args)
    corpus = load_corpus(args.corpus)
    letters = [ep.letters for ep in corpus]
    stats = corpus_stats(g, letters)
    if args.format == "json":
        _emit_json(out, stats.to_json(g))
    else:
        _emit(out, stats.lines(g))
    if args.figures:
        from . import report

        segs = [segment(g, a) for a in letters]
        report.plot_meta_histogram(stats, g, args.figures)
        report.plot_lengths([len(a) for a in letters], [s.count for s in segs], args.figures)
    return 0


def cmd_metrics(args, out):
    corpus = load_corpus(args.results)
    results = [ep.result() for ep in corpus]
    summary = summarize(results, args.dth)
    values = {k: summary[k] for k in METRIC_NAMES}
    if args.format == "json":
        _emit_json(out, {k: (None if math.isnan(v) else round(v, 4)) for k, v in values.items()})
    else:
        _emit(out, (f"{k}\t{v:.4f}" for k, v in values.items()))
    if args.figures:
        from . import report

        report.plot_metrics(values, args.figures)
        for ep in corpus:
            if ep.pred_path and ep.ref_path:
                report.plot_paths(ep.pred_path, ep.ref_path, args.figures, title=ep.id)
                break
    return 0


def cmd_gradcheck(args, out):
    worst = gradcheck(args.batches, args.seed, args.inter)
    ok = all(v < args.tol for v in worst.values())
    if args.format == "json":
        _emit_json(out, {"max_relative_error": worst, "tolerance": args.tol, "ok": ok})
    else:
        _emit(out, (f"{k}\t{v:.3e}" for k, v in worst.items()))
        out.write(f"result\t{'PASS' if ok else 'FAIL'}\n")
    return 0 if ok else 1


def _floats(text):
    try:
        vals = [float(x) for x in text.split(",")]
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected comma-separated numbers, got {text!r}")
    return vals


def cmd_gumbel(args, out):
    relaxed, hard = sample_many(args.logits, args.tau, args.draws, args.seed)
    K = len(args.logits)
    freq = np.bincount(hard, minlength=K) / max(args.draws, 1)
    sum_err = float(np.abs(relaxed.sum(axis=1) - 1.0).max(initial=0.0))
    if args.format == "json":
        _emit_json(out, {"frequencies": freq.tolist(), "max_sum_error": sum_err})
    else:
        _emit(out, (f"freq[{k}]\t{f:.6f}" for k, f in enumerate(freq)))
        out.write(f"max_sum_error\t{sum_err:.3e}\n")
    return 0


def cmd_oracle_check(args, out):
    g = _grammar(args)
    rep = oracle_check(g, args.max_len, args.random, args.seed)
    if args.format == "json":
        _emit_json(
            out,
            {
                "strings": rep.strings,
                "count_mismatches": rep.count_mismatches[:20],
                "segmentation_mismatches": rep.segmentation_mismatches[:20],
                "table_mismatches": rep.table_mismatches[:20],
                "lossless_failures": rep.lossless_failures[:20],
                "ok": rep.ok,
            },
        )
    else:
        _emit(out, rep.lines())
    return 0 if rep.ok else 1


def cmd_gen(args, out):
    corpus = generate_synthetic(args.seed, args.n, args.mean_len)
    text = dumps_corpus(corpus)
    if args.output:
        with open(args.output, "w", encoding="utf-8") as fh:
            fh.write(text)
    else:
        out.write(text)
    return 0


class _Usage(Exception):
    pass


def _positive_int(text):
    v = int(text)
    if v < 1:
        raise argparse.ArgumentTypeError("must be >= 1")
    return v


def build_parser():
    # shared flags are accepted before or after the subcommand
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--grammar", metavar="PATH", default=argparse.SUPPRESS,
                        help="grammar file (NAME<TAB>PATTERN lines); default: built-in 10 meta-actions")
    common.add_argument("--seed", type=int, default=argparse.SUPPRESS, help="random seed (default 0)")
    common.add_argument("--format", choices=("tsv", "json"), default=argparse.SUPPRESS,
                        help="output format (default tsv)")

    parser = argparse.ArgumentParser(prog="metaseg", parents=[common], description=__doc__.splitlines()[0])
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = parser.add_subparsers(dest="command", metavar="COMMAND")
    sub.required = True

    p = sub.add_parser("segment", parents=[common], help="segment every episode of a corpus")
    p.add_argument("corpus")
    p.add_argument("--stats", action="store_true", help="append corpus statistics")
    p.set_defaults(func=cmd_segment)

    p = sub.add_parser("table", parents=[common], help="dump match-interval tables")
    p.add_argument("corpus", nargs="?")
    p.add_argument("--letters", help="encoded action string instead of a corpus")
    p.set_defaults(func=cmd_table)

    p = sub.add_parser("stats", parents=[common], help="compression statistics of a corpus")
    p.add_argument("corpus")
    p.add_argument("--figures", metavar="DIR", help="also render figures into DIR")
    p.set_defaults(func=cmd_stats)

    p = sub.add_parser("metrics", parents=[common], help="SR/GC/PLW/fidelity over a results file")
    p.add_argument("results")
    p.add_argument("--dth", type=float, default=DEFAULT_DTH, help="fidelity distance threshold")
    p.add_argument("--figures", metavar="DIR", help="also render figures into DIR")
    p.set_defaults(func=cmd_metrics)

    p = sub.add_parser("gradcheck", parents=[common], help="finite-difference check of loss gradients")
    p.add_argument("--batches", type=_positive_int, default=100)
    p.add_argument("--inter", type=int, default=2, metavar="K",
                   help="inter-task negatives per state on odd batches")
    p.add_argument("--tol", type=float, default=GRAD_TOL)
    p.set_defaults(func=cmd_gradcheck)

    p = sub.add_parser("gumbel", parents=[common], help="empirical Gumbel-softmax frequencies")
    p.add_argument("--logits", type=_floats, required=True, help="e.g. --logits=-0.36,-1.61,-2.30")
    p.add_argument("--tau", type=float, default=1.0)
    p.add_argument("--draws", type=_positive_int, default=100000)
    p.set_defaults(func=cmd_gumbel)

    p = sub.add_parser("oracle-check", parents=[common], help="DP vs brute-force agreement sweep")
    p.add_argument("--max-len", type=int, default=7)
    p.add_argument("--random", type=int, default=0, metavar="N",
                   help="extra random strings of length 8-20 (count check)")
    p.set_defaults(func=cmd_oracle_check)

    p = sub.add_parser("gen", parents=[common], help="write a synthetic corpus")
    p.add_argument("--n", type=_positive_int, default=10)
    p.add_argument("--mean-len", type=_positive_int, default=50)
    p.add_argument("-o", "--output", metavar="PATH")
    p.set_defaults(func=cmd_gen)
    return parser


def cli_main(argv=None, out=None) -> int:
    out = sys.stdout if out is None else out
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return 2 if exc.code else 0
    # applied here: parent-parser actions are shared, so set_defaults would leak into subcommands
    for key, value in GLOBAL_DEFAULTS.items():
        if not hasattr(args, key):
            setattr(args, key, value)
    try:
        return args.func(args, out)
    except _Usage as exc:
        print(f"metaseg: error: {exc}", file=sys.stderr)
        return 2
    except ValidationError as exc:
        print(f"metaseg: {exc}", file=sys.stderr)
        return 1
    except OSError as exc:
        print(f"metaseg: {exc}", file=sys.stderr)
        return 1


def main():
    sys.exit(cli_main())
