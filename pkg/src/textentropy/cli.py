"""Command-line entry point.

Exit codes: 0 success, 1 usage error, 2 input/output error, 3 internal
invariant violation.
"""

from __future__ import annotations

import argparse
import json
import sys
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from pathlib import Path

from .alphabet import AlphabetSpec, load_alphabet_config, read_streams
from .counting import DISJOINT, WINDOWINGS, count_chars, count_ngrams, count_nwords
from .entropy import EntropyReport, build_report
from .errors import InvariantViolation, TextEntropyError
from .fileio import atomic_write_text
from .report import aggregate_json, build_tables, emit_reports_json, emit_tables, safe_name
from .textgen import (
    DEFAULT_SEED,
    build_lexicon,
    compare_reports,
    load_lexicon,
    write_generated,
)
from .zipf import DEFAULT_RANK_WINDOW, export_loglog, loglog_slope, rank_series, zipf_constant

EXIT_OK, EXIT_USAGE, EXIT_INPUT, EXIT_INTERNAL = 0, 1, 2, 3
N_MAX_LIMIT = 40

COMMANDS = ("analyze", "fseries", "rate", "zipf", "generate", "compare", "report")


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_USAGE, f"{self.prog}: error: {message}\n")


@dataclass
class RunConfig:
    command: str
    inputs: list = field(default_factory=list)
    n_max: int = 18
    windowing: str = DISJOINT
    alphabet: AlphabetSpec = field(default_factory=AlphabetSpec)
    out: Path = Path("out")
    fmt: str = "both"
    seed: int = DEFAULT_SEED
    rank_window: tuple = DEFAULT_RANK_WINDOW
    workers: int = 1
    words: int | None = None
    lexicon: str | None = None
    max_words: int | None = None

    def validate(self) -> None:
        if self.command not in COMMANDS:
            raise UsageError(f"unknown command {self.command!r}")
        if self.command in ("analyze", "report") and not 3 <= self.n_max <= N_MAX_LIMIT:
            raise UsageError(f"--n-max must be between 3 and {N_MAX_LIMIT}, got {self.n_max}")
        if self.command != "generate" and not self.inputs:
            raise UsageError(f"{self.command} needs at least one input")
        if self.command == "compare" and len(self.inputs) != 2:
            raise UsageError("compare takes exactly two inputs: NATURAL ARTIFICIAL")
        if self.command == "generate":
            if self.words is None or self.words < 1:
                raise UsageError("generate needs --words K with K >= 1")
            if bool(self.lexicon) == bool(self.inputs):
                raise UsageError("generate needs either --lexicon CSV or one corpus input, not both")
        lo, hi = self.rank_window
        if not 1 <= lo <= hi:
            raise UsageError(f"--rank-window must satisfy 1 <= LO <= HI, got {lo}:{hi}")
        if self.workers < 1:
            raise UsageError("--workers must be >= 1")


def parse_rank_window(text: str) -> tuple:
    try:
        lo, hi = (int(x) for x in text.split(":"))
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected LO:HI, got {text!r}") from None
    return lo, hi


def expand_inputs(inputs) -> list:
    """Files as given; directories contribute their regular files, sorted."""
    paths = []
    for item in inputs:
        p = Path(item)
        if p.is_dir():
            paths.extend(sorted(q for q in p.iterdir() if q.is_file() and not q.name.startswith(".")))
        elif p.exists():
            paths.append(p)
        else:
            raise FileNotFoundError(2, "no such file or directory", str(p))
    return paths


def corpus_name(path: Path) -> str:
    return path.stem


def analyze_file(path, n_max, windowing, spec) -> EntropyReport:
    try:
        streams = read_streams(path, spec)
        return build_report(streams, n_max=n_max, windowing=windowing, name=corpus_name(Path(path)), spec=spec)
    except TextEntropyError as exc:
        if not isinstance(exc, InvariantViolation):
            exc.args = (f"{path}: {exc}",)
        raise


def analyze_all(paths, cfg: RunConfig, n_max=None) -> list:
    n_max = cfg.n_max if n_max is None else n_max
    args = [(p, n_max, cfg.windowing, cfg.alphabet) for p in paths]
    if cfg.workers > 1 and len(paths) > 1:
        with ProcessPoolExecutor(max_workers=min(cfg.workers, len(paths))) as pool:
            futures = [pool.submit(analyze_file, *a) for a in args]
            return [f.result() for f in futures]
    return [analyze_file(*a) for a in args]


def _write_outputs(reports, cfg: RunConfig) -> None:
    if cfg.fmt in ("json", "both"):
        emit_reports_json(reports, cfg.out)
        atomic_write_text(cfg.out / "aggregate.json", aggregate_json(reports) + "\n")
    if cfg.fmt in ("csv", "both"):
        emit_tables(reports, cfg.out)


def _print_rows(rows) -> None:
    for row in rows:
        print(",".join(str(c) for c in row))


def cmd_analyze(cfg: RunConfig) -> None:
    reports = analyze_all(expand_inputs(cfg.inputs), cfg)
    _write_outputs(reports, cfg)
    for r in reports:
        print(
            f"{r.name}: words={r.word_count} alpha={r.alpha:.2f} H_char={r.h_char:.2f} "
            f"H_digram={r.h_digram:.2f} H_trigram={r.h_trigram:.2f} H_max at n={r.h_max_n} "
            f"onset={r.onset} H_L={r.entropy_rate:.2f} R={r.redundancy:.3f}"
        )
        for flag in r.flags:
            print(f"  note: {flag}", file=sys.stderr)


def cmd_fseries(cfg: RunConfig) -> None:
    reports = analyze_all(expand_inputs(cfg.inputs), cfg, n_max=5)
    tables = build_tables(reports)
    _print_rows(tables["f_char"])
    print()
    _print_rows(tables["f_word"])
    if cfg.fmt in ("csv", "both"):
        emit_tables(reports, cfg.out)


def cmd_rate(cfg: RunConfig) -> None:
    reports = analyze_all(expand_inputs(cfg.inputs), cfg, n_max=3)
    tables = build_tables(reports)
    _print_rows(tables["entropy_rate"])
    _print_rows(tables["redundancy"][1:])
    if cfg.fmt in ("json", "both"):
        atomic_write_text(cfg.out / "aggregate.json", aggregate_json(reports) + "\n")


def zipf_summary(path: Path, cfg: RunConfig) -> dict:
    streams = read_streams(path, cfg.alphabet)
    tables = {
        "char": count_chars(streams),
        "digram": count_ngrams(streams, 2),
        "trigram": count_ngrams(streams, 3),
        "1word": count_nwords(streams, 1, cfg.windowing),
        "2word": count_nwords(streams, 2, cfg.windowing),
        "3word": count_nwords(streams, 3, cfg.windowing),
    }
    name = corpus_name(path)
    lo, hi = cfg.rank_window
    summary = {"corpus": name, "rank_window": [lo, hi]}
    for label, table in tables.items():
        series = rank_series(table)
        export_loglog(series, cfg.out / safe_name(name) / f"loglog_{label}.dat")
        top = min(hi, len(series))
        if label == "1word":
            summary["zipf_constant"] = zipf_constant(series, min(lo, top), top)
        if label in ("1word", "2word", "3word"):
            try:
                summary[f"slope_{label}"] = loglog_slope(series, min(lo, top), top)
            except TextEntropyError:
                summary[f"slope_{label}"] = None
    return summary


def cmd_zipf(cfg: RunConfig) -> None:
    summaries = [zipf_summary(p, cfg) for p in expand_inputs(cfg.inputs)]
    atomic_write_text(cfg.out / "zipf_summary.json", json.dumps(summaries, indent=2) + "\n")
    for s in summaries:
        print(
            f"{s['corpus']}: zipf_constant={s['zipf_constant']:.4f} "
            f"slope_2word={s['slope_2word']} slope_3word={s['slope_3word']}"
        )


def cmd_generate(cfg: RunConfig) -> None:
    if cfg.lexicon:
        model = load_lexicon(cfg.lexicon, seed=cfg.seed)
    else:
        (path,) = expand_inputs(cfg.inputs)
        streams = read_streams(path, cfg.alphabet)
        model = build_lexicon(count_nwords(streams, 1), seed=cfg.seed, max_words=cfg.max_words)
    target = cfg.out / "generated.txt"
    meta = write_generated(model, cfg.words, target, seed=cfg.seed)
    print(f"wrote {target} ({meta['k_words']} words, seed {meta['seed']}, {meta['rng']})")


def _load_or_analyze(path: Path, cfg: RunConfig) -> EntropyReport:
    if path.suffix == ".json":
        return EntropyReport.from_json(path.read_text(encoding="utf-8"))
    return analyze_file(path, cfg.n_max, cfg.windowing, cfg.alphabet)


def cmd_compare(cfg: RunConfig) -> None:
    natural, artificial = (_load_or_analyze(Path(p), cfg) for p in cfg.inputs)
    comparison = compare_reports(natural, artificial)
    d = comparison.to_json_dict()
    rows = [["quantity", "natural", "artificial", "absolute", "relative"]]
    for name, v in d["scalars"].items():
        rows.append([name, f"{v['natural']:.4f}", f"{v['artificial']:.4f}",
                     f"{v['absolute']:.4f}", f"{v['relative']:.4f}"])
    for v in d["h_nword"]:
        rows.append([f"h_{v['n']}word", f"{v['natural']:.4f}", f"{v['artificial']:.4f}",
                     f"{v['absolute']:.4f}", f"{v['relative']:.4f}"])
    _print_rows(rows)
    if cfg.fmt in ("json", "both"):
        atomic_write_text(cfg.out / "comparison.json", json.dumps(d, indent=2) + "\n")
    if cfg.fmt in ("csv", "both"):
        atomic_write_text(cfg.out / "comparison.csv", "\n".join(",".join(map(str, r)) for r in rows) + "\n")


def cmd_report(cfg: RunConfig) -> None:
    reports = []
    for p in expand_inputs(cfg.inputs):
        reports.append(EntropyReport.from_json(Path(p).read_text(encoding="utf-8")))
    emit_tables(reports, cfg.out)
    atomic_write_text(cfg.out / "aggregate.json", aggregate_json(reports) + "\n")
    print(f"wrote {len(reports)} corpora to {cfg.out}")


HANDLERS = {
    "analyze": cmd_analyze,
    "fseries": cmd_fseries,
    "rate": cmd_rate,
    "zipf": cmd_zipf,
    "generate": cmd_generate,
    "compare": cmd_compare,
    "report": cmd_report,
}


def build_parser() -> argparse.ArgumentParser:
    common = _Parser(add_help=False)
    common.add_argument("--n-max", type=int, default=18, help="largest n-word block (default 18, max 40)")
    common.add_argument("--windowing", choices=WINDOWINGS, default=DISJOINT,
                        help="n-word block windows (default disjoint)")
    common.add_argument("--case-sensitive", action="store_true", help="keep case in word tokens")
    common.add_argument("--include-digits", action="store_true", help="count digits in the alphabet size")
    common.add_argument("--include-space-punct", action="store_true",
                        help="count space and punctuation in the alphabet size")
    common.add_argument("--alphabet-config", metavar="FILE", help="key = value alphabet settings")
    common.add_argument("--rank-window", type=parse_rank_window, default=DEFAULT_RANK_WINDOW,
                        metavar="LO:HI", help="rank window for the Zipf fit (default 2:100)")
    common.add_argument("--seed", type=int, default=DEFAULT_SEED)
    common.add_argument("--out", default="out", metavar="DIR", help="output directory")
    common.add_argument("--format", dest="fmt", choices=("csv", "json", "both"), default="both")
    common.add_argument("--workers", type=int, default=1, help="corpora analyzed in parallel")

    parser = _Parser(prog="textentropy", description="Entropy analysis of written text corpora.")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)
    helps = {
        "analyze": "full entropy battery, one report per corpus plus tables",
        "fseries": "conditional entropy series for characters and words",
        "rate": "entropy rate and redundancy",
        "zipf": "rank-frequency plot data, Zipf constant and slopes",
        "generate": "first-order artificial text from a lexicon or corpus",
        "compare": "compare a natural corpus with an artificial one",
        "report": "re-emit tables from saved report JSON files",
    }
    for name in COMMANDS:
        p = sub.add_parser(name, parents=[common], help=helps[name])
        p.add_argument("inputs", nargs="*", metavar="INPUT")
        if name == "generate":
            p.add_argument("--words", type=int, help="number of words to generate")
            p.add_argument("--lexicon", metavar="CSV", help="word,count or word,probability file")
            p.add_argument("--max-words", type=int, help="keep only the most frequent words of a corpus lexicon")
    return parser


def config_from_args(ns) -> RunConfig:
    spec = load_alphabet_config(ns.alphabet_config) if ns.alphabet_config else AlphabetSpec()
    spec = AlphabetSpec(
        letters=spec.letters,
        include_digits=spec.include_digits or ns.include_digits,
        case_sensitive=spec.case_sensitive or ns.case_sensitive,
        include_space_punct=spec.include_space_punct or ns.include_space_punct,
    )
    return RunConfig(
        command=ns.command,
        inputs=list(ns.inputs),
        n_max=ns.n_max,
        windowing=ns.windowing,
        alphabet=spec,
        out=Path(ns.out),
        fmt=ns.fmt,
        seed=ns.seed,
        rank_window=ns.rank_window,
        workers=ns.workers,
        words=getattr(ns, "words", None),
        lexicon=getattr(ns, "lexicon", None),
        max_words=getattr(ns, "max_words", None),
    )


def run(cfg: RunConfig) -> int:
    try:
        cfg.validate()
    except UsageError as exc:
        print(f"textentropy: error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    try:
        HANDLERS[cfg.command](cfg)
    except InvariantViolation as exc:
        print(f"textentropy: internal error: {exc}", file=sys.stderr)
        return EXIT_INTERNAL
    except FileNotFoundError as exc:
        print(f"textentropy: error: cannot read {exc.filename}: no such file", file=sys.stderr)
        return EXIT_INPUT
    except (TextEntropyError, OSError) as exc:
        where = f" ({exc.filename})" if getattr(exc, "filename", None) else ""
        print(f"textentropy: error: {exc}{where}", file=sys.stderr)
        return EXIT_INPUT
    return EXIT_OK


def main(argv=None) -> int:
    parser = build_parser()
    ns = parser.parse_args(argv)
    try:
        cfg = config_from_args(ns)
    except (TextEntropyError, OSError) as exc:
        print(f"textentropy: error: {exc}", file=sys.stderr)
        return EXIT_USAGE if isinstance(exc, TextEntropyError) else EXIT_INPUT
    return run(cfg)


if __name__ == "__main__":
    sys.exit(main())
