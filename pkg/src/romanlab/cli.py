"""``romanlab`` command line.

Exit status: 0 on success, 1 on a usage error (the verb's help goes to
stderr), 2 when the input data is unusable.
"""

from __future__ import annotations

import argparse
import json
import logging
import random
import sys
import tempfile
from collections.abc import Iterator, Sequence
from pathlib import Path

from . import __version__
from .pipeline import (
    PipelineConfig,
    canonical_scheme,
    romanizer_for,
    stream_romanize,
    sweep_vocab_sizes,
    write_sweep_csv,
)
from .rules import InversionError
from .tokenlab import (
    EmptyTokenSetError,
    FertilityReport,
    TrainerConfig,
    Vocabulary,
    encode,
    fertility,
    observed_tokens,
    relative_fertility_change,
    token_collapse,
    train_bpe,
)
from .ucd import UCDConfigError, UCDParseError
from .uconv import invert_iso9

ROMANIZE_SCHEMES = ("uroman", "uconv-auto", "iso9", "iso15919", "pinyin", "hepburn", "adegn")
EXIT_OK, EXIT_USAGE, EXIT_DATA = 0, 1, 2


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message: str):
        self.print_help(sys.stderr)
        raise UsageError(f"{self.prog}: error: {message}")


def _bool(text: str) -> bool:
    value = text.strip().lower()
    if value in ("true", "1", "yes"):
        return True
    if value in ("false", "0", "no"):
        return False
    raise argparse.ArgumentTypeError(f"expected true or false, got {text!r}")


def _sizes(text: str) -> list[int]:
    try:
        sizes = [int(v) for v in text.split(",") if v.strip()]
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected comma-separated integers, got {text!r}") from None
    return sizes


def _lines(paths: Sequence[str]) -> Iterator[str]:
    for path in paths or ["-"]:
        stream = sys.stdin if path == "-" else open(path, encoding="utf-8")
        try:
            for line in stream:
                yield line.rstrip("\n").rstrip("\r")
        finally:
            if stream is not sys.stdin:
                stream.close()


def _write(text: str, out: str | None) -> None:
    if out is None or out == "-":
        sys.stdout.write(text)
    else:
        Path(out).write_text(text, encoding="utf-8")


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="romanlab", description=__doc__.splitlines()[0], allow_abbrev=False)
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    parser.add_argument("-v", "--verbose", action="store_true", help="log progress to stderr")
    parser.verb_parsers = {}
    verbs = parser.add_subparsers(dest="verb", metavar="VERB", parser_class=_Parser)
    verbs.required = True

    def verb(name: str, help: str) -> argparse.ArgumentParser:
        sub = verbs.add_parser(name, help=help, description=help, allow_abbrev=False)
        parser.verb_parsers[name] = sub
        return sub

    for name, default, help in (
        ("romanize", "uroman", "romanize text line by line"),
        ("transliterate", "uconv-auto", "transliterate text with a rule-based scheme"),
    ):
        p = verb(name, help)
        p.add_argument("inputs", nargs="*", default=["-"], help="input files (default: stdin)")
        p.add_argument("--scheme", default=default, choices=ROMANIZE_SCHEMES)
        p.add_argument("--out", help="output file (default: stdout)")
        p.add_argument("--workers", type=int, default=1)
        p.add_argument("--format", dest="record_format", choices=("plain", "jsonl"), default="plain")
        p.add_argument("--text-field", default="text", help="json-lines field to romanize")
        p.add_argument("--stats", help="write a JSON run summary here")

    p = verb("invert", "undo an invertible transliteration")
    p.add_argument("inputs", nargs="*", default=["-"])
    p.add_argument("--scheme", default="iso9", choices=("iso9",))
    p.add_argument("--out")

    p = verb("tokenizer-train", "train a BPE vocabulary")
    p.add_argument("inputs", nargs="*", default=["-"], help="training corpus, one document per line")
    p.add_argument("--vocab-size", type=int, required=True)
    p.add_argument("--split-ws", type=_bool, default=True, metavar="{true,false}")
    p.add_argument("--byte-fallback", type=_bool, default=True, metavar="{true,false}")
    p.add_argument("--coverage", type=float, default=0.9999, help="character coverage")
    p.add_argument("--out", required=True, help="vocabulary file to write")

    p = verb("encode", "tokenize text with a trained vocabulary")
    p.add_argument("inputs", nargs="*", default=["-"])
    p.add_argument("--vocab", required=True)
    p.add_argument("--out")

    p = verb("fertility", "tokens per word of a corpus")
    p.add_argument("inputs", nargs="*", default=["-"])
    p.add_argument("--vocab", required=True)
    p.add_argument("--word-mode", required=True, choices=("whitespace", "character"))
    p.add_argument("--words-from", help="corpus whose words form the denominator (e.g. the native text)")
    p.add_argument("--baseline", help="fertility report to compare against")
    p.add_argument("--out")

    p = verb("collapse", "share of tokens conflated by romanization")
    src = p.add_mutually_exclusive_group(required=True)
    src.add_argument("--corpus", help="encode this corpus and use its unique tokens")
    src.add_argument("--tokens", help="file with one token per line")
    p.add_argument("--vocab", help="vocabulary (required with --corpus)")
    p.add_argument("--scheme", default="uroman", choices=ROMANIZE_SCHEMES)
    p.add_argument("--groups", action="store_true", help="include collision groups in the report")
    p.add_argument("--out")

    p = verb("sweep", "fertility and collapse across vocabulary sizes")
    p.add_argument("--sizes", type=_sizes, required=True, help="comma-separated sizes, e.g. 1000,2000")
    p.add_argument("--native", required=True)
    p.add_argument("--romanized", help="romanized corpus (default: romanize --native with --scheme)")
    p.add_argument("--scheme", default="uroman", choices=ROMANIZE_SCHEMES)
    p.add_argument("--word-mode", default="whitespace", choices=("whitespace", "character"))
    p.add_argument("--language", default="")
    p.add_argument("--split-ws", type=_bool, default=True, metavar="{true,false}")
    p.add_argument("--save-dir", help="store the vocabulary behind every row here")
    p.add_argument("--out")

    p = verb("bench", "measure pipeline throughput on a synthetic corpus")
    p.add_argument("--workers", type=int, default=1)
    p.add_argument("--docs", type=int, default=10000)
    p.add_argument("--scheme", default="uroman", choices=ROMANIZE_SCHEMES)
    p.add_argument("--seed", type=int, default=0)
    return parser


def _romanize(args) -> int:
    config = PipelineConfig(
        input_paths=args.inputs,
        output_path=args.out,
        scheme=args.scheme,
        worker_count=args.workers,
        record_format=args.record_format,
        text_field=args.text_field,
        stats_path=args.stats,
    )
    summary = stream_romanize(config)
    return EXIT_DATA if summary.error_count else EXIT_OK


def _invert(args) -> int:
    out = [invert_iso9(line) for line in _lines(args.inputs)]
    _write("".join(line + "\n" for line in out), args.out)
    return EXIT_OK


def _train(args) -> int:
    config = TrainerConfig(
        vocab_size=args.vocab_size,
        split_by_whitespace=args.split_ws,
        byte_fallback=args.byte_fallback,
        character_coverage=args.coverage,
    )
    vocab = train_bpe(_lines(args.inputs), config)
    vocab.save(args.out)
    return EXIT_OK


def _encode(args) -> int:
    vocab = Vocabulary.load(args.vocab)
    _write("".join(" ".join(encode(vocab, line)) + "\n" for line in _lines(args.inputs)), args.out)
    return EXIT_OK


def _fertility(args) -> int:
    vocab = Vocabulary.load(args.vocab)
    words_from = list(_lines([args.words_from])) if args.words_from else None
    report = fertility(vocab, _lines(args.inputs), args.word_mode, words_from=words_from)
    result = report.to_dict()
    if args.baseline:
        data = json.loads(Path(args.baseline).read_text(encoding="utf-8"))
        change = relative_fertility_change(report, FertilityReport.from_dict(data))
        result["rel_fertility_change"] = float(change)
    _write(json.dumps(result, indent=2) + "\n", args.out)
    return EXIT_OK


def _collapse(args) -> int:
    if args.corpus:
        if not args.vocab:
            raise UsageError("collapse: --vocab is required with --corpus")
        tokens = observed_tokens(Vocabulary.load(args.vocab), _lines([args.corpus]))
    else:
        tokens = {t for t in _lines([args.tokens]) if t}
    if not tokens:
        raise EmptyTokenSetError()
    report = token_collapse(tokens, romanizer_for(args.scheme))
    data = report.to_dict()
    if not args.groups:
        data.pop("collision_groups")
    _write(json.dumps(data, ensure_ascii=False, indent=2) + "\n", args.out)
    return EXIT_OK


def _sweep(args) -> int:
    native = list(_lines([args.native]))
    romanized = list(_lines([args.romanized])) if args.romanized else None
    rows = sweep_vocab_sizes(
        native,
        romanized,
        args.sizes,
        args.word_mode,
        language=args.language,
        scheme=args.scheme,
        config=TrainerConfig(split_by_whitespace=args.split_ws),
        save_dir=args.save_dir,
    )
    if args.out and args.out != "-":
        write_sweep_csv(rows, args.out)
    else:
        write_sweep_csv(rows, sys.stdout)
    for row in rows:
        if not row.ok:
            print(f"romanlab: sweep row {row.language}/{row.vocab_size}: {row.error}", file=sys.stderr)
    return EXIT_OK if all(row.ok for row in rows) else EXIT_DATA


_BENCH_SENTENCES = (
    "Все люди рождаются свободными и равными.",
    "人人生而自由平等。",
    "すべての人は、生まれながら自由で平等である。",
    "मनुष्य जन्म से स्वतंत्र और समान होते हैं।",
    "الناس يولدون أحرارًا ومتساوين.",
    "All human beings are born free and equal.",
)


def _bench(args) -> int:
    if args.workers < 1 or args.docs < 0:
        raise UsageError("bench: --workers must be >= 1 and --docs >= 0")
    rng = random.Random(args.seed)
    with tempfile.TemporaryDirectory() as tmp:
        source = Path(tmp) / "bench.txt"
        with open(source, "w", encoding="utf-8") as fh:
            for _ in range(args.docs):
                fh.write(" ".join(rng.choice(_BENCH_SENTENCES) for _ in range(rng.randint(1, 8))) + "\n")
        config = PipelineConfig([source], Path(tmp) / "out.txt", scheme=args.scheme, worker_count=args.workers)
        summary = stream_romanize(config)
    report = {k: v for k, v in summary.to_dict().items() if k != "errors"}
    report["workers"] = args.workers
    print(json.dumps(report, indent=2))
    return EXIT_OK


_HANDLERS = {
    "romanize": _romanize,
    "transliterate": _romanize,
    "invert": _invert,
    "tokenizer-train": _train,
    "encode": _encode,
    "fertility": _fertility,
    "collapse": _collapse,
    "sweep": _sweep,
    "bench": _bench,
}


def run(argv: Sequence[str] | None = None) -> int:
    for stream in (sys.stdin, sys.stdout, sys.stderr):
        if hasattr(stream, "reconfigure"):
            stream.reconfigure(encoding="utf-8")
    parser = build_parser()
    try:
        args, extra = parser.parse_known_args(argv)
        if extra:
            parser.verb_parsers[args.verb].error(f"unrecognized arguments: {' '.join(extra)}")
        if getattr(args, "scheme", None):
            canonical_scheme(args.scheme)
        logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING, format="romanlab: %(message)s")
        return _HANDLERS[args.verb](args)
    except UsageError as exc:
        print(exc, file=sys.stderr)
        return EXIT_USAGE
    except (InversionError, UCDParseError, UCDConfigError, ValueError, KeyError, OSError) as exc:
        message = exc.args[0] if isinstance(exc, KeyError) and exc.args else exc
        print(f"romanlab: error: {message}", file=sys.stderr)
        return EXIT_DATA


def main() -> None:
    sys.exit(run())


if __name__ == "__main__":
    main()
