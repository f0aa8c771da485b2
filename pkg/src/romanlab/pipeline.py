"""Corpus-scale romanization and vocabulary-size sweeps.

``stream_romanize`` fans documents out to worker processes in fixed-size
chunks and writes results back in input order, so the output is identical
for any worker count. ``sweep_vocab_sizes`` produces the fertility/collapse
table (one row per vocabulary size) behind fertility-vs-collapse plots.
"""

from __future__ import annotations

import csv
import io
import json
import logging
import sys
import time
from collections import deque
from collections.abc import Callable, Iterable, Iterator, Sequence
from concurrent.futures import Executor, ProcessPoolExecutor
from contextlib import ExitStack
from dataclasses import asdict, dataclass, field
from fractions import Fraction
from pathlib import Path

from .rules import SOFT_SPACE
from .tokenlab import (
    TrainerConfig,
    Vocabulary,
    VocabularySizeError,
    fertility,
    observed_tokens,
    relative_fertility_change,
    token_collapse,
    train_bpe,
)
from .ucd import normalize
from .uconv import AUTO, SCHEMES, default_registry, uconv
from .uroman import MappingTier, default_uroman

__all__ = [
    "UROMAN",
    "UCONV_AUTO",
    "PipelineConfig",
    "PipelineSummary",
    "SweepRow",
    "SWEEP_FIELDS",
    "romanizer_for",
    "romanize_document",
    "stream_romanize",
    "sweep_vocab_sizes",
    "write_sweep_csv",
    "read_sweep_csv",
]

log = logging.getLogger(__name__)

UROMAN = "UROMAN"
UCONV_AUTO = "UCONV_AUTO"
RECORD_FORMATS = ("plain", "jsonl")
SWEEP_FIELDS = (
    "language",
    "vocab_size",
    "fertility_native",
    "fertility_romanized",
    "rel_fertility_change",
    "collapse_loss",
)


def canonical_scheme(scheme: str) -> str:
    """Accept CLI spellings (``uroman``, ``uconv-auto``, ``iso9``) and return the canonical id."""
    key = scheme.strip().upper().replace("-", "_")
    if key in (UROMAN, UCONV_AUTO):
        return key
    if key == AUTO:
        return UCONV_AUTO
    if key in SCHEMES:
        return key
    raise ValueError(f"unknown scheme {scheme!r}; expected uroman, uconv-auto or one of {', '.join(SCHEMES)}")


def romanizer_for(scheme: str) -> Callable[[str], str]:
    """Plain text -> text function for ``scheme``."""
    scheme = canonical_scheme(scheme)
    if scheme == UROMAN:
        return default_uroman().romanize
    if scheme == UCONV_AUTO:
        return uconv
    return lambda text: uconv(text, scheme)


def romanize_document(text: str, scheme: str) -> tuple[str, int, int]:
    """Romanize one document; returns ``(output, chars_in, chars_dropped)``.

    Characters are counted on the NFKC form the romanizers operate on.
    """
    chars_in = len(normalize(text.replace(SOFT_SPACE, ""), "NFKC"))
    if scheme == UROMAN:
        spans = default_uroman().romanize_spans(text)
        dropped = sum(s.end - s.start for s in spans if s.tier_used is MappingTier.DROP)
        return "".join(s.output for s in spans), chars_in, dropped
    if scheme == UCONV_AUTO:
        return uconv(text), chars_in, 0
    return uconv(text, scheme), chars_in, 0


@dataclass
class PipelineConfig:
    input_paths: Sequence[str | Path] = ("-",)
    output_path: str | Path | None = None
    scheme: str = UROMAN
    worker_count: int = 1
    record_format: str = "plain"
    text_field: str = "text"
    stats_path: str | Path | None = None
    chunk_size: int = 256

    def __post_init__(self):
        if self.worker_count < 1:
            raise ValueError(f"worker_count must be >= 1, got {self.worker_count}")
        if self.chunk_size < 1:
            raise ValueError(f"chunk_size must be >= 1, got {self.chunk_size}")
        if self.record_format not in RECORD_FORMATS:
            raise ValueError(f"record_format must be one of {RECORD_FORMATS}, got {self.record_format!r}")
        self.scheme = canonical_scheme(self.scheme)
        if isinstance(self.input_paths, (str, Path)):
            self.input_paths = [self.input_paths]


@dataclass
class PipelineSummary:
    documents: int = 0
    chars_in: int = 0
    chars_out: int = 0
    chars_passed: int = 0
    chars_dropped: int = 0
    errors: list[tuple[int, str]] = field(default_factory=list)
    wall_time: float = 0.0

    @property
    def error_count(self) -> int:
        return len(self.errors)

    @property
    def docs_per_second(self) -> float:
        return self.documents / self.wall_time if self.wall_time > 0 else 0.0

    @property
    def chars_per_second(self) -> float:
        return self.chars_in / self.wall_time if self.wall_time > 0 else 0.0

    def merge(self, other: PipelineSummary) -> None:
        self.documents += other.documents
        self.chars_in += other.chars_in
        self.chars_out += other.chars_out
        self.chars_passed += other.chars_passed
        self.chars_dropped += other.chars_dropped
        self.errors.extend(other.errors)

    def to_dict(self) -> dict:
        out = asdict(self)
        out["errors"] = [{"record": i, "message": m} for i, m in self.errors]
        out.update(
            error_count=self.error_count,
            docs_per_second=self.docs_per_second,
            chars_per_second=self.chars_per_second,
        )
        return out


def _process_chunk(job: tuple[int, list[str], str, str, str]) -> tuple[list[str], PipelineSummary]:
    """Worker entry point: romanize one chunk of raw input lines."""
    offset, lines, scheme, record_format, text_field = job
    out: list[str] = []
    summary = PipelineSummary()
    for k, line in enumerate(lines):
        index = offset + k
        if record_format == "plain":
            record, text = None, line
        else:
            if not line.strip():
                continue
            try:
                record = json.loads(line)
                text = record[text_field]
                if not isinstance(text, str):
                    raise TypeError(f"field {text_field!r} is {type(text).__name__}, not a string")
            except (ValueError, KeyError, TypeError) as exc:
                summary.errors.append((index, f"{type(exc).__name__}: {exc}"))
                continue
        try:
            romanized, chars_in, dropped = romanize_document(text, scheme)
        except Exception as exc:  # a single bad document must not stop the corpus
            summary.errors.append((index, f"{type(exc).__name__}: {exc}"))
            continue
        summary.documents += 1
        summary.chars_in += chars_in
        summary.chars_dropped += dropped
        summary.chars_passed += chars_in - dropped
        summary.chars_out += len(romanized)
        if record is None:
            out.append(romanized)
        else:
            record[text_field] = romanized
            out.append(json.dumps(record, ensure_ascii=False))
    return out, summary


def _read_lines(paths: Sequence[str | Path], stack: ExitStack) -> Iterator[str]:
    for path in paths:
        if str(path) == "-":
            stream = io.TextIOWrapper(sys.stdin.buffer, encoding="utf-8", newline="") if hasattr(
                sys.stdin, "buffer"
            ) else sys.stdin
        else:
            stream = stack.enter_context(open(path, encoding="utf-8", newline=""))
        for line in stream:
            yield line.rstrip("\r\n") if line.endswith("\n") else line


def _chunks(lines: Iterator[str], size: int) -> Iterator[tuple[int, list[str]]]:
    buf: list[str] = []
    offset = 0
    for line in lines:
        buf.append(line)
        if len(buf) == size:
            yield offset, buf
            offset += size
            buf = []
    if buf:
        yield offset, buf


def _warm(scheme: str) -> None:
    # Load tables before forking so workers share them instead of reloading.
    if scheme == UROMAN:
        default_uroman()
    else:
        registry = default_registry()
        for s in SCHEMES if scheme == UCONV_AUTO else (scheme,):
            registry.ruleset(s)


def stream_romanize(config: PipelineConfig) -> PipelineSummary:
    """Romanize every record of ``config.input_paths`` into ``config.output_path``.

    Output order equals input order for any ``worker_count``. Malformed
    json-lines records are skipped and reported by index in the summary.
    """
    start = time.perf_counter()
    summary = PipelineSummary()
    _warm(config.scheme)
    with ExitStack() as stack:
        if config.output_path is None or str(config.output_path) == "-":
            sink = sys.stdout
        else:
            sink = stack.enter_context(open(config.output_path, "w", encoding="utf-8", newline="\n"))
        jobs = (
            (offset, lines, config.scheme, config.record_format, config.text_field)
            for offset, lines in _chunks(_read_lines(config.input_paths, stack), config.chunk_size)
        )
        if config.worker_count == 1:
            results: Iterable = map(_process_chunk, jobs)
        else:
            executor = stack.enter_context(ProcessPoolExecutor(max_workers=config.worker_count))
            results = _ordered(executor, jobs, window=4 * config.worker_count)
        for out, part in results:
            for line in out:
                sink.write(line)
                sink.write("\n")
            summary.merge(part)
        sink.flush()
    summary.wall_time = time.perf_counter() - start
    for index, message in summary.errors:
        log.warning("record %d: %s", index, message)
    if config.stats_path is not None:
        Path(config.stats_path).write_text(json.dumps(summary.to_dict(), indent=2) + "\n", encoding="utf-8")
    return summary


def _ordered(executor: Executor, jobs: Iterator, window: int) -> Iterator:
    """Like ``executor.map`` but with a bounded number of chunks in flight."""
    pending: deque = deque()
    for job in jobs:
        pending.append(executor.submit(_process_chunk, job))
        if len(pending) >= window:
            yield pending.popleft().result()
    while pending:
        yield pending.popleft().result()


@dataclass(frozen=True)
class SweepRow:
    language: str
    vocab_size: int
    fertility_native: Fraction | None = None
    fertility_romanized: Fraction | None = None
    rel_fertility_change: Fraction | None = None
    collapse_loss: Fraction | None = None
    error: str | None = None

    @property
    def ok(self) -> bool:
        return self.error is None

    def as_csv_row(self) -> dict[str, str]:
        row = {"language": self.language, "vocab_size": str(self.vocab_size)}
        for name in SWEEP_FIELDS[2:]:
            value = getattr(self, name)
            row[name] = "" if value is None else repr(float(value))
        return row


def _compute_row(
    language: str,
    vocab_size: int,
    native_vocab: Vocabulary,
    romanized_vocab: Vocabulary,
    native: Sequence[str],
    romanized: Sequence[str],
    romanizer: Callable[[str], str],
    mode: str,
) -> SweepRow:
    f_native = fertility(native_vocab, native, mode)
    f_rom = fertility(romanized_vocab, romanized, mode, words_from=native)
    collapse = token_collapse(observed_tokens(native_vocab, native), romanizer)
    return SweepRow(
        language,
        vocab_size,
        f_native.fertility,
        f_rom.fertility,
        relative_fertility_change(f_rom, f_native),
        collapse.loss,
    )


def sweep_vocab_sizes(
    native_corpus: Iterable[str],
    romanized_corpus: Iterable[str] | None,
    sizes: Iterable[int],
    mode: str = "whitespace",
    *,
    language: str = "",
    scheme: str = UROMAN,
    romanizer: Callable[[str], str] | None = None,
    config: TrainerConfig | None = None,
    save_dir: str | Path | None = None,
) -> list[SweepRow]:
    """One :class:`SweepRow` per vocabulary size, sorted by size.

    Each corpus is trained once at ``max(sizes)``; smaller vocabularies are
    merge-list truncations of it. Fertility of the romanized corpus is taken
    over the native corpus's words. Rows that cannot be computed carry an
    ``error`` and empty metrics.
    """
    sizes = sorted(set(sizes))
    if not sizes:
        raise ValueError("empty sweep")
    romanizer = romanizer or romanizer_for(scheme)
    native = list(native_corpus)
    romanized = [romanizer(doc) for doc in native] if romanized_corpus is None else list(romanized_corpus)
    if len(romanized) != len(native):
        raise ValueError(f"corpora differ in length: {len(native)} native vs {len(romanized)} romanized documents")
    config = config or TrainerConfig()

    native_full = _train_largest(native, config, sizes[-1])
    romanized_full = _train_largest(romanized, config, sizes[-1])
    if save_dir is not None:
        save_dir = Path(save_dir)
        save_dir.mkdir(parents=True, exist_ok=True)

    rows = []
    for size in sizes:
        try:
            nv, rv = native_full.truncate(size), romanized_full.truncate(size)
            row = _compute_row(language, size, nv, rv, native, romanized, romanizer, mode)
            if save_dir is not None:
                stem = f"{language or 'corpus'}_{size}"
                nv.save(save_dir / f"{stem}_native.json")
                rv.save(save_dir / f"{stem}_romanized.json")
        except (ValueError, VocabularySizeError) as exc:
            log.warning("sweep row %s/%d failed: %s", language, size, exc)
            row = SweepRow(language, size, error=str(exc))
        rows.append(row)
    return rows


def _train_largest(corpus: list[str], config: TrainerConfig, size: int) -> Vocabulary:
    try:
        return train_bpe(corpus, config, vocab_size=size)
    except VocabularySizeError as exc:
        if exc.partial is None:
            raise
        log.warning("%s; smaller sizes are still swept", exc)
        return exc.partial


def recompute_row(
    row: SweepRow,
    native_vocab: Vocabulary,
    romanized_vocab: Vocabulary,
    native: Sequence[str],
    romanized: Sequence[str],
    mode: str = "whitespace",
    romanizer: Callable[[str], str] | None = None,
    scheme: str = UROMAN,
) -> SweepRow:
    """Recompute a sweep row from persisted vocabularies."""
    return _compute_row(
        row.language,
        row.vocab_size,
        native_vocab,
        romanized_vocab,
        list(native),
        list(romanized),
        romanizer or romanizer_for(scheme),
        mode,
    )


def write_sweep_csv(rows: Iterable[SweepRow], out: str | Path | io.TextIOBase) -> None:
    with ExitStack() as stack:
        if isinstance(out, (str, Path)):
            out = stack.enter_context(open(out, "w", encoding="utf-8", newline=""))
        writer = csv.DictWriter(out, fieldnames=SWEEP_FIELDS, lineterminator="\n")
        writer.writeheader()
        for row in rows:
            writer.writerow(row.as_csv_row())


def read_sweep_csv(path: str | Path) -> list[dict[str, str]]:
    with open(path, encoding="utf-8", newline="") as fh:
        return list(csv.DictReader(fh))
