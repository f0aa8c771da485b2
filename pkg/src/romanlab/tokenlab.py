"""Byte-pair encoding at desk scale, plus fertility and token-collapse metrics.

Text is NFKC-normalized; each space becomes the word-boundary marker ``▁``
and a single marker is prepended, so ``"hello world"`` is seen as
``▁hello▁world``. Characters outside the trained inventory fall back to one
``<0xNN>`` token per UTF-8 byte.
"""

from __future__ import annotations

import heapq
import json
import re
from collections import Counter, defaultdict
from collections.abc import Callable, Iterable
from dataclasses import asdict, dataclass, field
from fractions import Fraction
from functools import cached_property
from pathlib import Path

from .ucd import normalize

__all__ = [
    "MARKER",
    "BYTE_TOKENS",
    "UNK",
    "TrainerConfig",
    "Vocabulary",
    "VocabularySizeError",
    "EmptyCorpusError",
    "EmptyTokenSetError",
    "FertilityReport",
    "CollapseReport",
    "train_bpe",
    "encode",
    "decode",
    "count_words",
    "fertility",
    "relative_fertility_change",
    "observed_tokens",
    "token_collapse",
]

MARKER = "▁"
BYTE_TOKENS = tuple(f"<0x{b:02X}>" for b in range(256))
UNK = "<unk>"
WORD_MODES = ("whitespace", "character")
_BYTE_TOKEN = re.compile(r"^<0x([0-9A-F]{2})>$")
_FORMAT_VERSION = 1


class VocabularySizeError(ValueError):
    """The requested size cannot be reached; ``achievable`` is the largest that can."""

    def __init__(self, requested: int, achievable: int, message: str, partial: Vocabulary | None = None):
        self.requested = requested
        self.achievable = achievable
        self.partial = partial
        super().__init__(message)


class EmptyCorpusError(ValueError):
    def __init__(self, message: str = "empty corpus"):
        super().__init__(message)


class EmptyTokenSetError(ValueError):
    def __init__(self, message: str = "empty token set"):
        super().__init__(message)


@dataclass(frozen=True)
class TrainerConfig:
    vocab_size: int = 50048
    split_by_whitespace: bool = True
    byte_fallback: bool = True
    character_coverage: float = 0.9999
    split_by_number: bool = True

    def __post_init__(self):
        if not 0 < self.character_coverage <= 1:
            raise ValueError(f"character_coverage must be in (0, 1], got {self.character_coverage}")
        if self.vocab_size < 1:
            raise ValueError(f"vocab_size must be positive, got {self.vocab_size}")


@dataclass(frozen=True)
class Vocabulary:
    """Trained BPE model: ``tokens`` = reserved + base characters + one token per merge."""

    base: tuple[str, ...]
    merges: tuple[tuple[str, str], ...]
    config: TrainerConfig = field(default_factory=TrainerConfig)
    marker: str = MARKER

    @cached_property
    def reserved(self) -> tuple[str, ...]:
        return BYTE_TOKENS if self.config.byte_fallback else (UNK,)

    @cached_property
    def tokens(self) -> tuple[str, ...]:
        return (*self.reserved, *self.base, *(a + b for a, b in self.merges))

    @cached_property
    def _ranks(self) -> dict[tuple[str, str], int]:
        return {pair: rank for rank, pair in enumerate(self.merges)}

    @cached_property
    def _base_set(self) -> frozenset[str]:
        return frozenset(self.base)

    @cached_property
    def _token_set(self) -> frozenset[str]:
        return frozenset(self.tokens)

    def __len__(self) -> int:
        return len(self.reserved) + len(self.base) + len(self.merges)

    def __contains__(self, token: str) -> bool:
        return token in self._token_set

    @property
    def base_size(self) -> int:
        """Smallest size this vocabulary can be truncated to (no merges)."""
        return len(self.reserved) + len(self.base)

    def truncate(self, vocab_size: int) -> Vocabulary:
        """Keep the first ``vocab_size - base_size`` merges."""
        if not self.base_size <= vocab_size <= len(self):
            raise VocabularySizeError(
                vocab_size, len(self), f"vocab size {vocab_size} outside [{self.base_size}, {len(self)}]"
            )
        config = TrainerConfig(**{**asdict(self.config), "vocab_size": vocab_size})
        return Vocabulary(self.base, self.merges[: vocab_size - self.base_size], config, self.marker)

    def to_dict(self) -> dict:
        return {
            "version": _FORMAT_VERSION,
            "config": asdict(self.config),
            "marker": self.marker,
            "base": list(self.base),
            "tokens": list(self.tokens),
            "merges": [list(pair) for pair in self.merges],
        }

    @classmethod
    def from_dict(cls, data: dict) -> Vocabulary:
        if data.get("version") != _FORMAT_VERSION:
            raise ValueError(f"unsupported vocabulary format version {data.get('version')!r}")
        vocab = cls(
            tuple(data["base"]),
            tuple((a, b) for a, b in data["merges"]),
            TrainerConfig(**data["config"]),
            data.get("marker", MARKER),
        )
        if "tokens" in data and list(vocab.tokens) != data["tokens"]:
            raise ValueError("token list does not match base characters and merges")
        return vocab

    def save(self, path: str | Path) -> None:
        Path(path).write_text(json.dumps(self.to_dict(), ensure_ascii=False, indent=1) + "\n", encoding="utf-8")

    @classmethod
    def load(cls, path: str | Path) -> Vocabulary:
        return cls.from_dict(json.loads(Path(path).read_text(encoding="utf-8")))


def _raw_units(text: str) -> list[str]:
    """Characters of ``text`` after the dummy prefix, with spaces as markers.

    A literal ``▁`` in the input is returned as ``"\\x00▁"`` so it is never
    confused with a boundary.
    """
    text = normalize(text, "NFKC")
    if not text:
        return []
    units = [MARKER]
    for ch in text:
        if ch == " ":
            units.append(MARKER)
        elif ch == MARKER:
            units.append("\x00" + MARKER)
        else:
            units.append(ch)
    return units


def _words(units: list[str], split: bool) -> list[list[str]]:
    if not split:
        return [units] if units else []
    words: list[list[str]] = []
    for unit in units:
        if unit == MARKER or not words:
            words.append([unit])
        else:
            words[-1].append(unit)
    return words


def _is_number_mix(token: str) -> bool:
    chars = [c for c in token if c != MARKER]
    digits = sum(c.isnumeric() for c in chars)
    return 0 < digits < len(chars)


def train_bpe(corpus: Iterable[str], config: TrainerConfig | None = None, **overrides) -> Vocabulary:
    """Train a BPE vocabulary of exactly ``config.vocab_size`` tokens.

    Equal-frequency pairs are broken by their earliest occurrence in the
    corpus. Raises :class:`VocabularySizeError` if the corpus runs out of
    pairs first (``partial`` holds the largest vocabulary reached).
    """
    config = config or TrainerConfig()
    if overrides:
        config = TrainerConfig(**{**asdict(config), **overrides})
    docs = [_raw_units(doc) for doc in corpus]
    docs = [d for d in docs if d]
    if not docs:
        raise EmptyCorpusError()

    freq = Counter()
    first_seen: dict[str, int] = {}
    for units in docs:
        for unit in units:
            if unit[0] != "\x00":
                freq[unit] += 1
                first_seen.setdefault(unit, len(first_seen))
    ranked = sorted(freq, key=lambda c: (-freq[c], first_seen[c]))
    total = sum(freq.values())
    base: list[str] = []
    mass = 0
    for ch in ranked:
        if base and mass >= config.character_coverage * total:
            break
        base.append(ch)
        mass += freq[ch]
    if MARKER not in base:
        base.append(MARKER)
    covered = set(base)
    reserved = len(BYTE_TOKENS) if config.byte_fallback else 1

    minimum = reserved + len(base)
    if config.vocab_size < minimum:
        raise VocabularySizeError(
            config.vocab_size,
            minimum,
            f"vocab size {config.vocab_size} is below the base inventory of {minimum} tokens",
        )

    # Word types in order of first appearance; uncovered characters split words.
    segments: dict[tuple[str, ...], int] = {}
    counts: list[int] = []
    for units in docs:
        for word in _words(units, config.split_by_whitespace):
            seg: list[str] = []
            for unit in [*word, None]:
                if unit is not None and unit in covered:
                    seg.append(unit)
                    continue
                if len(seg) > 1:
                    key = tuple(seg)
                    if key in segments:
                        counts[segments[key]] += 1
                    else:
                        segments[key] = len(counts)
                        counts.append(1)
                seg = []
    merges = _learn_merges(list(segments), counts, config.vocab_size - minimum, set(base), config.split_by_number)
    vocab = Vocabulary(tuple(base), tuple(merges), config)
    if len(vocab) < config.vocab_size:
        raise VocabularySizeError(
            config.vocab_size,
            len(vocab),
            f"corpus supports at most {len(vocab)} tokens, {config.vocab_size} requested",
            partial=vocab,
        )
    return vocab


def _learn_merges(
    word_types: list[tuple[str, ...]], counts: list[int], limit: int, existing: set[str], split_by_number: bool
) -> list[tuple[str, str]]:
    # Each word is a doubly linked list over its original positions; a
    # symbol keeps the position of its first character, so (word id,
    # position) orders occurrences by corpus scan order.
    sym = [list(w) for w in word_types]
    nxt = [list(range(1, len(w))) + [-1] for w in word_types]
    prv = [list(range(-1, len(w) - 1)) for w in word_types]
    pair_count: Counter = Counter()
    occ: dict[tuple[str, str], list[tuple[int, int]]] = defaultdict(list)

    for wid, w in enumerate(sym):
        for i in range(len(w) - 1):
            pair_count[(w[i], w[i + 1])] += counts[wid]
            occ[(w[i], w[i + 1])].append((wid, i))  # already sorted: a valid heap

    def valid(pair, wid, i):
        s = sym[wid]
        j = nxt[wid][i]
        return s[i] == pair[0] and j != -1 and s[j] == pair[1]

    def first(pair):
        heap = occ[pair]
        while heap and not valid(pair, *heap[0]):
            heapq.heappop(heap)
        return heap[0] if heap else None

    def allowed(pair):
        token = pair[0] + pair[1]
        if token in existing or _BYTE_TOKEN.match(token):
            return False
        return not (split_by_number and _is_number_mix(token))

    queue = [(-n, first(p), p) for p, n in pair_count.items() if allowed(p)]
    heapq.heapify(queue)
    merges: list[tuple[str, str]] = []
    while len(merges) < limit and queue:
        neg, key, pair = heapq.heappop(queue)
        if -neg <= 0 or pair_count.get(pair, 0) != -neg or first(pair) != key or not allowed(pair):
            continue
        merges.append(pair)
        left, right = pair
        token = left + right
        existing.add(token)
        touched: set[tuple[str, str]] = set()
        for wid, i in sorted(occ.pop(pair)):
            if not valid(pair, wid, i):
                continue
            s, nx, pv, c = sym[wid], nxt[wid], prv[wid], counts[wid]
            j = nx[i]
            p, k = pv[i], nx[j]
            pair_count[pair] -= c
            if p != -1:
                pair_count[(s[p], left)] -= c
                touched.add((s[p], left))
            if k != -1:
                pair_count[(right, s[k])] -= c
                touched.add((right, s[k]))
            s[i], s[j] = token, None
            nx[i] = k
            if k != -1:
                pv[k] = i
            if p != -1:
                q = (s[p], token)
                pair_count[q] += c
                heapq.heappush(occ[q], (wid, p))
                touched.add(q)
            if k != -1:
                q = (token, s[k])
                pair_count[q] += c
                heapq.heappush(occ[q], (wid, i))
                touched.add(q)
        pair_count.pop(pair, None)
        for q in touched:
            n = pair_count.get(q, 0)
            if n > 0:
                if allowed(q):
                    heapq.heappush(queue, (-n, first(q), q))
            else:
                pair_count.pop(q, None)
                occ.pop(q, None)
    return merges


def _bpe_word(word: tuple[str, ...], ranks: dict[tuple[str, str], int]) -> list[str]:
    symbols = list(word)
    while len(symbols) > 1:
        best, best_rank = None, None
        for i in range(len(symbols) - 1):
            rank = ranks.get((symbols[i], symbols[i + 1]))
            if rank is not None and (best_rank is None or rank < best_rank):
                best, best_rank = (symbols[i], symbols[i + 1]), rank
        if best is None:
            break
        merged, i = [], 0
        while i < len(symbols):
            if i + 1 < len(symbols) and symbols[i] == best[0] and symbols[i + 1] == best[1]:
                merged.append(best[0] + best[1])
                i += 2
            else:
                merged.append(symbols[i])
                i += 1
        symbols = merged
    return symbols


def encode(vocab: Vocabulary, text: str) -> list[str]:
    """Tokenize ``text``; ``decode(vocab, encode(vocab, x)) == NFKC(x)`` with byte fallback."""
    units = _raw_units(text)
    out: list[str] = []
    cache = vocab.__dict__.setdefault("_encode_cache", {})
    for word in _words(units, vocab.config.split_by_whitespace):
        # Segments of covered characters go through BPE; everything else is a fallback token.
        seg: list[str] = []
        for unit in [*word, None]:
            if unit is not None and unit in vocab._base_set:
                seg.append(unit)
                continue
            if seg:
                key = tuple(seg)
                pieces = cache.get(key)
                if pieces is None:
                    pieces = _bpe_word(key, vocab._ranks)
                    if len(cache) < 1 << 16:
                        cache[key] = pieces
                out.extend(pieces)
                seg = []
            if unit is not None:
                ch = unit[-1]
                if vocab.config.byte_fallback:
                    out.extend(BYTE_TOKENS[b] for b in ch.encode("utf-8"))
                else:
                    out.append(UNK)
    return out


def decode(vocab: Vocabulary, tokens: Iterable[str]) -> str:
    """Inverse of :func:`encode`. Raises ``ValueError`` on malformed byte runs."""
    parts: list[str] = []
    pending = bytearray()

    def flush():
        if pending:
            try:
                parts.append(pending.decode("utf-8"))
            except UnicodeDecodeError as exc:
                raise ValueError(f"invalid UTF-8 in byte-fallback tokens: {bytes(pending)!r}") from exc
            pending.clear()

    for token in tokens:
        m = _BYTE_TOKEN.match(token)
        if m is not None and vocab.config.byte_fallback:
            pending.append(int(m.group(1), 16))
            continue
        flush()
        if token not in vocab:
            raise ValueError(f"unknown token {token!r}")
        parts.append("�" if token == UNK else token.replace(vocab.marker, " "))
    flush()
    text = "".join(parts)
    return text[1:] if text.startswith(" ") else text


def count_words(text: str, mode: str = "whitespace") -> int:
    """Whitespace-separated words, or non-whitespace characters in ``character`` mode."""
    if mode == "whitespace":
        return len(text.split())
    if mode == "character":
        return sum(not ch.isspace() for ch in text)
    raise ValueError(f"unknown word mode {mode!r}; expected one of {WORD_MODES}")


@dataclass(frozen=True)
class FertilityReport:
    token_count: int
    word_count: int
    word_count_mode: str = "whitespace"

    @property
    def fertility(self) -> Fraction:
        return Fraction(self.token_count, self.word_count)

    def to_dict(self) -> dict:
        return {**asdict(self), "fertility": float(self.fertility)}

    @classmethod
    def from_dict(cls, data: dict) -> FertilityReport:
        return cls(int(data["token_count"]), int(data["word_count"]), data.get("word_count_mode", "whitespace"))


def fertility(
    vocab: Vocabulary, corpus: Iterable[str], mode: str = "whitespace", *, words_from: Iterable[str] | None = None
) -> FertilityReport:
    """Tokens per word over ``corpus``.

    ``words_from`` supplies the corpus whose words form the denominator, e.g.
    the native text when ``corpus`` is its romanization.
    """
    if mode not in WORD_MODES:
        raise ValueError(f"unknown word mode {mode!r}; expected one of {WORD_MODES}")
    docs = list(corpus)
    tokens = sum(len(encode(vocab, doc)) for doc in docs)
    words = sum(count_words(doc, mode) for doc in (docs if words_from is None else words_from))
    if words == 0:
        raise EmptyCorpusError()
    return FertilityReport(tokens, words, mode)


def relative_fertility_change(test: FertilityReport, baseline: FertilityReport) -> Fraction:
    """``test / baseline - 1``: negative means fewer tokens per word than the baseline."""
    if test.word_count_mode != baseline.word_count_mode:
        raise ValueError(f"word-count modes differ: {test.word_count_mode} vs {baseline.word_count_mode}")
    if test.word_count != baseline.word_count:
        raise ValueError(
            f"reports use different word counts ({test.word_count} vs {baseline.word_count}); "
            "compute both over the baseline corpus's words"
        )
    return test.fertility / baseline.fertility - 1


@dataclass(frozen=True)
class CollapseReport:
    unique_orig: int
    unique_romanized: int
    collision_groups: tuple[tuple[str, frozenset[str]], ...] = ()

    @property
    def loss(self) -> Fraction:
        return 1 - Fraction(self.unique_romanized, self.unique_orig)

    def to_dict(self) -> dict:
        return {
            "unique_orig": self.unique_orig,
            "unique_romanized": self.unique_romanized,
            "loss": float(self.loss),
            "collision_groups": [[form, sorted(group)] for form, group in self.collision_groups],
        }


def observed_tokens(vocab: Vocabulary, corpus: Iterable[str]) -> set[str]:
    """Unique tokens produced by encoding ``corpus``."""
    seen: set[str] = set()
    for doc in corpus:
        seen.update(encode(vocab, doc))
    return seen


def token_collapse(tokens: Iterable[str], romanizer: Callable[[str], str], marker: str = MARKER) -> CollapseReport:
    """Share of distinct tokens that lose distinctness once romanized.

    The leading boundary marker is removed before romanizing and restored
    afterwards, so ``▁x`` and ``x`` never collide because of it.
    """
    domain = set(tokens)
    if not domain:
        raise EmptyTokenSetError()
    groups: dict[str, set[str]] = defaultdict(set)
    for token in domain:
        if token.startswith(marker):
            groups[marker + romanizer(token[len(marker) :])].add(token)
        else:
            groups[romanizer(token)].add(token)
    collisions = tuple(sorted((form, frozenset(g)) for form, g in groups.items() if len(g) > 1))
    return CollapseReport(len(domain), len(groups), collisions)
