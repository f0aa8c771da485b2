"""ASCII-only universal romanizer.

Each position of the (NFKC-normalized) input is romanized by the first tier
that knows it:

1. ``Override``: curated corrections (Cyrillic digraphs, Arabic skeleton,
   Devanagari signs, punctuation, ...),
2. ``ScriptTable``: kana romaji and toneless Han readings,
3. ``NameHeuristic``: diacritic stripping and the phonetic payload of the
   Unicode character name (``DEVANAGARI LETTER MA`` -> ``ma``),
4. ``Passthrough`` for ASCII and whitespace; anything else is dropped.

Table lookups use longest match over the table keys, so multi-codepoint
graphemes (kana digraphs, nukta consonants) are romanized as one unit.
"""

from __future__ import annotations

import enum
import functools
import re
from dataclasses import dataclass
from pathlib import Path

from .rules import _CLOSING, SOFT_SPACE
from .ucd import CharacterDatabase, CodePointRecord, default_database, normalize

__all__ = [
    "MappingTier",
    "RomanizedSpan",
    "MappingTableError",
    "Uroman",
    "load_mapping_table",
    "latin_from_unicode_name",
    "han_to_pinyin_ascii",
    "uroman",
    "uroman_spans",
    "default_uroman",
]

_DATA = Path(__file__).parent / "data" / "uroman"

ABUGIDA_SCRIPTS = frozenset(
    {"Devanagari", "Bengali", "Gurmukhi", "Gujarati", "Oriya", "Tamil", "Telugu", "Kannada", "Malayalam", "Sinhala"}
)
# Scripts whose word-final inherent vowel is not pronounced.
_FINAL_SCHWA_DELETION = frozenset({"Devanagari"})
_SOKUON = frozenset("っッ")
_CHOONPU = "ー"
_CONSONANT_A = re.compile(r"^[bcdfghjklmnpqrstvwxyz]+a$")

_NAME_PATTERNS = (
    re.compile(r"^(?P<script>[A-Z][A-Z -]*?) (?:(?P<case>SMALL|CAPITAL) )?LETTER (?P<x>.+)$"),
    re.compile(r"^(?P<script>[A-Z][A-Z -]*?) SYLLABLE (?P<x>.+)$"),
    re.compile(r"^(?P<script>[A-Z][A-Z -]*?) VOWEL SIGN (?P<x>.+)$"),
)
_NAME_MODIFIERS = frozenset(
    {"SMALL", "CAPITAL", "FINAL", "INITIAL", "MEDIAL", "ISOLATED", "DOTLESS", "SHORT", "TURNED", "REVERSED",
     "SCRIPT", "BARRED", "INVERTED", "MODIFIER", "SUBSCRIPT", "SUPERSCRIPT", "HALFWIDTH", "FULLWIDTH"}
)


class MappingTier(str, enum.Enum):
    OVERRIDE = "Override"
    SCRIPT_TABLE = "ScriptTable"
    NAME_HEURISTIC = "NameHeuristic"
    PASSTHROUGH = "Passthrough"
    DROP = "Drop"


@dataclass(frozen=True)
class RomanizedSpan:
    """One romanized unit; ``start``/``end`` index the NFKC-normalized input."""

    start: int
    end: int
    output: str
    tier_used: MappingTier

    @property
    def input_range(self) -> range:
        return range(self.start, self.end)


class MappingTableError(ValueError):
    def __init__(self, line_number: int, message: str):
        self.line_number = line_number
        super().__init__(f"line {line_number}: {message}")


def load_mapping_table(text: str, default_tier: MappingTier | None = None) -> dict[str, tuple[str, MappingTier]]:
    """Parse ``<hex codepoints>\\t<ascii>\\t<tier>`` lines.

    ``\\b`` in an output is a soft space. Outputs must be ASCII.
    """
    table: dict[str, tuple[str, MappingTier]] = {}
    for line_number, line in enumerate(text.splitlines(), 1):
        if not line.strip() or line.lstrip().startswith("#"):
            continue
        fields = line.split("\t")
        if len(fields) > 3 and fields[3].startswith("#"):
            fields = fields[:3]
        if len(fields) == 2 and default_tier is not None:
            fields.append(default_tier.value)
        if len(fields) != 3:
            raise MappingTableError(line_number, f"expected 3 tab-separated fields, got {len(fields)}")
        key_hex, output, tier_name = fields
        try:
            key = "".join(chr(int(h, 16)) for h in key_hex.split())
            tier = MappingTier(tier_name.strip())
        except ValueError as exc:
            raise MappingTableError(line_number, str(exc)) from None
        if not key:
            raise MappingTableError(line_number, "empty source grapheme")
        if not output.isascii():
            raise MappingTableError(line_number, f"non-ASCII output {output!r}")
        table[key] = (output.replace("\\b", SOFT_SPACE), tier)
    return table


def latin_from_unicode_name(record: CodePointRecord) -> str | None:
    """Phonetic payload of a letter name: ``CYRILLIC CAPITAL LETTER ZHE`` -> ``"Zhe"``.

    Understands ``<script> [SMALL|CAPITAL] LETTER X``, ``<script> SYLLABLE X``
    and ``<script> VOWEL SIGN X``. Qualifiers after ``WITH`` and shape words
    such as ``FINAL`` or ``DOTLESS`` are ignored; names whose payload is still
    more than one word give ``None``.
    """
    if not record.general_category.startswith(("L", "M")):
        return None
    for pattern in _NAME_PATTERNS:
        m = pattern.match(record.name)
        if m is not None:
            break
    else:
        return None
    payload = m.group("x").split(" WITH ", 1)[0]
    words = [w for w in payload.split() if w not in _NAME_MODIFIERS]
    if len(words) != 1:
        return None
    letters = re.sub(r"[^A-Za-z]", "", words[0]).lower()
    if not letters:
        return None
    if m.groupdict().get("case") == "CAPITAL":
        letters = letters[0].upper() + letters[1:]
    return letters


class Uroman:
    """Immutable romanizer built from mapping tables and a character database."""

    def __init__(
        self,
        db: CharacterDatabase | None = None,
        overrides: dict[str, tuple[str, MappingTier]] | None = None,
        script_table: dict[str, tuple[str, MappingTier]] | None = None,
    ):
        self.db = db or default_database()
        if overrides is None:
            overrides = load_mapping_table((_DATA / "overrides.tsv").read_text(encoding="utf-8"))
        if script_table is None:
            script_table = {}
            for name in ("kana.tsv", "han_readings.tsv"):
                script_table.update(
                    load_mapping_table((_DATA / name).read_text(encoding="utf-8"), MappingTier.SCRIPT_TABLE)
                )
        self._overrides = dict(overrides)
        self._script_table = dict(script_table)
        self._max_key = max((len(k) for k in (*self._overrides, *self._script_table)), default=1)
        # Per-character memos; all inputs are immutable, so these only grow.
        self._derived: dict[str, str | None] = {}
        self._scripts: dict[str, str] = {}
        self._names: dict[str, str] = {}
        self._categories: dict[str, str] = {}

    def romanize(self, text: str) -> str:
        return "".join(span.output for span in self.romanize_spans(text))

    __call__ = romanize

    def han_reading(self, ch: str) -> str | None:
        hit = self._script_table.get(ch)
        if hit is None or self._script(ch) != "Han":
            return None
        return hit[0]

    def romanize_spans(self, text: str) -> list[RomanizedSpan]:
        text = normalize(text.replace(SOFT_SPACE, ""), "NFKC")
        spans: list[RomanizedSpan] = []
        i, n = 0, len(text)
        while i < n:
            ch = text[i]
            if ch.isspace():
                spans.append(RomanizedSpan(i, i + 1, ch if ch.isascii() else " ", MappingTier.PASSTHROUGH))
                i += 1
                continue
            if ch.isascii():
                spans.append(RomanizedSpan(i, i + 1, ch, MappingTier.PASSTHROUGH))
                i += 1
                continue
            hit = self._table_match(text, i)
            if hit is not None:
                length, output, tier = hit
                if text[i] in _SOKUON:
                    output = self._sokuon(text, i + length)
                output = self._inherent_vowel(text, i, i + length, output)
                spans.append(RomanizedSpan(i, i + length, output, tier))
                i += length
                continue
            if ch == _CHOONPU:
                spans.append(RomanizedSpan(i, i + 1, _last_vowel(spans), MappingTier.SCRIPT_TABLE))
                i += 1
                continue
            derived = self._derive(ch)
            if derived is None:
                spans.append(RomanizedSpan(i, i + 1, "", MappingTier.DROP))
            else:
                derived = self._inherent_vowel(text, i, i + 1, derived)
                spans.append(RomanizedSpan(i, i + 1, derived, MappingTier.NAME_HEURISTIC))
            i += 1
        return _resolve_spans(spans)

    def _table_match(self, text: str, i: int) -> tuple[int, str, MappingTier] | None:
        for length in range(min(self._max_key, len(text) - i), 0, -1):
            key = text[i : i + length]
            hit = self._overrides.get(key)
            if hit is None:
                hit = self._script_table.get(key)
            if hit is not None:
                return length, hit[0], hit[1]
        return None

    def _derive(self, ch: str) -> str | None:
        try:
            return self._derived[ch]
        except KeyError:
            out = self._derived[ch] = self._derive_uncached(ch)
            return out

    def _script(self, ch: str) -> str:
        script = self._scripts.get(ch)
        if script is None:
            script = self._scripts[ch] = self.db.script(ch)
        return script

    def _category(self, ch: str) -> str:
        cat = self._categories.get(ch)
        if cat is None:
            cat = self._categories[ch] = self.db.category(ch)
        return cat

    def _derive_uncached(self, ch: str) -> str | None:
        record = self.db.lookup(ch)
        if record is None:
            return None
        decimal = record.decimal
        if decimal is not None and record.general_category == "Nd":
            return str(decimal)
        stripped = "".join(
            c for c in normalize(ch, "NFKD") if self.db.category(c) not in ("Mn", "Me")
        )
        if stripped and stripped.isascii():
            return stripped
        if stripped and stripped != ch:
            hit = self._table_match(stripped, 0)
            if hit is not None and hit[0] == len(stripped):
                return hit[1]
        return latin_from_unicode_name(record)

    def _sokuon(self, text: str, j: int) -> str:
        hit = self._table_match(text, j) if j < len(text) else None
        if hit is None or not hit[1]:
            return ""
        following = hit[1]
        if following.startswith("ch"):
            return "t"
        return following[0] if following[0] not in "aiueon" else ""

    def _inherent_vowel(self, text: str, start: int, end: int, rom: str) -> str:
        """Decide whether an abugida consonant keeps its inherent ``a``."""
        first = text[start]
        script = self._script(first)
        if script not in ABUGIDA_SCRIPTS or not _CONSONANT_A.match(rom):
            return rom
        if not self._category(first).startswith("L"):
            return rom
        base = rom[:-1]
        nxt = text[end] if end < len(text) else ""
        if nxt and self._is_nukta(nxt):
            end += 1
            nxt = text[end] if end < len(text) else ""
        if nxt and (self._is_vowel_sign(nxt) or self._is_virama(nxt)):
            return base
        prev = text[start - 1] if start > 0 else ""
        if prev and self._is_virama(prev):
            return rom
        if not prev or not (prev.isalpha() or self._category(prev).startswith("M")):
            return rom
        if self._at_word_end(nxt) and script in _FINAL_SCHWA_DELETION:
            return base
        return rom

    def _at_word_end(self, nxt: str) -> bool:
        if not nxt:
            return True
        if nxt.isalpha():
            return False
        if self._category(nxt).startswith("M"):
            hit = self._overrides.get(nxt)
            rom = hit[0] if hit is not None else self._derive(nxt)
            return not (rom and any(c.isalpha() for c in rom))
        return True

    def _name(self, ch: str) -> str:
        name = self._names.get(ch)
        if name is None:
            name = self._names[ch] = self.db.name(ch) or ""
        return name

    def _is_vowel_sign(self, ch: str) -> bool:
        return "VOWEL SIGN" in self._name(ch)

    def _is_virama(self, ch: str) -> bool:
        name = self._name(ch)
        return "VIRAMA" in name or "AL-LAKUNA" in name

    def _is_nukta(self, ch: str) -> bool:
        return "SIGN NUKTA" in self._name(ch)


def _last_vowel(spans: list[RomanizedSpan]) -> str:
    for span in reversed(spans):
        if span.output:
            last = span.output[-1]
            return last if last in "aiueo" else ""
    return ""


def _resolve_spans(spans: list[RomanizedSpan]) -> list[RomanizedSpan]:
    """Resolve soft spaces across span boundaries; a real space stays with the span that asked for it."""
    if not any(SOFT_SPACE in s.output for s in spans):
        return spans
    owned = [(ch, k) for k, span in enumerate(spans) for ch in span.output]
    pieces: list[list[str]] = [[] for _ in spans]
    last = ""
    i, n = 0, len(owned)
    while i < n:
        ch, k = owned[i]
        if ch != SOFT_SPACE:
            pieces[k].append(ch)
            last = ch
            i += 1
            continue
        while i < n and owned[i][0] == SOFT_SPACE:
            i += 1
        nxt = owned[i][0] if i < n else ""
        if last and nxt and not last.isspace() and not nxt.isspace() and nxt not in _CLOSING:
            pieces[k].append(" ")
            last = " "
    return [
        RomanizedSpan(s.start, s.end, "".join(p), s.tier_used) if SOFT_SPACE in s.output else s
        for s, p in zip(spans, pieces)
    ]


@functools.lru_cache(maxsize=1)
def default_uroman() -> Uroman:
    return Uroman()


def uroman(text: str) -> str:
    """Romanize ``text`` to ASCII with the packaged tables."""
    return default_uroman().romanize(text)


def uroman_spans(text: str) -> list[RomanizedSpan]:
    return default_uroman().romanize_spans(text)


def han_to_pinyin_ascii(character: str) -> str | None:
    """Toneless pinyin of a Han character's most common reading; ``None`` if unknown."""
    return default_uroman().han_reading(character)
