"""Unicode Character Database ingestion, normalization and script segmentation.

The database is parsed from the ``UnicodeData.txt`` / ``Scripts.txt`` flat
files shipped in ``romanlab/data/ucd`` (or any directory named by the
``ROMANLAB_UCD_DIR`` environment variable), so romanization results do not
depend on the Unicode tables of the running interpreter.

Script tags are the Scripts.txt property values as plain strings
(``"Latin"``, ``"Cyrillic"``, ``"Han"``, ...). Anything outside the handful
the romanizers dispatch on is simply carried by name; unlisted code points
are ``"Unknown"``.
"""

from __future__ import annotations

import bisect
import functools
import os
import re
from collections.abc import Mapping
from dataclasses import dataclass, field
from pathlib import Path
from typing import NamedTuple

import unicodedata2

__all__ = [
    "CodePointRecord",
    "CharacterDatabase",
    "ScriptRun",
    "UCDParseError",
    "UCDConfigError",
    "load_character_database",
    "default_database",
    "normalize",
    "script_runs",
    "strip_combining_marks",
    "LATIN",
    "CYRILLIC",
    "ARABIC",
    "DEVANAGARI",
    "HAN",
    "HIRAGANA",
    "KATAKANA",
    "COMMON",
    "INHERITED",
    "UNKNOWN",
]

LATIN = "Latin"
CYRILLIC = "Cyrillic"
ARABIC = "Arabic"
DEVANAGARI = "Devanagari"
HAN = "Han"
HIRAGANA = "Hiragana"
KATAKANA = "Katakana"
COMMON = "Common"
INHERITED = "Inherited"
UNKNOWN = "Unknown"

UNICODE_DATA = "UnicodeData.txt"
SCRIPTS = "Scripts.txt"
REQUIRED_FILES = (UNICODE_DATA, SCRIPTS)

DATA_DIR_ENV = "ROMANLAB_UCD_DIR"
_PACKAGED_DIR = Path(__file__).parent / "data" / "ucd"

NORMALIZATION_FORMS = ("NFC", "NFD", "NFKC", "NFKD")


class UCDParseError(ValueError):
    """A UCD flat file line could not be parsed."""

    def __init__(self, filename: str, line_number: int, message: str):
        self.filename = filename
        self.line_number = line_number
        super().__init__(f"{filename}:{line_number}: {message}")


class UCDConfigError(RuntimeError):
    """The UCD source is incomplete (e.g. a required file is missing)."""


@dataclass(frozen=True)
class CodePointRecord:
    codepoint: int
    name: str
    general_category: str
    script: str
    canonical_decomposition: tuple[int, ...] = ()
    decimal: int | None = None

    @property
    def char(self) -> str:
        return chr(self.codepoint)


class ScriptRun(NamedTuple):
    start: int
    end: int
    script: str


# Hangul syllable names are algorithmic (Unicode ch. 3.12).
_JAMO_L = "G GG N D DD R M B BB S SS  J JJ C K T P H".split(" ")
_JAMO_V = "A AE YA YAE EO E YEO YE O WA WAE OE YO U WEO WE WI YU EU YI I".split()
_JAMO_T = [""] + "G GG GS N NJ NH D L LG LM LB LS LT LP LH M B BS S SS NG J C K T P H".split()
_HANGUL_BASE = 0xAC00


def _hangul_name(cp: int) -> str:
    index = cp - _HANGUL_BASE
    l_idx, rest = divmod(index, 21 * 28)
    v_idx, t_idx = divmod(rest, 28)
    return "HANGUL SYLLABLE " + _JAMO_L[l_idx] + _JAMO_V[v_idx] + _JAMO_T[t_idx]


_RANGE_NAME_PREFIX = {
    "CJK Ideograph": "CJK UNIFIED IDEOGRAPH-",
    "Tangut Ideograph": "TANGUT IDEOGRAPH-",
    "Khitan Small Script": "KHITAN SMALL SCRIPT CHARACTER-",
    "Nushu Character": "NUSHU CHARACTER-",
}


@dataclass(frozen=True)
class _Range:
    first: int
    last: int
    label: str
    general_category: str

    def name_of(self, cp: int) -> str:
        if self.label == "Hangul Syllable":
            return _hangul_name(cp)
        prefix = _RANGE_NAME_PREFIX.get(self.label)
        if prefix is not None:
            return f"{prefix}{cp:04X}"
        return f"{self.label.upper()}-{cp:04X}"


@dataclass(frozen=True, eq=False)
class CharacterDatabase:
    """Immutable per-code-point metadata; safe to share between workers."""

    version: str
    _records: Mapping[int, tuple] = field(repr=False)
    _ranges: tuple[_Range, ...] = field(repr=False)
    _script_starts: tuple[int, ...] = field(repr=False)
    _script_ends: tuple[int, ...] = field(repr=False)
    _script_names: tuple[str, ...] = field(repr=False)

    def __len__(self) -> int:
        return len(self._records) + sum(r.last - r.first + 1 for r in self._ranges)

    def lookup(self, cp: int | str) -> CodePointRecord | None:
        """Return the record for ``cp``, or ``None`` if it is unassigned."""
        cp = _as_scalar(cp)
        raw = self._records.get(cp)
        if raw is not None:
            name, cat, decomp, decimal = raw
            return CodePointRecord(cp, name, cat, self.script(cp), decomp, decimal)
        for rng in self._ranges:
            if rng.first <= cp <= rng.last:
                return CodePointRecord(cp, rng.name_of(cp), rng.general_category, self.script(cp))
        return None

    __getitem__ = lookup

    def script(self, cp: int | str) -> str:
        cp = _as_scalar(cp)
        i = bisect.bisect_right(self._script_starts, cp) - 1
        if i >= 0 and cp <= self._script_ends[i]:
            return self._script_names[i]
        return UNKNOWN

    def category(self, cp: int | str) -> str:
        """General category; ``"Cn"`` for unassigned code points."""
        cp = _as_scalar(cp)
        raw = self._records.get(cp)
        if raw is not None:
            return raw[1]
        for rng in self._ranges:
            if rng.first <= cp <= rng.last:
                return rng.general_category
        return "Cn"

    def name(self, cp: int | str) -> str | None:
        record = self.lookup(cp)
        return None if record is None else record.name

    def decimal(self, cp: int | str) -> int | None:
        raw = self._records.get(_as_scalar(cp))
        return None if raw is None else raw[3]


def _as_scalar(cp: int | str) -> int:
    if isinstance(cp, str):
        if len(cp) != 1:
            raise ValueError(f"expected a single character, got {cp!r}")
        cp = ord(cp)
    if not 0 <= cp <= 0x10FFFF or 0xD800 <= cp <= 0xDFFF:
        raise ValueError(f"U+{cp:04X} is not a scalar value")
    return cp


def _parse_hex(token: str, filename: str, line_number: int) -> int:
    try:
        return int(token, 16)
    except ValueError:
        raise UCDParseError(filename, line_number, f"bad code point {token!r}") from None


_SCRIPTS_VERSION = re.compile(r"#\s*Scripts-(\d+\.\d+\.\d+)\.txt")


def _parse_unicode_data(text: str) -> tuple[dict[int, tuple], list[_Range]]:
    records: dict[int, tuple] = {}
    ranges: list[_Range] = []
    pending_first: tuple[int, str, str, int] | None = None
    for line_number, line in enumerate(text.splitlines(), 1):
        line = line.rstrip()
        if not line or line.startswith("#"):
            continue
        fields = line.split(";")
        if len(fields) != 15:
            raise UCDParseError(UNICODE_DATA, line_number, f"expected 15 fields, got {len(fields)}")
        cp = _parse_hex(fields[0], UNICODE_DATA, line_number)
        name, cat = fields[1], fields[2]
        if not name or len(cat) != 2:
            raise UCDParseError(UNICODE_DATA, line_number, "missing name or category")
        if name.endswith(", First>"):
            pending_first = (cp, name[1:-8], cat, line_number)
            continue
        if name.endswith(", Last>"):
            if pending_first is None or pending_first[1] != name[1:-7]:
                raise UCDParseError(UNICODE_DATA, line_number, "range end without matching start")
            first, label, first_cat, _ = pending_first
            pending_first = None
            if cat != "Cs":
                ranges.append(_Range(first, cp, label, first_cat))
            continue
        if 0xD800 <= cp <= 0xDFFF or cp > 0x10FFFF:
            raise UCDParseError(UNICODE_DATA, line_number, f"U+{cp:04X} is not a scalar value")
        decomp_field = fields[5]
        decomp: tuple[int, ...] = ()
        if decomp_field and not decomp_field.startswith("<"):
            decomp = tuple(_parse_hex(t, UNICODE_DATA, line_number) for t in decomp_field.split())
        decimal = int(fields[6]) if fields[6] else None
        if name == "<control>":
            name = f"CONTROL-{cp:04X}"
        records[cp] = (name, cat, decomp, decimal)
    if pending_first is not None:
        raise UCDParseError(UNICODE_DATA, pending_first[3], "range start without end")
    return records, ranges


def _parse_scripts(text: str) -> tuple[str, list[tuple[int, int, str]]]:
    version = ""
    spans: list[tuple[int, int, str]] = []
    for line_number, raw in enumerate(text.splitlines(), 1):
        if not version and (m := _SCRIPTS_VERSION.match(raw)):
            version = m.group(1)
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        try:
            span, script = (part.strip() for part in line.split(";"))
        except ValueError:
            raise UCDParseError(SCRIPTS, line_number, "expected '<range> ; <script>'") from None
        if not script:
            raise UCDParseError(SCRIPTS, line_number, "missing script value")
        lo, _, hi = span.partition("..")
        start = _parse_hex(lo, SCRIPTS, line_number)
        end = _parse_hex(hi, SCRIPTS, line_number) if hi else start
        if end < start:
            raise UCDParseError(SCRIPTS, line_number, "range end precedes start")
        spans.append((start, end, script))
    spans.sort()
    for (s0, e0, _), (s1, _, _) in zip(spans, spans[1:]):
        if s1 <= e0:
            raise UCDParseError(SCRIPTS, 0, f"overlapping ranges at U+{s1:04X}")
    return version, spans


def _read_sources(source) -> dict[str, bytes]:
    if source is None:
        source = os.environ.get(DATA_DIR_ENV) or _PACKAGED_DIR
    if isinstance(source, (str, os.PathLike)):
        directory = Path(source)
        files = {}
        for name in REQUIRED_FILES:
            path = directory / name
            if path.is_file():
                files[name] = path.read_bytes()
        return files
    if isinstance(source, Mapping):
        return {name: bytes(data) for name, data in source.items()}
    raise TypeError(f"unsupported UCD source: {type(source).__name__}")


def load_character_database(source=None) -> CharacterDatabase:
    """Parse UnicodeData.txt and Scripts.txt into a :class:`CharacterDatabase`.

    ``source`` is a directory holding both files, or a mapping from file name
    to raw bytes. ``None`` means ``$ROMANLAB_UCD_DIR`` or the packaged copy.
    """
    files = _read_sources(source)
    for name in REQUIRED_FILES:
        if not files.get(name):
            raise UCDConfigError(f"missing required file: {name}")
    try:
        unicode_data = files[UNICODE_DATA].decode("utf-8")
        scripts = files[SCRIPTS].decode("utf-8")
    except UnicodeDecodeError as exc:
        raise UCDConfigError(f"UCD files must be UTF-8: {exc}") from None
    records, ranges = _parse_unicode_data(unicode_data)
    version, spans = _parse_scripts(scripts)
    if not version:
        raise UCDConfigError(f"{SCRIPTS} does not declare a version header")
    return CharacterDatabase(
        version=version,
        _records=records,
        _ranges=tuple(ranges),
        _script_starts=tuple(s for s, _, _ in spans),
        _script_ends=tuple(e for _, e, _ in spans),
        _script_names=tuple(n for _, _, n in spans),
    )


@functools.lru_cache(maxsize=4)
def _cached_database(directory: str) -> CharacterDatabase:
    return load_character_database(directory)


def default_database() -> CharacterDatabase:
    """The shared database for ``$ROMANLAB_UCD_DIR`` (or the packaged files)."""
    return _cached_database(os.environ.get(DATA_DIR_ENV) or str(_PACKAGED_DIR))


def normalize(text: str, form: str = "NFKC") -> str:
    if form not in NORMALIZATION_FORMS:
        raise ValueError(f"unknown normalization form {form!r}")
    return unicodedata2.normalize(form, text)


def strip_combining_marks(text: str, db: CharacterDatabase | None = None) -> str:
    """NFKD, drop nonspacing marks (Mn), recompose to NFC: ``"Việt"`` -> ``"Viet"``."""
    db = db or default_database()
    decomposed = unicodedata2.normalize("NFKD", text)
    kept = "".join(ch for ch in decomposed if db.category(ch) != "Mn")
    return unicodedata2.normalize("NFC", kept)


_NEUTRAL = (COMMON, INHERITED)


def script_runs(text: str, db: CharacterDatabase | None = None) -> list[ScriptRun]:
    """Partition ``text`` into maximal single-script runs.

    Common and Inherited characters join the preceding run; leading ones join
    the first run that follows. Text made only of such characters forms a
    single run tagged with the first character's script.
    """
    if not text:
        return []
    db = db or default_database()
    runs: list[list] = []
    leading = 0
    for i, ch in enumerate(text):
        script = db.script(ch)
        if script in _NEUTRAL:
            if runs:
                runs[-1][1] = i + 1
            else:
                leading = i + 1
            continue
        if runs and runs[-1][2] == script:
            runs[-1][1] = i + 1
        elif runs:
            runs.append([i, i + 1, script])
        else:
            runs.append([0, i + 1, script])
    if not runs:
        return [ScriptRun(0, leading, db.script(text[0]))]
    return [ScriptRun(*r) for r in runs]
