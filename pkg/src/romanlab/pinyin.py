"""Pinyin syllable helpers: tone-mark placement and tone removal."""

from __future__ import annotations

import re
import unicodedata

TONE_MARKS = {1: "̄", 2: "́", 3: "̌", 4: "̀"}
_MARK_TO_TONE = {mark: tone for tone, mark in TONE_MARKS.items()}
_VOWELS = "aeiouü"
_NUMBERED = re.compile(r"^([a-zü]+?)([1-5]?)$")


def place_tone_mark(syllable: str) -> str:
    """Render a numbered syllable such as ``"sheng1"`` or ``"lv4"`` with its tone diacritic.

    The mark goes on ``a`` or ``e`` when present, on the ``o`` of ``ou``,
    otherwise on the last vowel. Syllabic nasals (``m``, ``n``, ``ng``) carry
    the mark on their first letter. Tone 5 or no digit means neutral tone.
    """
    syllable = syllable.lower().replace("v", "ü").replace("u:", "ü")
    m = _NUMBERED.match(syllable)
    if m is None:
        raise ValueError(f"not a numbered pinyin syllable: {syllable!r}")
    body, digit = m.groups()
    tone = int(digit) if digit else 5
    if tone == 5:
        return unicodedata.normalize("NFC", body)
    if "a" in body:
        idx = body.index("a")
    elif "e" in body:
        idx = body.index("e")
    elif "ou" in body:
        idx = body.index("o")
    else:
        vowel_positions = [i for i, ch in enumerate(body) if ch in _VOWELS]
        idx = vowel_positions[-1] if vowel_positions else 0
    marked = body[: idx + 1] + TONE_MARKS[tone] + body[idx + 1 :]
    return unicodedata.normalize("NFC", marked)


def split_tone(marked: str) -> tuple[str, int]:
    """Inverse of :func:`place_tone_mark`: ``"shēng"`` -> ``("sheng", 1)``.

    Only tone diacritics are removed; ``ü`` and ``ê`` keep their own marks.
    """
    tone = 5
    out = []
    for ch in unicodedata.normalize("NFD", marked):
        if ch in _MARK_TO_TONE:
            tone = _MARK_TO_TONE[ch]
        else:
            out.append(ch)
    return unicodedata.normalize("NFC", "".join(out)), tone


def to_ascii(marked: str) -> str:
    """Toneless ASCII form, e.g. ``"lǜ"`` -> ``"lu"``, ``"ê̄"`` -> ``"e"``."""
    decomposed = unicodedata.normalize("NFD", marked)
    return "".join(ch for ch in decomposed if ord(ch) < 0x80)
