#!/usr/bin/env python3
"""Regenerate the pinned data files shipped under ``src/romanlab/data``.

Build-time only. Needs ``unicodedata2==17.0.*``, ``fonttools`` (for its copy
of Scripts.txt) and ``pypinyin`` (Han readings). Run from the repo root:

    python tools/build_data.py

Outputs:
    data/ucd/UnicodeData.txt      UnicodeData.txt-format records
    data/ucd/Scripts.txt          Scripts.txt-format ranges
    data/uroman/han_readings.tsv  toneless ASCII readings (uroman tier table)
    data/schemes/pinyin.rules     tone-marked readings (rule file)
"""

from __future__ import annotations

import re
import sys
from pathlib import Path

import unicodedata2 as ud
from fontTools.unicodedata import Scripts
from pypinyin.pinyin_dict import pinyin_dict

ROOT = Path(__file__).resolve().parents[1]
sys.path.insert(0, str(ROOT / "src"))

from romanlab.pinyin import place_tone_mark, split_tone, to_ascii

DATA = ROOT / "src" / "romanlab" / "data"
UCD_VERSION = "17.0.0"

# Names the UCD encodes as <..., First>/<..., Last> ranges.
_RANGE_PREFIXES = (
    "CJK UNIFIED IDEOGRAPH-",
    "TANGUT IDEOGRAPH-",
    "KHITAN SMALL SCRIPT CHARACTER-",
    "NUSHU CHARACTER-",
)
_RANGE_LABELS = {
    "CJK UNIFIED IDEOGRAPH-": "CJK Ideograph",
    "TANGUT IDEOGRAPH-": "Tangut Ideograph",
    "KHITAN SMALL SCRIPT CHARACTER-": "Khitan Small Script",
    "NUSHU CHARACTER-": "Nushu Character",
}


def _range_key(cp: int) -> tuple[str, str] | None:
    ch = chr(cp)
    cat = ud.category(ch)
    if cat == "Cs":
        return ("Surrogate", cat)
    if cat == "Co":
        return ("Private Use", cat)
    if 0xAC00 <= cp <= 0xD7A3:
        return ("Hangul Syllable", cat)
    name = ud.name(ch, "")
    if not name and cat != "Cc":
        # unicodedata2 leaves Tangut ideographs unnamed.
        return ("Tangut Ideograph", cat)
    for prefix in _RANGE_PREFIXES:
        if name.startswith(prefix) and name == f"{prefix}{cp:04X}":
            return (_RANGE_LABELS[prefix], cat)
    return None


def _fields(cp: int, name: str) -> str:
    ch = chr(cp)
    cat = ud.category(ch)
    decomp = ud.decomposition(ch)
    dec = ud.decimal(ch, None)
    dig = ud.digit(ch, None)
    # Unihan numeric values do not belong in UnicodeData.txt range lines.
    num = None if name.startswith("<") and name != "<control>" else ud.numeric(ch, None)
    if num is None:
        num_s = ""
    elif float(num).is_integer():
        num_s = str(int(num))
    else:
        num_s = _fraction(num)
    return ";".join(
        [
            f"{cp:04X}",
            name,
            cat,
            str(ud.combining(ch)),
            ud.bidirectional(ch),
            decomp,
            "" if dec is None else str(dec),
            "" if dig is None else str(dig),
            num_s,
            "Y" if ud.mirrored(ch) else "N",
            "",
            "",
            "",
            "",
            "",
        ]
    )


def _fraction(value: float) -> str:
    from fractions import Fraction

    frac = Fraction(value).limit_denominator(1000)
    return f"{frac.numerator}/{frac.denominator}"


def build_unicode_data() -> str:
    lines = []
    cp = 0
    while cp < 0x110000:
        ch = chr(cp)
        if ud.category(ch) == "Cn":
            cp += 1
            continue
        key = _range_key(cp)
        if key is not None:
            end = cp
            while end + 1 < 0x110000 and _range_key(end + 1) == key:
                end += 1
            label, _ = key
            if label == "Surrogate":
                # The UCD splits this block into three labelled ranges.
                for lo, hi, lab in (
                    (0xD800, 0xDB7F, "Non Private Use High Surrogate"),
                    (0xDB80, 0xDBFF, "Private Use High Surrogate"),
                    (0xDC00, 0xDFFF, "Low Surrogate"),
                ):
                    lines.append(_fields(lo, f"<{lab}, First>"))
                    lines.append(_fields(hi, f"<{lab}, Last>"))
            else:
                lines.append(_fields(cp, f"<{label}, First>"))
                lines.append(_fields(end, f"<{label}, Last>"))
            cp = end + 1
            continue
        name = ud.name(ch, "")
        if not name:
            name = "<control>"
        lines.append(_fields(cp, name))
        cp += 1
    return "\n".join(lines) + "\n"


def build_scripts() -> str:
    out = [
        f"# Scripts-{UCD_VERSION}.txt",
        "# Regenerated from the Unicode Character Database by tools/build_data.py.",
        "# Code points not listed have the value Unknown.",
        "",
    ]
    starts = Scripts.RANGES
    for i, start in enumerate(starts):
        end = (starts[i + 1] - 1) if i + 1 < len(starts) else 0x10FFFF
        code = Scripts.VALUES[i]
        if code == "Zzzz":
            continue
        name = Scripts.NAMES[code]
        span = f"{start:04X}" if start == end else f"{start:04X}..{end:04X}"
        out.append(f"{span:<14}; {name}")
    return "\n".join(out) + "\n"


def han_readings() -> list[tuple[int, str]]:
    readings = []
    for cp in sorted(pinyin_dict):
        if ud.category(chr(cp)) == "Cn" or ud.normalize("NFKC", chr(cp)) != chr(cp):
            # Compatibility ideographs never survive input normalization.
            continue
        first = pinyin_dict[cp].split(",")[0].strip()
        body, tone = split_tone(first)
        # Round-trip through our own tone placement: the shipped file must be
        # reproducible from numbered syllables.
        marked = place_tone_mark(f"{body}{tone}")
        if marked != first:
            raise SystemExit(f"tone placement mismatch for U+{cp:04X}: {first} vs {marked}")
        readings.append((cp, marked))
    return readings


def main() -> None:
    if ud.unidata_version != UCD_VERSION:
        raise SystemExit(f"unicodedata2 provides {ud.unidata_version}, expected {UCD_VERSION}")
    (DATA / "ucd").mkdir(parents=True, exist_ok=True)
    (DATA / "ucd" / "UnicodeData.txt").write_text(build_unicode_data(), encoding="utf-8")
    (DATA / "ucd" / "Scripts.txt").write_text(build_scripts(), encoding="utf-8")

    readings = han_readings()
    tsv = [
        "# Han readings: most common Mandarin reading, toneless ASCII.",
        "# <codepoint hex>\t<ascii>\t<tier>",
    ]
    rules = [
        "# Hanyu Pinyin with tone marks, one rule per Han character.",
        "# The leading \\b is a soft space: it becomes a real space only between",
        "# two non-space outputs, and never before closing punctuation.",
        "",
        "、 -> ,\\b",
        "。 -> .\\b",
        "「 -> “",
        "」 -> ”",
        "『 -> ‘",
        "』 -> ’",
        "《 -> «",
        "》 -> »",
        "・ -> ·",
        "",
    ]
    for cp, marked in readings:
        ascii_form = to_ascii(marked)
        if not re.fullmatch(r"[a-z]+", ascii_form):
            raise SystemExit(f"unexpected reading for U+{cp:04X}: {marked!r}")
        tsv.append(f"{cp:04X}\t{ascii_form}\tScriptTable")
        rules.append(f"{chr(cp)} -> \\b{marked}")
    (DATA / "uroman").mkdir(parents=True, exist_ok=True)
    (DATA / "uroman" / "han_readings.tsv").write_text("\n".join(tsv) + "\n", encoding="utf-8")
    (DATA / "schemes").mkdir(parents=True, exist_ok=True)
    (DATA / "schemes" / "pinyin.rules").write_text("\n".join(rules) + "\n", encoding="utf-8")
    print(f"UCD {UCD_VERSION}: wrote UnicodeData.txt, Scripts.txt; {len(readings)} Han readings")


if __name__ == "__main__":
    main()
